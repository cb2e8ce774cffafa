use std::fmt;
use std::path::Path;

use serde::Serialize;

use super::output::read_csv;
use super::record::{format_real, SweepRecord, COLUMNS};
use crate::error::{Error, Result};

/// How two values of one column are compared.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Tolerance {
    Exact,
    /// `|a − b| ≤ rel·max(|a|, |b|)`.
    Relative { rel: f64 },
    /// `max(a, b)/min(a, b) ≤ factor` for positive values.
    Factor { factor: f64 },
    /// `|a − b| ≤ abs`.
    Absolute { abs: f64 },
    /// Not compared.
    Ignore,
}

/// Tolerance per column shipped with the presets.
pub fn default_tolerance(column: &str) -> Tolerance {
    match column {
        "kappa" => Tolerance::Factor { factor: 10.0 },
        "v_realspace" | "v_minus" | "v_plus" => Tolerance::Absolute { abs: 1e-6 },
        "sweep_value" | "min_abs_e" | "min_s" | "wipr" | "corner_mass" | "min_s_minus"
        | "min_s_plus" | "quasienergy_gap_0" | "quasienergy_gap_pi" => Tolerance::Relative { rel: 1e-8 },
        _ => Tolerance::Exact,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnReport {
    pub column: String,
    pub tolerance: Tolerance,
    /// Largest deviation in the rule's own measure (ratio for `Factor`).
    pub max_deviation: f64,
    pub mismatches: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub rows: usize,
    pub columns: Vec<ColumnReport>,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.columns.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24} {:<10} {:>24} {:>10}  result", "column", "rule", "max deviation", "mismatches")?;
        for c in &self.columns {
            let rule = match c.tolerance {
                Tolerance::Exact => "exact".to_string(),
                Tolerance::Relative { rel } => format!("rel {rel:e}"),
                Tolerance::Factor { factor } => format!("x{factor}"),
                Tolerance::Absolute { abs } => format!("abs {abs:e}"),
                Tolerance::Ignore => "ignored".to_string(),
            };
            writeln!(
                f,
                "{:<24} {:<10} {:>24} {:>10}  {}",
                c.column,
                rule,
                format_real(c.max_deviation),
                c.mismatches,
                if c.passed { "pass" } else { "FAIL" }
            )?;
        }
        write!(
            f,
            "{} rows: {}",
            self.rows,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

fn deviation(tol: Tolerance, a: &str, b: &str) -> (f64, bool) {
    if a == b {
        let zero = if matches!(tol, Tolerance::Factor { .. }) { 1.0 } else { 0.0 };
        return (zero, true);
    }
    let parsed = (a.parse::<f64>(), b.parse::<f64>());
    let (x, y) = match parsed {
        (Ok(x), Ok(y)) => (x, y),
        _ => return (f64::INFINITY, matches!(tol, Tolerance::Ignore)),
    };
    match tol {
        Tolerance::Ignore => (0.0, true),
        Tolerance::Exact => (f64::INFINITY, false),
        Tolerance::Relative { rel } => {
            let scale = x.abs().max(y.abs());
            let d = if scale == 0.0 { 0.0 } else { (x - y).abs() / scale };
            (d, d <= rel)
        }
        Tolerance::Absolute { abs } => {
            let d = (x - y).abs();
            (d, d <= abs)
        }
        Tolerance::Factor { factor } => {
            if x <= 0.0 || y <= 0.0 || !x.is_finite() || !y.is_finite() {
                return (f64::INFINITY, false);
            }
            let r = x.max(y) / x.min(y);
            (r, r <= factor)
        }
    }
}

/// Compare records against a reference with [`default_tolerance`].
pub fn compare_records(actual: &[SweepRecord], reference: &[SweepRecord]) -> Result<CompareReport> {
    compare_with(actual, reference, default_tolerance)
}

pub fn compare_with<F>(actual: &[SweepRecord], reference: &[SweepRecord], rule: F) -> Result<CompareReport>
where
    F: Fn(&str) -> Tolerance,
{
    if actual.len() != reference.len() {
        return Err(Error::Schema(format!(
            "row count differs: {} vs {} in the reference",
            actual.len(),
            reference.len()
        )));
    }
    let a_rows: Vec<Vec<String>> = actual.iter().map(SweepRecord::to_fields).collect();
    let b_rows: Vec<Vec<String>> = reference.iter().map(SweepRecord::to_fields).collect();
    let columns = COLUMNS
        .iter()
        .enumerate()
        .map(|(j, &col)| {
            let tol = rule(col);
            let mut max_dev: f64 = if matches!(tol, Tolerance::Factor { .. }) { 1.0 } else { 0.0 };
            let mut mismatches = 0;
            for (a, b) in a_rows.iter().zip(&b_rows) {
                let (d, ok) = deviation(tol, &a[j], &b[j]);
                max_dev = max_dev.max(d);
                if !ok {
                    mismatches += 1;
                }
            }
            ColumnReport {
                column: col.to_string(),
                tolerance: tol,
                max_deviation: max_dev,
                mismatches,
                passed: mismatches == 0,
            }
        })
        .collect();
    Ok(CompareReport {
        rows: actual.len(),
        columns,
    })
}

/// Compare two record CSV files.
pub fn compare_to_reference(actual: &Path, reference: &Path) -> Result<CompareReport> {
    let a = read_csv(actual)?;
    let b = read_csv(reference)?;
    compare_records(&a, &b)
}
