use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Outcome of one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The non-Bloch windings are undefined at this point.
    GapClosing(String),
    /// A numerical routine failed; diagnostics after the failure are null.
    Error(String),
}

impl Status {
    pub fn is_error(&self) -> bool {
        matches!(self, Status::Error(_))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Ok => f.write_str("ok"),
            Status::GapClosing(m) => write!(f, "gap_closing: {m}"),
            Status::Error(m) => write!(f, "error: {m}"),
        }
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ok" {
            Ok(Status::Ok)
        } else if let Some(m) = s.strip_prefix("gap_closing: ") {
            Ok(Status::GapClosing(m.to_string()))
        } else if let Some(m) = s.strip_prefix("error: ") {
            Ok(Status::Error(m.to_string()))
        } else {
            Err(Error::Schema(format!("unrecognized status `{s}`")))
        }
    }
}

/// One (sweep point, realization) row. Diagnostics that were not requested
/// or could not be computed are `None` and serialize as empty fields.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub sweep_value: f64,
    pub min_abs_e: Option<f64>,
    pub min_s: Option<f64>,
    pub wipr: Option<f64>,
    pub kappa: Option<f64>,
    pub v_nonbloch_x: Option<i64>,
    pub v_nonbloch_y: Option<i64>,
    pub v_2d: Option<i64>,
    pub v_realspace: Option<f64>,
    pub zero_modes: Option<usize>,
    pub min_s_minus: Option<f64>,
    pub min_s_plus: Option<f64>,
    pub v_minus: Option<f64>,
    pub v_plus: Option<f64>,
    pub seed: u64,
    pub realization: usize,
    pub point: usize,
    pub lx: usize,
    pub ly: usize,
    pub zero_modes_cluster: Option<usize>,
    pub zero_modes_ambiguous: Option<bool>,
    pub near_transition: Option<bool>,
    pub corner_mass: Option<f64>,
    pub zero_modes_minus: Option<usize>,
    pub zero_modes_plus: Option<usize>,
    pub near_transition_minus: Option<bool>,
    pub near_transition_plus: Option<bool>,
    pub quasienergy_gap_0: Option<f64>,
    pub quasienergy_gap_pi: Option<f64>,
    pub status: Status,
    /// Kept out of the CSV so identical runs produce identical bytes.
    pub wall_time_ms: u64,
}

/// CSV header in record field order.
pub const COLUMNS: [&str; 30] = [
    "sweep_value",
    "min_abs_e",
    "min_s",
    "wipr",
    "kappa",
    "v_nonbloch_x",
    "v_nonbloch_y",
    "v_2d",
    "v_realspace",
    "zero_modes",
    "min_s_minus",
    "min_s_plus",
    "v_minus",
    "v_plus",
    "seed",
    "realization",
    "point",
    "lx",
    "ly",
    "zero_modes_cluster",
    "zero_modes_ambiguous",
    "near_transition",
    "corner_mass",
    "zero_modes_minus",
    "zero_modes_plus",
    "near_transition_minus",
    "near_transition_plus",
    "quasienergy_gap_0",
    "quasienergy_gap_pi",
    "status",
];

/// Columns that can be drawn against `sweep_value`.
pub const PLOTTABLE: [&str; 18] = [
    "min_abs_e",
    "min_s",
    "wipr",
    "kappa",
    "v_nonbloch_x",
    "v_nonbloch_y",
    "v_2d",
    "v_realspace",
    "zero_modes",
    "min_s_minus",
    "min_s_plus",
    "v_minus",
    "v_plus",
    "corner_mass",
    "zero_modes_minus",
    "zero_modes_plus",
    "quasienergy_gap_0",
    "quasienergy_gap_pi",
];

/// Unit of each column, for the manifest.
pub fn unit(column: &str) -> &'static str {
    match column {
        "sweep_value" => "vx (hopping units), disorder strength, or cells per direction",
        "min_abs_e" | "min_s" | "min_s_minus" | "min_s_plus" => "energy (hopping units)",
        "quasienergy_gap_0" | "quasienergy_gap_pi" => "quasienergy (inverse time units)",
        "wipr" => "cells (distance-weighted probability)",
        "corner_mass" => "probability",
        "kappa" => "dimensionless",
        "seed" | "realization" | "point" => "index",
        "lx" | "ly" => "unit cells",
        "status" => "text",
        _ => "dimensionless integer or winding",
    }
}

/// 17 significant digits, scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T, F: Fn(&T) -> String>(v: &Option<T>, f: F) -> String {
    v.as_ref().map(f).unwrap_or_default()
}

fn parse_opt<T: FromStr>(field: &str, column: &str) -> Result<Option<T>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| Error::Schema(format!("bad value `{field}` in column {column}")))
}

fn parse_req<T: FromStr>(field: &str, column: &str) -> Result<T> {
    parse_opt(field, column)?.ok_or_else(|| Error::Schema(format!("column {column} is empty")))
}

impl SweepRecord {
    pub fn new(point: usize, realization: usize, seed: u64, sweep_value: f64, lx: usize, ly: usize) -> Self {
        SweepRecord {
            sweep_value,
            min_abs_e: None,
            min_s: None,
            wipr: None,
            kappa: None,
            v_nonbloch_x: None,
            v_nonbloch_y: None,
            v_2d: None,
            v_realspace: None,
            zero_modes: None,
            min_s_minus: None,
            min_s_plus: None,
            v_minus: None,
            v_plus: None,
            seed,
            realization,
            point,
            lx,
            ly,
            zero_modes_cluster: None,
            zero_modes_ambiguous: None,
            near_transition: None,
            corner_mass: None,
            zero_modes_minus: None,
            zero_modes_plus: None,
            near_transition_minus: None,
            near_transition_plus: None,
            quasienergy_gap_0: None,
            quasienergy_gap_pi: None,
            status: Status::Ok,
            wall_time_ms: 0,
        }
    }

    pub fn to_fields(&self) -> Vec<String> {
        let r = |v: &Option<f64>| opt(v, |x| format_real(*x));
        let i = |v: &Option<i64>| opt(v, |x| x.to_string());
        let u = |v: &Option<usize>| opt(v, |x| x.to_string());
        let b = |v: &Option<bool>| opt(v, |x| x.to_string());
        vec![
            format_real(self.sweep_value),
            r(&self.min_abs_e),
            r(&self.min_s),
            r(&self.wipr),
            r(&self.kappa),
            i(&self.v_nonbloch_x),
            i(&self.v_nonbloch_y),
            i(&self.v_2d),
            r(&self.v_realspace),
            u(&self.zero_modes),
            r(&self.min_s_minus),
            r(&self.min_s_plus),
            r(&self.v_minus),
            r(&self.v_plus),
            self.seed.to_string(),
            self.realization.to_string(),
            self.point.to_string(),
            self.lx.to_string(),
            self.ly.to_string(),
            u(&self.zero_modes_cluster),
            b(&self.zero_modes_ambiguous),
            b(&self.near_transition),
            r(&self.corner_mass),
            u(&self.zero_modes_minus),
            u(&self.zero_modes_plus),
            b(&self.near_transition_minus),
            b(&self.near_transition_plus),
            r(&self.quasienergy_gap_0),
            r(&self.quasienergy_gap_pi),
            self.status.to_string(),
        ]
    }

    pub fn from_fields<S: AsRef<str>>(fields: &[S]) -> Result<Self> {
        if fields.len() != COLUMNS.len() {
            return Err(Error::Schema(format!(
                "expected {} fields, found {}",
                COLUMNS.len(),
                fields.len()
            )));
        }
        let f = |i: usize| fields[i].as_ref();
        let c = |i: usize| COLUMNS[i];
        Ok(SweepRecord {
            sweep_value: parse_req(f(0), c(0))?,
            min_abs_e: parse_opt(f(1), c(1))?,
            min_s: parse_opt(f(2), c(2))?,
            wipr: parse_opt(f(3), c(3))?,
            kappa: parse_opt(f(4), c(4))?,
            v_nonbloch_x: parse_opt(f(5), c(5))?,
            v_nonbloch_y: parse_opt(f(6), c(6))?,
            v_2d: parse_opt(f(7), c(7))?,
            v_realspace: parse_opt(f(8), c(8))?,
            zero_modes: parse_opt(f(9), c(9))?,
            min_s_minus: parse_opt(f(10), c(10))?,
            min_s_plus: parse_opt(f(11), c(11))?,
            v_minus: parse_opt(f(12), c(12))?,
            v_plus: parse_opt(f(13), c(13))?,
            seed: parse_req(f(14), c(14))?,
            realization: parse_req(f(15), c(15))?,
            point: parse_req(f(16), c(16))?,
            lx: parse_req(f(17), c(17))?,
            ly: parse_req(f(18), c(18))?,
            zero_modes_cluster: parse_opt(f(19), c(19))?,
            zero_modes_ambiguous: parse_opt(f(20), c(20))?,
            near_transition: parse_opt(f(21), c(21))?,
            corner_mass: parse_opt(f(22), c(22))?,
            zero_modes_minus: parse_opt(f(23), c(23))?,
            zero_modes_plus: parse_opt(f(24), c(24))?,
            near_transition_minus: parse_opt(f(25), c(25))?,
            near_transition_plus: parse_opt(f(26), c(26))?,
            quasienergy_gap_0: parse_opt(f(27), c(27))?,
            quasienergy_gap_pi: parse_opt(f(28), c(28))?,
            status: f(29).parse()?,
            wall_time_ms: 0,
        })
    }

    /// Numeric value of a plottable column.
    pub fn value(&self, column: &str) -> Option<f64> {
        let u = |v: Option<usize>| v.map(|x| x as f64);
        let i = |v: Option<i64>| v.map(|x| x as f64);
        match column {
            "sweep_value" => Some(self.sweep_value),
            "min_abs_e" => self.min_abs_e,
            "min_s" => self.min_s,
            "wipr" => self.wipr,
            "kappa" => self.kappa,
            "v_nonbloch_x" => i(self.v_nonbloch_x),
            "v_nonbloch_y" => i(self.v_nonbloch_y),
            "v_2d" => i(self.v_2d),
            "v_realspace" => self.v_realspace,
            "zero_modes" => u(self.zero_modes),
            "min_s_minus" => self.min_s_minus,
            "min_s_plus" => self.min_s_plus,
            "v_minus" => self.v_minus,
            "v_plus" => self.v_plus,
            "corner_mass" => self.corner_mass,
            "zero_modes_minus" => u(self.zero_modes_minus),
            "zero_modes_plus" => u(self.zero_modes_plus),
            "quasienergy_gap_0" => self.quasienergy_gap_0,
            "quasienergy_gap_pi" => self.quasienergy_gap_pi,
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_round_trip_including_nulls_and_infinities() {
        let mut r = SweepRecord::new(3, 1, 77, 0.1 + 0.2, 20, 20);
        r.min_s = Some(3.0e-12);
        r.kappa = Some(f64::INFINITY);
        r.v_2d = Some(-1);
        r.zero_modes = Some(2);
        r.near_transition = Some(false);
        r.status = Status::Error("svd, \"did not\" converge".into());
        let back = SweepRecord::from_fields(&r.to_fields()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.sweep_value.to_bits(), (0.1f64 + 0.2).to_bits());
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn header_and_fields_align() {
        assert_eq!(SweepRecord::new(0, 0, 0, 0.0, 1, 1).to_fields().len(), COLUMNS.len());
        for p in PLOTTABLE {
            assert!(COLUMNS.contains(&p));
        }
    }
}
