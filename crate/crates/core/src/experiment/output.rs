use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::config::{ExperimentConfig, Format, SweepParameter};
use super::record::{unit, SweepRecord, COLUMNS};
use crate::diagnostics::{scaling_series, ScalingSeries};
use crate::error::{Error, Result};

pub const CSV_NAME: &str = "records.csv";
pub const MANIFEST_NAME: &str = "manifest.json";
pub const TIMINGS_NAME: &str = "timings.csv";

pub const BASIS_CONVENTION: &str =
    "index = ((2*ix + sx)*Ly + iy)*2 + sy with cells ix, iy from 0 and sublattice s = 0 (A), 1 (B)";

/// Write through `<path>.tmp` and rename; an interrupted write never replaces `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn csv_bytes(records: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for r in records {
        w.write_record(r.to_fields())?;
    }
    w.into_inner()
        .map_err(|e| Error::InvalidInput(format!("csv buffer: {e}")))
}

pub fn write_csv(path: &Path, records: &[SweepRecord]) -> Result<()> {
    write_atomic(path, &csv_bytes(records)?)
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != COLUMNS {
        return Err(Error::Schema(format!(
            "{} does not carry the record header",
            path.display()
        )));
    }
    rdr.records()
        .map(|row| SweepRecord::from_fields(&row?.iter().collect::<Vec<_>>()))
        .collect()
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    v.retain(|x| !x.is_nan());
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// `(sweep_value, median over realizations)` per point for one column.
pub fn point_medians(records: &[SweepRecord], column: &str) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < records.len() {
        let point = records[i].point;
        let x = records[i].sweep_value;
        let mut vals = Vec::new();
        while i < records.len() && records[i].point == point {
            vals.extend(records[i].value(column));
            i += 1;
        }
        if let Some(m) = median(vals) {
            out.push((x, m));
        }
    }
    out
}

/// Fit of median `Min[s]` against size for size sweeps.
pub fn size_scaling(records: &[SweepRecord], cfg: &ExperimentConfig) -> Option<ScalingSeries> {
    if cfg.sweep.parameter != SweepParameter::Size {
        return None;
    }
    let pts = point_medians(records, "min_s");
    if pts.len() < 3 {
        return None;
    }
    let sizes: Vec<usize> = pts.iter().map(|p| p.0 as usize).collect();
    let values: Vec<f64> = pts.iter().map(|p| p.1).collect();
    scaling_series(&sizes, &values).ok()
}

pub fn manifest(records: &[SweepRecord], cfg: &ExperimentConfig, files: &[String]) -> Result<serde_json::Value> {
    let seeds: Vec<_> = records
        .iter()
        .map(|r| json!([r.point, r.realization, r.seed]))
        .collect();
    let columns: Vec<_> = COLUMNS
        .iter()
        .map(|c| json!({"name": c, "unit": unit(c)}))
        .collect();
    let failures = records.iter().filter(|r| r.status.is_error()).count();
    Ok(json!({
        "software": {"name": "nhsvd", "version": env!("CARGO_PKG_VERSION")},
        "scenario": cfg.scenario,
        "config": serde_json::to_value(cfg)?,
        "seeds": {"base": cfg.seed, "per_record": seeds},
        "scale": {
            "run": {"lx": cfg.model.lx, "ly": cfg.model.ly},
            "paper": cfg.paper_scale,
        },
        "basis": BASIS_CONVENTION,
        "columns": columns,
        "record_count": records.len(),
        "failures": failures,
        "scaling": size_scaling(records, cfg),
        "files": files,
    }))
}

/// Line plot of one column's per-point median against the sweep value.
pub fn render_svg(records: &[SweepRecord], column: &str, log: bool) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 60.0;
    let pts: Vec<(f64, f64)> = point_medians(records, column)
        .into_iter()
        .filter(|&(_, y)| y.is_finite() && (!log || y > 0.0))
        .map(|(x, y)| (x, if log { y.log10() } else { y }))
        .collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let ylabel = if log {
        format!("log10 {column}")
    } else {
        column.to_string()
    };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{ylabel} vs sweep value</text>"#,
        W / 2.0
    );
    let _ = writeln!(
        s,
        r#"<path d="M{M} {M} L{M} {} L{} {}" fill="none" stroke="black"/>"#,
        H - M,
        W - M,
        H - M
    );
    if !pts.is_empty() {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x1 == x0 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 == y0 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
        let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2} ", if i == 0 { "M" } else { "L" }, px(x), py(y));
        }
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, d.trim_end());
        for &(x, y) in &pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#, px(x), py(y));
        }
        let label = |v: f64| format!("{v:.3e}");
        let _ = writeln!(
            s,
            r#"<text x="{M}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            H - M + 16.0,
            label(x0)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            W - M,
            H - M + 16.0,
            label(x1)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            M - 4.0,
            H - M,
            label(y0)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            M - 4.0,
            M + 4.0,
            label(y1)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn timings_bytes(records: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["point", "realization", "wall_time_ms"])?;
    for r in records {
        w.write_record([r.point.to_string(), r.realization.to_string(), r.wall_time_ms.to_string()])?;
    }
    w.into_inner()
        .map_err(|e| Error::InvalidInput(format!("csv buffer: {e}")))
}

/// Publish the requested formats into `cfg.output.dir`. Refuses an empty
/// record list unless `force` is set.
pub fn emit_outputs(records: &[SweepRecord], cfg: &ExperimentConfig, force: bool) -> Result<Vec<PathBuf>> {
    if records.is_empty() && !force {
        return Err(Error::InvalidInput("no records to emit".into()));
    }
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let formats = &cfg.output.formats;
    if formats.contains(&Format::Csv) {
        let p = dir.join(CSV_NAME);
        write_csv(&p, records)?;
        written.push(p);
        let t = dir.join(TIMINGS_NAME);
        write_atomic(&t, &timings_bytes(records)?)?;
        written.push(t);
    }
    if formats.contains(&Format::Svg) {
        for col in &cfg.output.plots {
            let log = cfg.output.log_scale.contains(col);
            let p = dir.join(format!("{col}.svg"));
            write_atomic(&p, render_svg(records, col, log).as_bytes())?;
            written.push(p);
        }
    }
    if formats.contains(&Format::Json) {
        let p = dir.join(MANIFEST_NAME);
        let mut names: Vec<String> = written
            .iter()
            .filter_map(|f| f.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect();
        names.push(MANIFEST_NAME.to_string());
        let m = manifest(records, cfg, &names)?;
        write_atomic(&p, serde_json::to_string_pretty(&m)?.as_bytes())?;
        written.push(p);
    }
    Ok(written)
}
