use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{Diagnostic, ExperimentConfig, Method, SweepParameter};
use super::output;
use super::record::{Status, SweepRecord, COLUMNS};
use crate::diagnostics::{self, SeparableSpectra};
use crate::error::{Error, Result};
use crate::floquet;
use crate::invariants::{self, PhaseLayout};
use crate::model::{derive_seed, SeparableHamiltonian};
use crate::numerics;

/// One unit of work: a sweep point and a disorder realization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Task {
    pub point: usize,
    pub realization: usize,
    pub value: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub tasks: Vec<Task>,
    /// Largest dense 2D matrix dimension, if any is formed.
    pub dense_dim: Option<usize>,
    pub threads: usize,
    pub estimated_peak_bytes: u64,
}

/// Complex matrices of the dense dimension alive at once in the heaviest
/// pipeline (SVD factors, winding products and workspaces).
const LIVE_MATRICES: u64 = 12;

pub fn plan(cfg: &ExperimentConfig) -> Result<Plan> {
    cfg.validate()?;
    let dense_dim = cfg.dense_dim();
    if let Some(dim) = dense_dim {
        if dim > cfg.limits.max_dim {
            return Err(Error::DimensionCap {
                dim,
                cap: cfg.limits.max_dim,
            });
        }
    }
    let values = cfg.sweep.values(&cfg.model);
    let reps = cfg.realizations();
    let tasks: Vec<Task> = values
        .iter()
        .enumerate()
        .flat_map(|(point, &value)| {
            (0..reps).map(move |realization| Task {
                point,
                realization,
                value,
                seed: derive_seed(cfg.seed, point as u64, realization as u64),
            })
        })
        .collect();
    let threads = effective_threads(cfg.limits.threads).min(tasks.len().max(1));
    let per_worker = dense_dim.map_or_else(
        || {
            let n = 2 * cfg.model.lx.max(cfg.model.ly) as u64;
            LIVE_MATRICES * 16 * n * n
        },
        |d| LIVE_MATRICES * 16 * (d as u64) * (d as u64),
    );
    Ok(Plan {
        tasks,
        dense_dim,
        threads,
        estimated_peak_bytes: per_worker * threads as u64,
    })
}

fn effective_threads(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}

/// Compute every requested diagnostic for one task. Failures land in `status`.
pub fn evaluate_task(cfg: &ExperimentConfig, task: &Task) -> SweepRecord {
    let started = Instant::now();
    let (lx, ly) = cfg.extents_at(task.value);
    let mut rec = SweepRecord::new(task.point, task.realization, task.seed, task.value, lx, ly);
    if let Err(e) = fill(cfg, task, &mut rec) {
        rec.status = Status::Error(e.to_string());
    }
    rec.wall_time_ms = started.elapsed().as_millis() as u64;
    rec
}

fn fill(cfg: &ExperimentConfig, task: &Task, rec: &mut SweepRecord) -> Result<()> {
    let a = &cfg.analysis;
    let vx = match cfg.sweep.parameter {
        SweepParameter::Vx => task.value,
        _ => cfg.model.vx,
    };
    let model = cfg.model.build(vx, rec.lx, rec.ly)?;
    let max_dim = cfg.limits.max_dim;

    if a.wants(Diagnostic::VNonbloch) {
        let wx = invariants::winding_nonbloch_1d(&model.x, a.grid);
        let wy = invariants::winding_nonbloch_1d(&model.y, a.grid);
        match (wx, wy) {
            (Ok(wx), Ok(wy)) => {
                rec.v_nonbloch_x = Some(wx.v);
                rec.v_nonbloch_y = Some(wy.v);
                rec.v_2d = Some(wx.v * wy.v);
            }
            (Err(e @ Error::GapClosing { .. }), _) | (_, Err(e @ Error::GapClosing { .. })) => {
                rec.status = Status::GapClosing(e.to_string());
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }

    if a.wants(Diagnostic::Floquet) {
        let drive = cfg
            .drive
            .as_ref()
            .ok_or_else(|| Error::Config("missing drive".into()))?;
        let proto = drive.protocol(model.x.v, model.y.v)?;
        let res = floquet::analyze(&model, &proto, a.zero_mode_policy, max_dim)?;
        rec.min_s_minus = Some(res.minus.min_s);
        rec.min_s_plus = Some(res.plus.min_s);
        rec.v_minus = Some(res.minus.winding.value);
        rec.v_plus = Some(res.plus.winding.value);
        rec.zero_modes_minus = Some(res.minus.zero_modes.count);
        rec.zero_modes_plus = Some(res.plus.zero_modes.count);
        rec.near_transition_minus = Some(res.minus.near_transition);
        rec.near_transition_plus = Some(res.plus.near_transition);
        rec.quasienergy_gap_0 = Some(res.quasienergy_gap_0);
        rec.quasienergy_gap_pi = Some(res.quasienergy_gap_pi);
    }

    let eig_based = [Diagnostic::MinAbsE, Diagnostic::Wipr, Diagnostic::Kappa]
        .into_iter()
        .any(|d| a.wants(d));
    let svd_based = a.diagnostics.iter().any(|d| d.needs_svd());
    if !eig_based && !svd_based {
        return Ok(());
    }

    let strength = match cfg.sweep.parameter {
        SweepParameter::Disorder => task.value,
        _ => cfg.disorder.as_ref().map_or(0.0, |d| d.strength),
    };
    let spec = cfg.disorder.as_ref().map(|d| d.spec(strength, task.seed));
    let sep = SeparableHamiltonian::with_disorder(&model, spec.as_ref())?;
    let mut dense = None;

    if eig_based {
        match a.method {
            Method::Separable => {
                let spectra = SeparableSpectra::new(&sep)?;
                if a.wants(Diagnostic::MinAbsE) {
                    rec.min_abs_e = Some(spectra.min_abs_energy());
                }
                if a.wants(Diagnostic::Wipr) {
                    rec.wipr = Some(spectra.wipr(a.coordinates)?);
                }
                if a.wants(Diagnostic::Kappa) {
                    rec.kappa = Some(spectra.condition_number()?);
                }
            }
            Method::Dense => {
                let h = sep.assemble(max_dim)?;
                let eig = numerics::eig(h.as_ref())?;
                if a.wants(Diagnostic::MinAbsE) {
                    rec.min_abs_e = Some(eig.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min));
                }
                if a.wants(Diagnostic::Wipr) {
                    rec.wipr = Some(diagnostics::wipr(&eig, rec.lx, rec.ly, a.coordinates)?);
                }
                if a.wants(Diagnostic::Kappa) {
                    rec.kappa = Some(diagnostics::condition_number(&eig)?);
                }
                dense = Some(h);
            }
        }
    }

    if svd_based {
        let h = match dense {
            Some(h) => h,
            None => sep.assemble(max_dim)?,
        };
        let needs_vectors = a.wants(Diagnostic::VRealspace) || a.wants(Diagnostic::CornerMass);
        let dec = if needs_vectors {
            Some(numerics::svd(h.as_ref())?)
        } else {
            None
        };
        let mut asc = match &dec {
            Some(d) => d.s.clone(),
            None => numerics::singular_values(h.as_ref())?,
        };
        let norm = asc.first().copied().unwrap_or(0.0);
        asc.reverse();
        let count = diagnostics::classify_zero_modes(&asc, norm, a.zero_mode_policy);
        rec.min_s = asc.first().copied();
        rec.near_transition = Some(diagnostics::near_transition(&asc, count.count));
        if a.wants(Diagnostic::ZeroModes) {
            rec.zero_modes = Some(count.count);
            rec.zero_modes_cluster = count.cluster_count;
            rec.zero_modes_ambiguous = Some(count.ambiguous);
        }
        if let Some(dec) = &dec {
            if a.wants(Diagnostic::VRealspace) {
                let phases = invariants::basis_phases(rec.lx, rec.ly, PhaseLayout::CellResolved);
                rec.v_realspace = Some(invariants::winding_from_svd(dec, &phases)?.value);
            }
            if a.wants(Diagnostic::CornerMass) {
                rec.corner_mass = Some(corner_mass(dec, count.count, rec.lx, rec.ly)?);
            }
        }
    }
    Ok(())
}

/// Smallest single-quadrant mass among the corner-resolved zero modes; the
/// `Min[s]` singular vector when there are none.
pub fn corner_mass(dec: &numerics::SvdTriple, zero_modes: usize, lx: usize, ly: usize) -> Result<f64> {
    let fields = if zero_modes == 0 {
        vec![diagnostics::singular_corner_state_from_svd(dec, lx, ly, 0)?]
    } else {
        diagnostics::zero_mode_corner_states(dec, zero_modes, lx, ly)?
    };
    Ok(fields
        .iter()
        .map(|f| f.max_quadrant_mass())
        .fold(f64::INFINITY, f64::min))
}

fn execute<S>(cfg: &ExperimentConfig, tasks: &[Task], threads: usize, mut sink: S) -> Result<()>
where
    S: FnMut(SweepRecord) -> Result<()> + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let (tx, rx) = mpsc::channel::<SweepRecord>();
    std::thread::scope(|scope| {
        let writer = scope.spawn(move || -> Result<()> {
            let mut first_err = None;
            for rec in rx {
                if first_err.is_none() {
                    if let Err(e) = sink(rec) {
                        first_err = Some(e);
                    }
                }
            }
            first_err.map_or(Ok(()), Err)
        });
        pool.install(|| {
            tasks
                .par_iter()
                .for_each_with(tx, |tx, t| {
                    let _ = tx.send(evaluate_task(cfg, t));
                });
        });
        writer.join().expect("writer thread panicked")
    })
}

fn sort_records(records: &mut [SweepRecord]) {
    records.sort_by_key(|r| (r.point, r.realization));
}

/// Run every task in memory, records ordered by `(point, realization)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    let plan = plan(cfg)?;
    let mut records = Vec::with_capacity(plan.tasks.len());
    execute(cfg, &plan.tasks, plan.threads, |r| {
        records.push(r);
        Ok(())
    })?;
    sort_records(&mut records);
    Ok(records)
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Pick up rows from an interrupted run with the same configuration.
    pub resume: bool,
    /// Print one progress line per finished task to stderr.
    pub progress: bool,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub records: Vec<SweepRecord>,
    pub files: Vec<PathBuf>,
    pub resumed: usize,
    pub failures: usize,
}

pub const PARTIAL_CSV: &str = "records.partial.csv";
pub const PARTIAL_CONFIG: &str = "records.partial.json";

fn read_partial(path: &Path) -> Vec<SweepRecord> {
    let Ok(mut rdr) = csv::ReaderBuilder::new().flexible(true).from_path(path) else {
        return Vec::new();
    };
    rdr.records()
        .filter_map(|row| row.ok())
        .filter_map(|row| SweepRecord::from_fields(&row.iter().collect::<Vec<_>>()).ok())
        .collect()
}

/// Run into `cfg.output.dir`: rows are flushed to a partial file as they
/// finish, then published as CSV/JSON/SVG once the sweep completes.
pub fn run_to_dir(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary> {
    let plan = plan(cfg)?;
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let partial_csv = dir.join(PARTIAL_CSV);
    let partial_cfg = dir.join(PARTIAL_CONFIG);
    let cfg_json = serde_json::to_string_pretty(cfg)?;

    let mut done: BTreeMap<(usize, usize), SweepRecord> = BTreeMap::new();
    if opts.resume {
        let same = fs::read_to_string(&partial_cfg).is_ok_and(|s| s == cfg_json);
        if same {
            for r in read_partial(&partial_csv) {
                done.insert((r.point, r.realization), r);
            }
        }
    }
    let valid: std::collections::HashSet<(usize, usize)> =
        plan.tasks.iter().map(|t| (t.point, t.realization)).collect();
    done.retain(|k, _| valid.contains(k));
    let resumed = done.len();

    fs::write(&partial_cfg, &cfg_json).map_err(|e| Error::io(&partial_cfg, e))?;
    {
        let file = File::create(&partial_csv).map_err(|e| Error::io(&partial_csv, e))?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(COLUMNS)?;
        for r in done.values() {
            w.write_record(r.to_fields())?;
        }
        w.flush().map_err(|e| Error::io(&partial_csv, e))?;
    }

    let pending: Vec<Task> = plan
        .tasks
        .iter()
        .filter(|t| !done.contains_key(&(t.point, t.realization)))
        .copied()
        .collect();
    let total = plan.tasks.len();
    let file = OpenOptions::new()
        .append(true)
        .open(&partial_csv)
        .map_err(|e| Error::io(&partial_csv, e))?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    let mut fresh = Vec::with_capacity(pending.len());
    let mut finished = resumed;
    let progress = opts.progress;
    execute(cfg, &pending, plan.threads, |r| {
        writer.write_record(r.to_fields())?;
        writer.flush().map_err(|e| Error::io(&partial_csv, e))?;
        finished += 1;
        if progress {
            let mut err = std::io::stderr().lock();
            let _ = writeln!(
                err,
                "[{finished}/{total}] point {} realization {} value {} ({} ms) {}",
                r.point, r.realization, r.sweep_value, r.wall_time_ms, r.status
            );
        }
        fresh.push(r);
        Ok(())
    })?;
    drop(writer);

    let mut records: Vec<SweepRecord> = done.into_values().chain(fresh).collect();
    sort_records(&mut records);
    let files = output::emit_outputs(&records, cfg, true)?;
    let _ = fs::remove_file(&partial_csv);
    let _ = fs::remove_file(&partial_cfg);
    let failures = records.iter().filter(|r| r.status.is_error()).count();
    Ok(RunSummary {
        records,
        files,
        resumed,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::Scenario;

    fn tiny() -> ExperimentConfig {
        let mut cfg = Scenario::Fig3c.preset();
        cfg.model.lx = 3;
        cfg.model.ly = 3;
        cfg.sweep.points = 3;
        cfg.limits.threads = 2;
        cfg
    }

    #[test]
    fn plan_orders_tasks_and_derives_seeds() {
        let mut cfg = Scenario::Fig2b.preset();
        cfg.sweep.points = 2;
        cfg.disorder.as_mut().unwrap().realizations = 3;
        let p = plan(&cfg).unwrap();
        assert_eq!(p.tasks.len(), 6);
        assert_eq!((p.tasks[4].point, p.tasks[4].realization), (1, 1));
        assert_eq!(p.tasks[4].seed, derive_seed(cfg.seed, 1, 1));
        assert!(p.dense_dim.is_none());
    }

    #[test]
    fn plan_enforces_dimension_cap() {
        let mut cfg = Scenario::Fig3a.preset();
        cfg.limits.max_dim = 100;
        assert!(matches!(plan(&cfg), Err(Error::DimensionCap { dim: 1600, cap: 100 })));
    }

    #[test]
    fn empty_sweep_gives_no_records() {
        let mut cfg = tiny();
        cfg.sweep.points = 0;
        assert!(run_experiment(&cfg).unwrap().is_empty());
    }

    #[test]
    fn records_are_complete_and_thread_independent() {
        let cfg = tiny();
        let a = run_experiment(&cfg).unwrap();
        let mut single = cfg.clone();
        single.limits.threads = 1;
        let b = run_experiment(&single).unwrap();
        assert_eq!(a.len(), 3);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_fields(), y.to_fields());
            assert!(x.min_s.is_some() && x.v_realspace.is_some() && x.v_2d.is_some());
            assert!(x.min_abs_e.is_none());
        }
    }

    #[test]
    fn numerical_failure_is_recorded_in_row() {
        let mut cfg = tiny();
        cfg.sweep.points = 1;
        cfg.sweep.start = 1.0;
        cfg.model.wx = -0.75;
        cfg.model.gamma_x = 1.5;
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].status.is_error(), "{:?}", r[0].status);
    }
}
