use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nhsvd_core::experiment::{
    compare_to_reference, plan, run_to_dir, unit, ExperimentConfig, RunOptions, Scenario, SweepConfig,
    SweepParameter, BASIS_CONVENTION, COLUMNS,
};
use nhsvd_core::io::{export_matrix, MatrixSidecar};
use nhsvd_core::model::{derive_seed, SeparableHamiltonian};
use nhsvd_core::{floquet, Error};

const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "nhsvd", version, about = "Non-Hermitian 2D SSH lattice experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the configured experiment, or one point with `--vx`.
    Run {
        #[command(flatten)]
        common: Common,
        /// Evaluate a single point at this vx.
        #[arg(long, allow_hyphen_values = true)]
        vx: Option<f64>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Run a parameter sweep, optionally overriding its range.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        parameter: Option<ParameterArg>,
        #[arg(long, allow_hyphen_values = true)]
        start: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        stop: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Comma-separated sizes for a size sweep.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Compare a records CSV against a reference CSV.
    Compare { actual: PathBuf, reference: PathBuf },
    /// List scenarios and columns, or describe a resolved configuration.
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// Write a Hamiltonian or Floquet operator as a binary matrix plus JSON sidecar.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "hamiltonian")]
        operator: OperatorArg,
        #[arg(long, allow_hyphen_values = true)]
        vx: Option<f64>,
        /// Disorder realization used when the config carries disorder.
        #[arg(long, default_value_t = 0)]
        realization: usize,
        /// Destination file; the sidecar goes next to it with `.json` appended.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// TOML config, or a JSON manifest from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset to start from.
    #[arg(long)]
    scenario: Option<Scenario>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Largest dense matrix dimension allowed.
    #[arg(long)]
    max_dim: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
struct RunFlags {
    /// Ignore rows left by an interrupted run.
    #[arg(long)]
    fresh: bool,
    /// Suppress per-task progress lines.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ParameterArg {
    Vx,
    Disorder,
    Size,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OperatorArg {
    Hamiltonian,
    Propagator,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_io() {
        EXIT_IO
    } else if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_VALIDATION
    }
}

fn resolve(common: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match (&common.config, common.scenario) {
        (Some(path), base) => ExperimentConfig::load(path, base)?,
        (None, Some(s)) => s.preset(),
        (None, None) => Scenario::Custom.preset(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    if let Some(t) = common.threads {
        cfg.limits.threads = t;
    }
    if let Some(m) = common.max_dim {
        cfg.limits.max_dim = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cfg: &ExperimentConfig, flags: &RunFlags) -> Result<u8, Error> {
    let p = plan(cfg)?;
    eprintln!(
        "{}: {} tasks on {} threads, estimated peak memory {:.1} MiB",
        cfg.scenario,
        p.tasks.len(),
        p.threads,
        p.estimated_peak_bytes as f64 / (1024.0 * 1024.0)
    );
    let opts = RunOptions {
        resume: !flags.fresh,
        progress: !flags.quiet,
    };
    let summary = run_to_dir(cfg, &opts)?;
    if summary.resumed > 0 {
        eprintln!("resumed {} rows from an interrupted run", summary.resumed);
    }
    for f in &summary.files {
        println!("{}", f.display());
    }
    if summary.failures > 0 {
        eprintln!("{} of {} rows failed", summary.failures, summary.records.len());
        return Ok(EXIT_NUMERICAL);
    }
    Ok(0)
}

fn info(common: &Common) -> Result<u8, Error> {
    if common.config.is_none() && common.scenario.is_none() {
        println!("scenarios:");
        for s in Scenario::ALL {
            println!("  {:<8} {}", s.name(), s.description());
        }
        println!("columns:");
        for c in COLUMNS {
            println!("  {:<24} {}", c, unit(c));
        }
        println!("basis: {BASIS_CONVENTION}");
        return Ok(0);
    }
    let cfg = resolve(common)?;
    print!("{}", cfg.to_toml_string()?);
    let p = plan(&cfg)?;
    println!();
    println!("# tasks: {}", p.tasks.len());
    match p.dense_dim {
        Some(d) => println!("# dense dimension: {d}"),
        None => println!("# dense dimension: none"),
    }
    println!("# threads: {}", p.threads);
    println!("# estimated peak memory: {} bytes", p.estimated_peak_bytes);
    Ok(0)
}

fn export(common: &Common, operator: OperatorArg, vx: Option<f64>, realization: usize, file: Option<PathBuf>) -> Result<u8, Error> {
    let cfg = resolve(common)?;
    let vx = vx.unwrap_or(cfg.model.vx);
    let model = cfg.model.build(vx, cfg.model.lx, cfg.model.ly)?;
    let max_dim = cfg.limits.max_dim;
    let (matrix, seed, description) = match operator {
        OperatorArg::Hamiltonian => {
            let seed = cfg.disorder.as_ref().map(|_| derive_seed(cfg.seed, 0, realization as u64));
            let spec = cfg
                .disorder
                .as_ref()
                .zip(seed)
                .map(|(d, s)| d.spec(d.strength, s));
            let h = SeparableHamiltonian::with_disorder(&model, spec.as_ref())?.assemble(max_dim)?;
            (h, seed, format!("real-space Hamiltonian, vx = {vx}"))
        }
        OperatorArg::Propagator => {
            let drive = cfg
                .drive
                .as_ref()
                .ok_or_else(|| Error::Config("propagator export needs a [drive] table".into()))?;
            let proto = drive.protocol(model.x.v, model.y.v)?;
            let u = floquet::evolution_operator_2d(&model, &proto, max_dim)?;
            (u, None, format!("one-period evolution operator, vx = {vx}"))
        }
    };
    let path = file.unwrap_or_else(|| {
        let name = match operator {
            OperatorArg::Hamiltonian => "hamiltonian.bin",
            OperatorArg::Propagator => "propagator.bin",
        };
        cfg.output.dir.join(name)
    });
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    export_matrix(&path, &matrix, &MatrixSidecar::new(&matrix, seed, description))?;
    println!("{}", path.display());
    Ok(0)
}

fn compare(actual: &Path, reference: &Path) -> Result<u8, Error> {
    let report = compare_to_reference(actual, reference)?;
    println!("{report}");
    Ok(if report.passed() { 0 } else { EXIT_NUMERICAL })
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Run { common, vx, run } => {
            let mut cfg = resolve(&common)?;
            if let Some(vx) = vx {
                cfg.model.vx = vx;
                cfg.sweep = SweepConfig::none();
                cfg.validate()?;
            }
            execute(&cfg, &run)
        }
        Command::Sweep {
            common,
            parameter,
            start,
            stop,
            points,
            sizes,
            run,
        } => {
            let mut cfg = resolve(&common)?;
            if let Some(p) = parameter {
                cfg.sweep.parameter = match p {
                    ParameterArg::Vx => SweepParameter::Vx,
                    ParameterArg::Disorder => SweepParameter::Disorder,
                    ParameterArg::Size => SweepParameter::Size,
                };
            }
            if let Some(v) = start {
                cfg.sweep.start = v;
            }
            if let Some(v) = stop {
                cfg.sweep.stop = v;
            }
            if let Some(n) = points {
                cfg.sweep.points = n;
            }
            if let Some(s) = sizes {
                cfg.sweep.sizes = s;
            }
            cfg.validate()?;
            execute(&cfg, &run)
        }
        Command::Compare { actual, reference } => compare(&actual, &reference),
        Command::Info { common } => info(&common),
        Command::Export {
            common,
            operator,
            vx,
            realization,
            file,
        } => export(&common, operator, vx, realization, file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
