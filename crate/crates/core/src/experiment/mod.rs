//! Figure scenarios, parameter sweeps over disorder ensembles, and CSV/JSON/SVG emission.

mod compare;
mod config;
mod output;
mod record;
mod runner;

pub use compare::{compare_records, compare_to_reference, compare_with, default_tolerance, ColumnReport, CompareReport, Tolerance};
pub use config::{
    AnalysisConfig, Diagnostic, DisorderConfig, DriveConfig, ExperimentConfig, Format, Limits, Method, ModelConfig,
    OutputConfig, PaperScale, Scenario, SweepConfig, SweepParameter,
};
pub use output::{
    csv_bytes, emit_outputs, manifest, point_medians, read_csv, render_svg, size_scaling, write_atomic, write_csv,
    BASIS_CONVENTION, CSV_NAME, MANIFEST_NAME, TIMINGS_NAME,
};
pub use record::{format_real, unit, Status, SweepRecord, COLUMNS, PLOTTABLE};
pub use runner::{
    corner_mass, evaluate_task, plan, run_experiment, run_to_dir, Plan, RunOptions, RunSummary, Task, PARTIAL_CONFIG,
    PARTIAL_CSV,
};
