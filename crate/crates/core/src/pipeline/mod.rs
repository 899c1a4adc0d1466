//! Batch experiments: simulated or external codec, SR versus NNI, reports.

mod config;
mod report;
mod run;

pub use config::{scale_tag, ConfigBuilder, ExperimentConfig, Mode, RatePoint, SPrimePolicy, ScaleSource};
pub use report::{read_report, write_report, write_runs, RateLog, ReportRow, RunRecord};
pub use run::{decoded_path, run_pipeline, PipelineOutput, REPORT_FILE, RESOLVED_CONFIG_FILE, RUNS_FILE};
