//! Experiment orchestration for `mdb-core`: configuration, seeded parallel
//! replicates, parameter sweeps, distortion studies, LETOR files and CSV.

pub mod config;
pub mod distortion;
pub mod environment;
pub mod experiment;
pub mod letor;
pub mod output;
pub mod sweep;

pub use config::{EnvironmentSpec, ExperimentConfig, PolicyEntry, RegretMode};
pub use distortion::{distortion_report, DistortionTable};
pub use experiment::{run_experiment, run_prepared, RunResult};
pub use sweep::{sweep, SweepResult};
