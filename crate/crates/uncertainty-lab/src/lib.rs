//! Batch driver for the torus uncertainty-principle experiments: parses
//! flat key-value configurations, dispatches the experiment kinds, and
//! writes deterministic CSV/report artifacts.

pub mod config;
pub mod plot;
pub mod runner;
pub mod suites;

pub use config::{instance_seed, ExperimentConfig, SEED_ENV_VAR};
pub use plot::emit_plot_data;
pub use runner::{run, RunArtifacts, EXIT_ASSERT, EXIT_CONFIG, EXIT_OK};
