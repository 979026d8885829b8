//! Library side of the `audit` binary: scenario bundles, the suite runner,
//! run artifacts and summaries, and Monte Carlo trial sweeps.

pub mod bundle;
pub mod montecarlo;
pub mod runner;
pub mod summary;

pub use bundle::{ObjectivePlan, ScenarioBundle};
pub use runner::{run_scenario, write_artifacts, RunManifest, Target};
pub use summary::{render, Summary};

/// Problems with the user's input files; the binary maps these to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}
