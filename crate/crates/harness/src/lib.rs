//! Verification harness for the Maxwell fluid integrators.
//!
//! Each study returns a [`Report`] with self-checks; the `maxwell` binary
//! exits non-zero when any check fails.

pub mod config;
pub mod error;
pub mod loading;
pub mod report;
pub mod run;
pub mod studies;

pub use config::RunConfig;
pub use error::{HarnessError, Result};
pub use report::{Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Study {
    /// Stress error of every stepper on the non-proportional program.
    Nonprop,
    /// Observed order over four dyadic step sizes.
    Convergence,
    /// Tangent symmetry over step sizes and viscosities.
    TangentSweep,
    /// Cyclic uniaxial loading of the multi-branch model.
    Uniaxial,
    /// Newton effort at large steps and root-form round-off.
    Robustness,
}

pub fn run_study(study: Study, cfg: &RunConfig) -> Result<Report> {
    match study {
        Study::Nonprop => studies::nonprop::run(cfg),
        Study::Convergence => studies::convergence::run(cfg),
        Study::TangentSweep => studies::tangent::run(cfg),
        Study::Uniaxial => studies::uniaxial::run(cfg),
        Study::Robustness => studies::robustness::run(cfg),
    }
}
