use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use maxwell_core::composite::CompositeModel;
use maxwell_core::constitutive::{MaterialParams, Method};
use maxwell_harness::loading::{Keyframes, LoadingProgram};
use maxwell_harness::run::Formulation;
use maxwell_harness::{run_study, HarnessError, RunConfig, Study};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Summary {
    Json,
    Text,
}

/// Verification studies for the finite-strain Maxwell fluid integrators.
#[derive(Debug, Parser)]
#[command(name = "maxwell", version)]
struct Cli {
    #[arg(value_enum)]
    study: Study,
    #[arg(long, global = true, default_value_t = 0.1)]
    dt: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    c10: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    c01: f64,
    /// ifebm, 2iebm, mebm or em; restricts studies that sweep steppers.
    #[arg(long, global = true)]
    method: Option<Method>,
    #[arg(long, global = true, value_enum, default_value_t = Formulation::Lagrangian)]
    formulation: Formulation,
    /// Directory for CSV output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Absolute difference step for tangents.
    #[arg(long, global = true)]
    fd_step: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Summary::Text)]
    summary: Summary,
    /// JSON model file for the uniaxial study; the bundled cartilage model by default.
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// JSON keyframe file replacing the built-in non-proportional program.
    #[arg(long, global = true)]
    keyframes: Option<PathBuf>,
    /// Total substeps of the reference solution.
    #[arg(long, global = true, default_value_t = 100_000)]
    reference_substeps: usize,
}

fn config(cli: &Cli) -> Result<RunConfig, HarnessError> {
    let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(HarnessError::from);
    let model = match &cli.model {
        Some(path) => CompositeModel::from_json_str(&read(path)?)?,
        None => CompositeModel::tmj_cartilage(),
    };
    let program = match &cli.keyframes {
        Some(path) => LoadingProgram::Keyframes(Keyframes::from_json_str(&read(path)?).map_err(HarnessError::Keyframes)?),
        None => LoadingProgram::Nonproportional,
    };
    Ok(RunConfig {
        dt: cli.dt,
        params: MaterialParams::new(cli.c10, cli.c01, cli.eta)?,
        method: cli.method,
        formulation: cli.formulation,
        program,
        model,
        reference_substeps: cli.reference_substeps,
        fd_step: cli.fd_step,
        seed: cli.seed,
        out: cli.out.clone(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match config(&cli).and_then(|cfg| run_study(cli.study, &cfg)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.summary {
        Summary::Json => println!("{}", report.to_json()),
        Summary::Text => print!("{}", report.to_text()),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
