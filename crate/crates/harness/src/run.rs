//! Stress histories of a single material point along a loading program.

use maxwell_core::constitutive::{
    ifebm_step_eulerian, kirchhoff_from_2pk, reference_solve, stress_2pk, Diagnostics, EulerianState,
    LagrangianState, MaterialParams, Method,
};
use maxwell_core::tensor3::SymTensor3;
use maxwell_core::{DomainError, Result};

use crate::loading::LoadingProgram;

/// Which configuration the integration runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    #[default]
    Lagrangian,
    /// Only available for IFEBM.
    Eulerian,
}

/// Output of a run, one entry per grid time including t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub kirchhoff: Vec<SymTensor3>,
    /// Inelastic right Cauchy-Green tensor, pulled back for Eulerian runs.
    pub ci: Vec<SymTensor3>,
    pub diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    /// Largest `|det Ci - 1|` over the run.
    pub fn manifold_drift(&self) -> f64 {
        self.ci.iter().map(|c| (c.det() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn total(&self, field: impl Fn(&Diagnostics) -> u32) -> u64 {
        self.diagnostics.iter().map(|d| field(d) as u64).sum()
    }
}

/// Integrates from the stress-free state with `steps` uniform steps.
pub fn integrate(
    program: &LoadingProgram,
    method: Method,
    formulation: Formulation,
    p: &MaterialParams,
    steps: usize,
) -> Result<Trajectory> {
    let times = program.grid(steps);
    let f0 = program.deformation(times[0])?;
    let mut out = Trajectory {
        times: times.clone(),
        kirchhoff: Vec::with_capacity(times.len()),
        ci: Vec::with_capacity(times.len()),
        diagnostics: Vec::with_capacity(times.len()),
    };
    let natural = LagrangianState::natural();
    out.kirchhoff.push(kirchhoff_from_2pk(&stress_2pk(&SymTensor3::IDENTITY.pull(&f0), &natural.ci, p)?, &f0));
    out.ci.push(natural.ci);
    out.diagnostics.push(Diagnostics::default());

    match formulation {
        Formulation::Lagrangian => {
            let mut state = natural;
            for w in times.windows(2) {
                let f = program.deformation(w[1])?;
                let r = method.step(&SymTensor3::IDENTITY.pull(&f), &state, w[1] - w[0], p)?;
                state = r.state;
                out.kirchhoff.push(kirchhoff_from_2pk(&r.stress, &f));
                out.ci.push(state.ci);
                out.diagnostics.push(r.diagnostics);
            }
        }
        Formulation::Eulerian => {
            if method != Method::Ifebm {
                return Err(DomainError::InvalidParameter(format!(
                    "the eulerian formulation is only implemented for ifebm, not {method}"
                ))
                .into());
            }
            let mut state = EulerianState::from_lagrangian(&natural, &f0)?;
            for w in times.windows(2) {
                let f = program.deformation(w[1])?;
                let r = ifebm_step_eulerian(&f, &state, w[1] - w[0], p)?;
                state = r.state;
                out.kirchhoff.push(r.stress);
                out.ci.push(state.to_lagrangian()?.ci);
                out.diagnostics.push(r.diagnostics);
            }
        }
    }
    Ok(out)
}

/// Fine-step Kirchhoff stress on `grid` and the measured Richardson gap.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub times: Vec<f64>,
    pub kirchhoff: Vec<SymTensor3>,
    pub substeps_per_interval: usize,
    pub richardson_gap: f64,
}

/// IFEBM reference with about `total_substeps` substeps over the program.
pub fn reference(
    program: &LoadingProgram,
    p: &MaterialParams,
    grid: &[f64],
    total_substeps: usize,
) -> Result<Reference> {
    let intervals = grid.len().saturating_sub(1).max(1);
    let per = total_substeps.div_ceil(intervals).max(1);
    let solution = reference_solve(
        |t| Ok(SymTensor3::IDENTITY.pull(&program.deformation(t)?)),
        &SymTensor3::IDENTITY,
        grid,
        p,
        per,
    )?;
    // the 2PK gap is reported as is; Kirchhoff stress is pushed forward below
    let kirchhoff = grid
        .iter()
        .zip(&solution.stress)
        .map(|(t, s)| Ok(kirchhoff_from_2pk(s, &program.deformation(*t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Reference {
        times: grid.to_vec(),
        kirchhoff,
        substeps_per_interval: per,
        richardson_gap: solution.richardson_gap,
    })
}

/// Frobenius distance between two stress histories at each time.
pub fn pointwise_gap(a: &[SymTensor3], b: &[SymTensor3]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (*x - *y).norm()).collect()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}
