use super::ifebm::StrainRoots;
use super::quadratic::QuadraticProblem;
use super::{check_time_step, stress_2pk, Diagnostics, LagrangianState, MaterialParams, StepResult};
use crate::error::Result;
use crate::tensor3::SymTensor3;

const NEWTON_CORRECTIONS: u32 = 2;
const MIN_SLOPE: f64 = 1e-14;

/// IFEBM with two Newton corrections of the multiplier (2IEBM).
///
/// Starting from the estimate of [`super::solve_phi`], `φ` is corrected twice
/// by Newton's method on `R(φ) = det X(φ) - 1` with the exact slope
/// [`QuadraticProblem::residual_slope`]. If the slope vanishes the estimate is
/// kept and `diagnostics.fallback` is set.
pub fn twoiter_step(
    c_next: &SymTensor3,
    state: &LagrangianState,
    dt: f64,
    p: &MaterialParams,
) -> Result<StepResult<LagrangianState>> {
    check_time_step(dt)?;
    p.validate()?;
    if p.flow_factor(dt) == 0.0 {
        return super::frozen_step(c_next, state, p);
    }
    let roots = StrainRoots::new(c_next)?;
    let eps = p.epsilon(dt);
    let problem = QuadraticProblem::new(&roots.a(&state.ci, dt, p), eps)?;
    let (phi0, estimate) = problem.estimate()?;

    let mut phi = estimate;
    let mut fallback = false;
    for _ in 0..NEWTON_CORRECTIONS {
        let slope = problem.residual_slope(phi);
        if !(slope.abs() >= MIN_SLOPE) {
            phi = estimate;
            fallback = true;
            break;
        }
        phi -= problem.residual(phi) / slope;
    }
    if !phi.is_finite() || (eps == 0.0 && phi <= 0.0) {
        phi = estimate;
        fallback = true;
    }

    let x = problem.x(phi)?;
    let ci = roots.map_back(&x)?;
    let stress = stress_2pk(c_next, &ci, p)?;
    Ok(StepResult {
        state: LagrangianState { ci },
        stress,
        diagnostics: Diagnostics {
            phi0,
            phi,
            eps,
            iterations: NEWTON_CORRECTIONS,
            fallback,
            ..Default::default()
        },
    })
}
