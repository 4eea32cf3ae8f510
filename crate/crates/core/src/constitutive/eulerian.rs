use super::quadratic::QuadraticProblem;
use super::{check_time_step, kirchhoff_eulerian, Diagnostics, EulerianState, MaterialParams, StepResult};
use crate::error::Result;
use crate::tensor3::{SymTensor3, Tensor3};

/// Iteration-free Euler backward step on the current configuration.
///
/// 1. `F̄rel = unimodular(F_next F_prev⁻¹)`
/// 2. `B̄trial⁻¹ = F̄rel⁻ᵀ B̄e⁻¹ F̄rel⁻¹`
/// 3. `Ã = B̄trial⁻¹ + dt/η c10 I`
/// 4. `ε = c01 dt/η`
/// 5. `φ₀ = (det Ã)^(1/3)`
/// 6. `φ = φ₀ - tr Ã/(3φ₀) ε`
/// 7. `B̄e⁻¹ = unimodular(2Ã [(φ² I + 4εÃ)^(1/2) + φ I]⁻¹)`
/// 8. `S = c10 (B̄e)ᴰ - c01 (B̄e⁻¹)ᴰ`
pub fn ifebm_step_eulerian(
    f_next: &Tensor3,
    state: &EulerianState,
    dt: f64,
    p: &MaterialParams,
) -> Result<StepResult<EulerianState>> {
    check_time_step(dt)?;
    p.validate()?;
    let f_rel = (*f_next * state.f_prev.inverse()?).unimodular()?;
    let trial = state.be_inv_bar.pull(&f_rel.inverse()?);
    let a = trial + SymTensor3::IDENTITY * (p.flow_factor(dt) * p.c10);
    let eps = p.epsilon(dt);
    let problem = QuadraticProblem::new(&a, eps)?;
    let (phi0, phi) = problem.estimate()?;
    let be_inv_bar = problem.x(phi)?.unimodular()?;
    let stress = kirchhoff_eulerian(&be_inv_bar, p)?;
    Ok(StepResult {
        state: EulerianState { be_inv_bar, f_prev: *f_next },
        stress,
        diagnostics: Diagnostics { phi0, phi, eps, ..Default::default() },
    })
}
