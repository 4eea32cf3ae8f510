use super::quadratic::QuadraticProblem;
use super::{check_time_step, stress_2pk, Diagnostics, LagrangianState, MaterialParams, StepResult};
use crate::error::{DomainError, Result};
use crate::tensor3::SymTensor3;

/// Square roots of the right Cauchy-Green tensor shared by the closed-form steppers.
pub(super) struct StrainRoots {
    /// `C^(1/2)`
    pub sqrt: SymTensor3,
    /// `C̄^(-1/2)`, the unimodular part of `C^(-1/2)`
    pub bar_inv_sqrt: SymTensor3,
}

impl StrainRoots {
    pub fn new(c: &SymTensor3) -> Result<Self, DomainError> {
        let e = c.spd_eigen()?;
        let [l1, l2, l3] = e.values;
        let sqrt = e.map(f64::sqrt);
        // (det C)^(1/6) C^(-1/2)
        let scale = (l1 * l2 * l3).powf(1.0 / 6.0);
        let bar_inv_sqrt = e.map(|l| scale / l.sqrt());
        Ok(StrainRoots { sqrt, bar_inv_sqrt })
    }

    /// `A = C̄^(-1/2) (Ci_n + dt/η c10 C̄) C̄^(-1/2) = C̄^(-1/2) Ci_n C̄^(-1/2) + dt/η c10 I`.
    pub fn a(&self, ci_n: &SymTensor3, dt: f64, p: &MaterialParams) -> SymTensor3 {
        ci_n.sandwich(&self.bar_inv_sqrt) + SymTensor3::IDENTITY * (p.flow_factor(dt) * p.c10)
    }

    /// `Ci = unimodular(C^(1/2) X C^(1/2))`.
    pub fn map_back(&self, x: &SymTensor3) -> Result<SymTensor3, DomainError> {
        x.sandwich(&self.sqrt).unimodular()
    }
}

/// Iteration-free Euler backward step on the reference configuration.
///
/// 1. `A = C̄^(-1/2) (Ci_n + dt/η c10 C̄) C̄^(-1/2)`
/// 2. `ε = c01 dt/η`
/// 3. `φ₀ = (det A)^(1/3)`
/// 4. `φ = φ₀ - tr A/(3φ₀) ε`
/// 5. `X = 2A [(φ² I + 4εA)^(1/2) + φ I]⁻¹`
/// 6. `Ci = unimodular(C^(1/2) X C^(1/2))`
/// 7. `T̃` from [`stress_2pk`]
pub fn ifebm_step_lagrangian(
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
    let (phi0, phi) = problem.estimate()?;
    let x = problem.x(phi)?;
    let ci = roots.map_back(&x)?;
    let stress = stress_2pk(c_next, &ci, p)?;
    Ok(StepResult {
        state: LagrangianState { ci },
        stress,
        diagnostics: Diagnostics { phi0, phi, eps, ..Default::default() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c_sample() -> SymTensor3 {
        SymTensor3([1.8, 0.7, 0.9, 0.3, -0.2, 0.1])
    }

    fn ci_sample() -> SymTensor3 {
        SymTensor3([1.1, 0.95, 1.0, 0.05, 0.02, -0.03]).unimodular().unwrap()
    }

    #[test]
    fn zero_step_keeps_state() {
        let p = MaterialParams { c10: 1.0, c01: 0.5, eta: 1.0 };
        let s = LagrangianState { ci: ci_sample() };
        let r = ifebm_step_lagrangian(&c_sample(), &s, 0.0, &p).unwrap();
        assert!((r.state.ci - s.ci).norm() < 1e-14);
        let t = stress_2pk(&c_sample(), &s.ci, &p).unwrap();
        assert!((r.stress - t).norm() < 1e-13 * t.norm());
        assert_eq!(r.diagnostics.iterations, 0);
    }

    #[test]
    fn huge_step_relaxes_completely() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        let s = LagrangianState { ci: ci_sample() };
        let r = ifebm_step_lagrangian(&c_sample(), &s, 1e12, &p).unwrap();
        let c_bar = c_sample().unimodular().unwrap();
        assert!((r.state.ci - c_bar).norm() < 1e-6, "{:?}", r.state.ci);
    }

    #[test]
    fn neo_hookean_closed_form() {
        let p = MaterialParams { c10: 0.8, c01: 0.0, eta: 2.0 };
        let s = LagrangianState { ci: ci_sample() };
        let dt = 0.7;
        let r = ifebm_step_lagrangian(&c_sample(), &s, dt, &p).unwrap();
        let closed = (s.ci + c_sample().unimodular().unwrap() * (dt * p.c10 / p.eta)).unimodular().unwrap();
        assert!((r.state.ci - closed).norm() < 1e-14);
    }

    #[test]
    fn relaxed_state_is_stationary() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 0.3 };
        let c_bar = c_sample().unimodular().unwrap();
        let r = ifebm_step_lagrangian(&c_sample(), &LagrangianState { ci: c_bar }, 0.5, &p).unwrap();
        assert!((r.state.ci - c_bar).norm() < 1e-14);
        assert!(r.stress.norm() < 1e-13);
    }

    #[test]
    fn output_on_manifold() {
        let p = MaterialParams { c10: 0.4, c01: 1.3, eta: 0.01 };
        let r = ifebm_step_lagrangian(&c_sample(), &LagrangianState { ci: ci_sample() }, 2.0, &p).unwrap();
        assert!((r.state.ci.det() - 1.0).abs() < 1e-12);
        assert!(r.state.ci.is_positive_definite());
    }

    #[test]
    fn rejects_bad_input() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        let s = LagrangianState::natural();
        assert!(ifebm_step_lagrangian(&c_sample(), &s, -1.0, &p).is_err());
        assert!(ifebm_step_lagrangian(&SymTensor3::from_diag([1.0, -1.0, -1.0]), &s, 0.1, &p).is_err());
    }
}
