//! Newton-based baselines: modified Euler backward (MEBM) and the exponential
//! method (EM).
//!
//! Both solve a six-component fixed-point equation `Ci = G(Ci)` with a
//! forward-difference Jacobian, starting from `Ci_n`. A failed solve bisects
//! the remaining interval; after a successful substep the substep size is
//! doubled again (never beyond the remaining interval). The strain is held
//! at `C_next` over all substeps.

use nalgebra::{SMatrix, SVector};

use super::{check_time_step, flow_times_ci, stress_2pk, Diagnostics, LagrangianState, MaterialParams, StepResult};
use crate::error::{ConvergenceError, DomainError, Result};
use crate::tensor3::{SymTensor3, Tensor3};

pub const NEWTON_MAX_ITERATIONS: u32 = 50;
pub const SUBSTEP_MAX_DEPTH: u32 = 20;
const NEWTON_REL_TOL: f64 = 1e-12;
const JACOBIAN_REL_STEP: f64 = 1e-7;
const DIVERGENCE_FACTOR: f64 = 1e8;

#[derive(Clone, Copy)]
enum Scheme {
    Mebm,
    Em,
}

impl Scheme {
    fn name(self) -> &'static str {
        match self {
            Scheme::Mebm => "mebm",
            Scheme::Em => "em",
        }
    }
}

struct Problem<'a> {
    scheme: Scheme,
    c_bar: SymTensor3,
    c_bar_inv: SymTensor3,
    p: &'a MaterialParams,
}

impl Problem<'_> {
    /// Right-hand side `G(Y)` of the fixed-point equation for a step `h` from `ci_n`.
    fn map(&self, y: &SymTensor3, ci_n: &SymTensor3, h: f64) -> Result<SymTensor3, DomainError> {
        let k = self.p.flow_factor(h);
        match self.scheme {
            // unimodular(Ci_n + h f(Y) Y)
            Scheme::Mebm => {
                let fy = flow_times_ci(&self.c_bar, &self.c_bar_inv, y, self.p)?;
                (*ci_n + fy * k).unimodular()
            }
            // unimodular(sym(exp(h f(Y)) Ci_n))
            Scheme::Em => {
                let y_inv = y.inverse()?;
                let m = self.c_bar.dot(&y_inv) * self.p.c10 - y.dot(&self.c_bar_inv) * self.p.c01;
                let f = m - Tensor3::IDENTITY * (m.trace() / 3.0);
                let e = (f * k).exp();
                if !e.is_finite() {
                    return Err(DomainError::NonFinite("exponential map"));
                }
                (e * ci_n.to_tensor()).sym_part().unimodular()
            }
        }
    }

    /// Newton iteration for one (sub)step. Returns the new state and the
    /// iteration count, or `None` when the iteration fails.
    fn solve(&self, ci_n: &SymTensor3, h: f64) -> Option<(SymTensor3, u32)> {
        let tol = NEWTON_REL_TOL * ci_n.norm();
        let residual = |y: &SymTensor3| -> Option<SVector<f64, 6>> {
            let g = self.map(y, ci_n, h).ok()?;
            let r = SVector::<f64, 6>::from_iterator((*y - g).0);
            r.iter().all(|x| x.is_finite()).then_some(r)
        };
        let mut y = *ci_n;
        let mut r = residual(&y)?;
        let first = r.norm().max(tol);
        for iteration in 0..=NEWTON_MAX_ITERATIONS {
            let norm = r.norm();
            if norm < tol {
                let ci = self.map(&y, ci_n, h).ok()?;
                return Some((ci, iteration));
            }
            if iteration == NEWTON_MAX_ITERATIONS || norm > DIVERGENCE_FACTOR * first {
                return None;
            }
            let step = JACOBIAN_REL_STEP * y.norm().max(1.0);
            let mut jac = SMatrix::<f64, 6, 6>::zeros();
            for j in 0..6 {
                let mut yp = y;
                yp.0[j] += step;
                let rp = residual(&yp)?;
                jac.set_column(j, &((rp - r) / step));
            }
            let delta = jac.lu().solve(&r)?;
            for (k, d) in delta.iter().enumerate() {
                y.0[k] -= d;
            }
            if !y.is_positive_definite() {
                return None;
            }
            r = residual(&y)?;
        }
        None
    }
}

fn integrate(
    scheme: Scheme,
    c_next: &SymTensor3,
    state: &LagrangianState,
    dt: f64,
    p: &MaterialParams,
) -> Result<StepResult<LagrangianState>> {
    check_time_step(dt)?;
    p.validate()?;
    if !c_next.is_positive_definite() {
        return Err(DomainError::NotPositiveDefinite { min_eigenvalue: c_next.min_eigenvalue() }.into());
    }
    let c_bar = c_next.unimodular()?;
    let problem = Problem { scheme, c_bar, c_bar_inv: c_bar.inverse()?, p };
    let mut diagnostics = Diagnostics { eps: p.epsilon(dt), ..Default::default() };

    let mut ci = state.ci;
    if dt > 0.0 {
        let mut done = 0.0;
        let mut depth = 0u32;
        let mut bisected = false;
        while dt - done > 1e-14 * dt {
            let h = (dt * 0.5f64.powi(depth as i32)).min(dt - done);
            match problem.solve(&ci, h) {
                Some((next, iterations)) => {
                    ci = next;
                    done += h;
                    diagnostics.iterations += iterations;
                    if bisected {
                        diagnostics.substeps += 1;
                    }
                    depth = depth.saturating_sub(1);
                }
                None => {
                    diagnostics.divergences += 1;
                    bisected = true;
                    depth += 1;
                    if depth > SUBSTEP_MAX_DEPTH {
                        return Err(ConvergenceError { method: scheme.name(), dt, depth: SUBSTEP_MAX_DEPTH }.into());
                    }
                }
            }
        }
    }
    let stress = stress_2pk(c_next, &ci, p)?;
    Ok(StepResult { state: LagrangianState { ci }, stress, diagnostics })
}

/// Modified Euler backward step, `Ci = unimodular(Ci_n + dt f(Ci) Ci)`.
pub fn mebm_step(
    c_next: &SymTensor3,
    state: &LagrangianState,
    dt: f64,
    p: &MaterialParams,
) -> Result<StepResult<LagrangianState>> {
    integrate(Scheme::Mebm, c_next, state, dt, p)
}

/// Exponential-map step, `Ci = exp(dt f(Ci)) Ci_n`.
///
/// The product is symmetric only to first order in `dt`, so its symmetric
/// part is taken before the unimodular projection.
pub fn em_step(
    c_next: &SymTensor3,
    state: &LagrangianState,
    dt: f64,
    p: &MaterialParams,
) -> Result<StepResult<LagrangianState>> {
    integrate(Scheme::Em, c_next, state, dt, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::ifebm_step_lagrangian;

    fn c_sample() -> SymTensor3 {
        SymTensor3([1.7, 0.75, 0.95, 0.2, -0.15, 0.1])
    }

    #[test]
    fn zero_step_keeps_state() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        let s = LagrangianState { ci: SymTensor3([1.1, 0.9, 1.0, 0.1, 0.0, 0.0]).unimodular().unwrap() };
        for f in [mebm_step, em_step] {
            let r = f(&c_sample(), &s, 0.0, &p).unwrap();
            assert_eq!(r.state.ci, s.ci);
            assert_eq!(r.diagnostics.iterations, 0);
        }
    }

    #[test]
    fn relaxed_state_is_stationary() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        let c_bar = c_sample().unimodular().unwrap();
        for f in [mebm_step, em_step] {
            let r = f(&c_sample(), &LagrangianState { ci: c_bar }, 0.4, &p).unwrap();
            assert!((r.state.ci - c_bar).norm() < 1e-12);
        }
    }

    #[test]
    fn neo_hookean_mebm_equals_ifebm() {
        let p = MaterialParams { c10: 1.0, c01: 0.0, eta: 0.5 };
        let s = LagrangianState::natural();
        for dt in [0.01, 0.1, 1.0] {
            let a = mebm_step(&c_sample(), &s, dt, &p).unwrap();
            let b = ifebm_step_lagrangian(&c_sample(), &s, dt, &p).unwrap();
            assert!((a.state.ci - b.state.ci).norm() < 1e-10, "dt = {dt}");
            assert_eq!(a.diagnostics.substeps, 0);
        }
    }

    #[test]
    fn newton_from_previous_state_diverges_for_long_steps() {
        let p = MaterialParams { c10: 1.0, c01: 0.0, eta: 0.5 };
        for f in [mebm_step, em_step] {
            let r = f(&c_sample(), &LagrangianState::natural(), 10.0, &p).unwrap();
            assert!(r.diagnostics.divergences > 0 && r.diagnostics.substeps > 0);
            assert!((r.state.ci.det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn converged_solution_satisfies_equation() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        let s = LagrangianState::natural();
        let c_bar = c_sample().unimodular().unwrap();
        let dt = 0.3;
        let r = mebm_step(&c_sample(), &s, dt, &p).unwrap();
        let fy = flow_times_ci(&c_bar, &c_bar.inverse().unwrap(), &r.state.ci, &p).unwrap();
        let rhs = (s.ci + fy * dt).unimodular().unwrap();
        assert!((rhs - r.state.ci).norm() < 1e-11);
        assert!((r.state.ci.det() - 1.0).abs() < 1e-13);
        assert!(r.diagnostics.iterations > 0);
    }

    #[test]
    fn large_steps_fall_back_to_substepping() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        let c = SymTensor3([6.0, 0.6, 0.5, 0.8, -0.4, 0.1]);
        let s = LagrangianState::natural();
        for f in [mebm_step, em_step] {
            let r = f(&c, &s, 1e3, &p).unwrap();
            assert!((r.state.ci.det() - 1.0).abs() < 1e-12);
            let c_bar = c.unimodular().unwrap();
            assert!((r.state.ci - c_bar).norm() < 1e-6);
        }
    }
}
