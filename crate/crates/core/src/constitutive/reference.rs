use super::{ifebm_step_lagrangian, stress_2pk, LagrangianState, MaterialParams};
use crate::error::{DomainError, Result};
use crate::tensor3::SymTensor3;

/// Largest stress change under doubling of the substep count for which a
/// reference solution counts as converged.
pub const RICHARDSON_TOLERANCE: f64 = 1e-8;

/// Fine-step solution sampled on an output grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub times: Vec<f64>,
    /// Internal state at each output time.
    pub ci: Vec<SymTensor3>,
    /// 2nd Piola-Kirchhoff stress at each output time.
    pub stress: Vec<SymTensor3>,
    /// Substeps per output interval.
    pub n_substeps: usize,
    /// Largest Frobenius change of an output stress when `n_substeps` is doubled.
    pub richardson_gap: f64,
}

impl ReferenceSolution {
    pub fn converged(&self) -> bool {
        self.richardson_gap < RICHARDSON_TOLERANCE
    }
}

fn integrate<F>(
    c_of_t: &F,
    ci0: &SymTensor3,
    t_grid: &[f64],
    p: &MaterialParams,
    n_substeps: usize,
) -> Result<(Vec<SymTensor3>, Vec<SymTensor3>)>
where
    F: Fn(f64) -> Result<SymTensor3>,
{
    let mut state = LagrangianState { ci: *ci0 };
    let mut ci = Vec::with_capacity(t_grid.len());
    let mut stress = Vec::with_capacity(t_grid.len());
    ci.push(*ci0);
    stress.push(stress_2pk(&c_of_t(t_grid[0])?, ci0, p)?);
    for w in t_grid.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let h = (t1 - t0) / n_substeps as f64;
        let mut last = SymTensor3::ZERO;
        for k in 1..=n_substeps {
            let t = if k == n_substeps { t1 } else { t0 + h * k as f64 };
            let r = ifebm_step_lagrangian(&c_of_t(t)?, &state, h, p)?;
            state = r.state;
            last = r.stress;
        }
        ci.push(state.ci);
        stress.push(last);
    }
    Ok((ci, stress))
}

/// Integrates with IFEBM using `n_substeps` uniform substeps per output
/// interval and measures the change caused by doubling the substep count.
///
/// `c_of_t` gives the right Cauchy-Green tensor at any time in the range of
/// `t_grid`, which must be increasing.
pub fn reference_solve<F>(
    c_of_t: F,
    ci0: &SymTensor3,
    t_grid: &[f64],
    p: &MaterialParams,
    n_substeps: usize,
) -> Result<ReferenceSolution>
where
    F: Fn(f64) -> Result<SymTensor3>,
{
    if n_substeps == 0 {
        return Err(DomainError::InvalidParameter("n_substeps must be at least 1".into()).into());
    }
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(DomainError::InvalidParameter("time grid must be non-empty and increasing".into()).into());
    }
    super::check_manifold(ci0)?;
    let (ci, stress) = integrate(&c_of_t, ci0, t_grid, p, n_substeps)?;
    let (_, fine) = integrate(&c_of_t, ci0, t_grid, p, 2 * n_substeps)?;
    let richardson_gap = stress.iter().zip(&fine).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    Ok(ReferenceSolution { times: t_grid.to_vec(), ci, stress, n_substeps, richardson_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_identity_loading_stays_at_identity() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        let grid: Vec<f64> = (0..=4).map(|k| k as f64 * 0.25).collect();
        let r = reference_solve(|_| Ok(SymTensor3::IDENTITY), &SymTensor3::IDENTITY, &grid, &p, 10).unwrap();
        for ci in &r.ci {
            assert!((*ci - SymTensor3::IDENTITY).norm() < 1e-15);
        }
        assert_eq!(r.richardson_gap, 0.0);
        assert!(r.converged());
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        let c = |_| Ok(SymTensor3::IDENTITY);
        assert!(reference_solve(c, &SymTensor3::IDENTITY, &[0.0, 1.0], &p, 0).is_err());
        assert!(reference_solve(c, &SymTensor3::IDENTITY, &[1.0, 0.0], &p, 2).is_err());
        assert!(reference_solve(c, &(SymTensor3::IDENTITY * 2.0), &[0.0, 1.0], &p, 2).is_err());
    }

    #[test]
    fn doubling_gap_halves_for_first_order_method() {
        let p = MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 };
        // isochoric simple shear ramp
        let c = |t: f64| {
            let g = t;
            Ok(SymTensor3::from_upper([[1.0, g, 0.0], [g, 1.0 + g * g, 0.0], [0.0, 0.0, 1.0]]))
        };
        let grid = [0.0, 0.5, 1.0];
        let a = reference_solve(c, &SymTensor3::IDENTITY, &grid, &p, 50).unwrap();
        let b = reference_solve(c, &SymTensor3::IDENTITY, &grid, &p, 100).unwrap();
        let ratio = a.richardson_gap / b.richardson_gap;
        assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
    }
}
