//! The tensor quadratic `φ X = A - ε X²` with the side condition `det X = 1`.
//!
//! `X` is coaxial with `A`, so every evaluation works on the eigenvalues of
//! `A`: with `aᵢ` an eigenvalue of `A` the matching eigenvalue of `X` is the
//! positive root of `ε x² + φ x - aᵢ = 0`.

use crate::error::DomainError;
use crate::tensor3::{EigenSystem3, SymTensor3};

/// First-order estimate of the multiplier `φ` for small `ε`.
///
/// Returns `(φ₀, φ)` with `φ₀ = (det A)^(1/3)` and `φ = φ₀ - tr A/(3φ₀) · ε`.
pub fn solve_phi(a: &SymTensor3, eps: f64) -> Result<(f64, f64), DomainError> {
    let det = a.det();
    if !(det > 0.0) || !det.is_finite() {
        return Err(DomainError::NonPositiveDeterminant(det));
    }
    let phi0 = det.cbrt();
    Ok((phi0, phi0 - a.trace() / (3.0 * phi0) * eps))
}

/// `X = 2A [(φ² I + 4εA)^(1/2) + φ I]⁻¹`, the positive definite root.
pub fn quad_root_x(a: &SymTensor3, phi: f64, eps: f64) -> Result<SymTensor3, DomainError> {
    QuadraticProblem::new(a, eps)?.x(phi)
}

/// `R(φ) = det X(φ) - 1`.
pub fn residual_r(phi: f64, a: &SymTensor3, eps: f64) -> Result<f64, DomainError> {
    Ok(QuadraticProblem::new(a, eps)?.residual(phi))
}

/// The root in the subtractive form `X = [-φ I + (φ² I + 4εA)^(1/2)] / (2ε)`.
///
/// Algebraically equal to [`quad_root_x`] but loses all accuracy for small
/// `ε` because the round-off of the bracket is amplified by `1/ε`.
#[cfg(feature = "subtractive-root")]
pub fn subtractive_root_x(a: &SymTensor3, phi: f64, eps: f64) -> Result<SymTensor3, DomainError> {
    let shifted = SymTensor3::IDENTITY * (phi * phi) + *a * (4.0 * eps);
    let root = shifted.spd_sqrt()?;
    Ok((root - SymTensor3::IDENTITY * phi) * (0.5 / eps))
}

/// `A` and `ε` with the spectral decomposition of `A` kept for repeated
/// evaluation of `X(φ)` and `R(φ)`.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticProblem {
    pub a: SymTensor3,
    pub eps: f64,
    eigen: EigenSystem3,
}

impl QuadraticProblem {
    pub fn new(a: &SymTensor3, eps: f64) -> Result<Self, DomainError> {
        if !(eps >= 0.0) {
            return Err(DomainError::InvalidParameter(format!("eps must be non-negative, got {eps}")));
        }
        let eigen = a.spd_eigen()?;
        Ok(QuadraticProblem { a: *a, eps, eigen })
    }

    /// `(φ₀, φ)` from [`solve_phi`].
    pub fn estimate(&self) -> Result<(f64, f64), DomainError> {
        solve_phi(&self.a, self.eps)
    }

    fn root(&self, a: f64, phi: f64) -> f64 {
        if self.eps == 0.0 {
            return a / phi;
        }
        let s = (phi * phi + 4.0 * self.eps * a).sqrt();
        if phi >= 0.0 {
            2.0 * a / (s + phi)
        } else {
            // no cancellation in s - φ for negative φ
            (s - phi) / (2.0 * self.eps)
        }
    }

    fn roots(&self, phi: f64) -> [f64; 3] {
        self.eigen.values.map(|a| self.root(a, phi))
    }

    pub fn x(&self, phi: f64) -> Result<SymTensor3, DomainError> {
        if self.eps == 0.0 {
            if !(phi > 0.0) {
                return Err(DomainError::InvalidParameter(format!(
                    "phi must be positive when eps = 0, got {phi}"
                )));
            }
            return Ok(self.a * phi.recip());
        }
        Ok(self.eigen.compose(self.roots(phi)))
    }

    pub fn residual(&self, phi: f64) -> f64 {
        let [x1, x2, x3] = self.roots(phi);
        x1 * x2 * x3 - 1.0
    }

    /// `dR/dφ`. Each root satisfies `(2εx + φ) dx = -x dφ`, so
    /// `R' = -det X · Σ 1/(2εxᵢ + φ)`.
    pub fn residual_slope(&self, phi: f64) -> f64 {
        let x = self.roots(phi);
        let det: f64 = x.iter().product();
        -det * x.iter().map(|xi| (2.0 * self.eps * xi + phi).recip()).sum::<f64>()
    }
}
