//! Consistent tangent `∂T̃/∂C` of a discrete step by central differences.
//!
//! Stress and strain are flattened to six-vectors:
//!
//! ```text
//! T⃗ = (T11, T22, T33, T12, T13, T23)
//! C⃗ = (C11, C22, C33, 2C12, 2C13, 2C23)
//! ```
//!
//! With this pairing the tangent of a hyperelastic law is a symmetric 6×6
//! matrix, so its skew part measures how far a stepper is from having a
//! potential.

use crate::constitutive::{LagrangianState, MaterialParams, Method};
use crate::error::{DomainError, Result};
use crate::tensor3::SymTensor3;

/// A symmetric tensor flattened to six components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Voigt6(pub [f64; 6]);

impl Voigt6 {
    /// Stress convention, shear components taken as they are.
    pub fn stress(t: &SymTensor3) -> Self {
        Voigt6(t.0)
    }

    /// Strain convention, shear components doubled.
    pub fn strain(c: &SymTensor3) -> Self {
        let a = c.0;
        Voigt6([a[0], a[1], a[2], 2.0 * a[3], 2.0 * a[4], 2.0 * a[5]])
    }

    pub fn to_stress_tensor(&self) -> SymTensor3 {
        SymTensor3(self.0)
    }

    pub fn to_strain_tensor(&self) -> SymTensor3 {
        let a = self.0;
        SymTensor3([a[0], a[1], a[2], 0.5 * a[3], 0.5 * a[4], 0.5 * a[5]])
    }
}

/// 6×6 tangent `∂T⃗/∂C⃗`, `self.0[i][j]` is the derivative of stress slot i
/// with respect to strain slot j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent6(pub [[f64; 6]; 6]);

impl Tangent6 {
    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 6]; 6];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        Tangent6(t)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `‖M - Mᵀ‖`
    pub fn skew_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                let d = self.0[i][j] - self.0[j][i];
                s += d * d;
            }
        }
        s.sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Tangent6(self.0.map(|row| row.map(|x| x * factor)))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

/// Default difference step `1e-6 · max(‖C‖, 1)`.
pub fn default_fd_step(c: &SymTensor3) -> f64 {
    1e-6 * c.norm().max(1.0)
}

/// `C` with strain slot `slot` moved by `delta`.
fn perturb(c: &SymTensor3, slot: usize, delta: f64) -> SymTensor3 {
    let mut out = *c;
    if slot < 3 {
        out.0[slot] += delta;
    } else {
        out.0[slot] += 0.5 * delta;
    }
    out
}

/// Central-difference tangent of the step map `C_next ↦ T̃` with the
/// previous state held fixed.
///
/// Column j is `(T⃗(C⃗ + h e_j) - T⃗(C⃗ - h e_j)) / 2h`. If a perturbed `C` is
/// not positive definite the step is reduced once by a factor of ten.
pub fn consistent_tangent(
    method: Method,
    c_next: &SymTensor3,
    state: &LagrangianState,
    dt: f64,
    p: &MaterialParams,
    h: f64,
) -> Result<Tangent6> {
    if !(h > 0.0) {
        return Err(DomainError::InvalidParameter(format!("difference step must be positive, got {h}")).into());
    }
    let admissible = |h: f64| {
        (0..6).all(|j| {
            perturb(c_next, j, h).is_positive_definite() && perturb(c_next, j, -h).is_positive_definite()
        })
    };
    let h = if admissible(h) {
        h
    } else if admissible(0.1 * h) {
        0.1 * h
    } else {
        return Err(DomainError::NotPositiveDefinite { min_eigenvalue: c_next.min_eigenvalue() }.into());
    };

    let mut m = [[0.0; 6]; 6];
    for j in 0..6 {
        let plus = method.step(&perturb(c_next, j, h), state, dt, p)?.stress;
        let minus = method.step(&perturb(c_next, j, -h), state, dt, p)?.stress;
        for i in 0..6 {
            m[i][j] = (plus.0[i] - minus.0[i]) / (2.0 * h);
        }
    }
    let t = Tangent6(m);
    if !t.is_finite() {
        return Err(DomainError::NonFinite("consistent tangent").into());
    }
    Ok(t)
}

/// `max ‖M - Mᵀ‖ / max ‖M‖` over a history of tangents.
///
/// Returns NaN for an empty history and zero when every tangent vanishes.
pub fn symmetry_deviation(history: &[Tangent6]) -> f64 {
    if history.is_empty() {
        return f64::NAN;
    }
    let skew = history.iter().map(Tangent6::skew_norm).fold(0.0, f64::max);
    let size = history.iter().map(Tangent6::norm).fold(0.0, f64::max);
    if size == 0.0 {
        0.0
    } else {
        skew / size
    }
}
