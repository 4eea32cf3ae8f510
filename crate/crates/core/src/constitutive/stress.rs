use super::MaterialParams;
use crate::error::DomainError;
use crate::tensor3::{SymTensor3, Tensor3};

/// 2nd Piola-Kirchhoff stress `T̃ = C⁻¹ (c10 C̄ Ci⁻¹ - c01 Ci C̄⁻¹)ᴰ`.
///
/// Expanded into the symmetric form
///
/// ```text
/// T̃ = c10 J⁻¹ᐟ³ Ci⁻¹ - c01 J¹ᐟ³ C⁻¹ Ci C⁻¹ - τ/3 C⁻¹,
/// τ = c10 J⁻¹ᐟ³ C:Ci⁻¹ - c01 J¹ᐟ³ Ci:C⁻¹,   J = det C
/// ```
///
/// so the result is symmetric without a symmetrization step.
pub fn stress_2pk(
    c: &SymTensor3,
    ci: &SymTensor3,
    p: &MaterialParams,
) -> Result<SymTensor3, DomainError> {
    if !c.is_positive_definite() {
        return Err(DomainError::NotPositiveDefinite { min_eigenvalue: c.min_eigenvalue() });
    }
    if !ci.is_positive_definite() {
        return Err(DomainError::NotPositiveDefinite { min_eigenvalue: ci.min_eigenvalue() });
    }
    let c_inv = c.inverse()?;
    let ci_inv = ci.inverse()?;
    let j3 = c.det().cbrt();
    let a = p.c10 / j3;
    let b = p.c01 * j3;
    let tau = a * c.ddot(&ci_inv) - b * ci.ddot(&c_inv);
    Ok(a * ci_inv - b * ci.sandwich(&c_inv) - (tau / 3.0) * c_inv)
}

/// Kirchhoff stress `S = c10 (B̄e)ᴰ - c01 (B̄e⁻¹)ᴰ` on the current configuration.
pub fn kirchhoff_eulerian(
    be_inv_bar: &SymTensor3,
    p: &MaterialParams,
) -> Result<SymTensor3, DomainError> {
    if !be_inv_bar.is_positive_definite() {
        return Err(DomainError::NotPositiveDefinite { min_eigenvalue: be_inv_bar.min_eigenvalue() });
    }
    let be_bar = be_inv_bar.inverse()?;
    Ok(p.c10 * be_bar.deviator() - p.c01 * be_inv_bar.deviator())
}

/// Push-forward `S = F T̃ Fᵀ`.
pub fn kirchhoff_from_2pk(t: &SymTensor3, f: &Tensor3) -> SymTensor3 {
    t.push(f)
}
