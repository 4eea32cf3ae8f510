//! Generalized Maxwell model: a hyperelastic equilibrium branch in parallel
//! with any number of Maxwell branches.
//!
//! Each Maxwell branch has its own internal state and is advanced on its own;
//! the branches only share the strain. The equilibrium branch has no state.

use serde::{Deserialize, Serialize};

use crate::constitutive::{check_manifold, stress_2pk, LagrangianState, MaterialParams, Method};
use crate::error::{DomainError, Error, Result};
use crate::tensor3::{SymTensor3, Tensor3};

/// Parameters of the cartilaginous tissue model: equilibrium 0.2/0.2 MPa and
/// four Maxwell branches with viscosities from 25 down to 0.005 MPa·s.
pub const TMJ_CARTILAGE_JSON: &str = include_str!("../data/tmj_cartilage.json");

/// Volumetric response of the equilibrium branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bulk {
    /// `k/50 ((det C)^(5/2) + (det C)^(-5/2) - 2)` with bulk modulus `k`.
    Finite(f64),
    /// Volume change is excluded and the pressure is set by the loading.
    Incompressible,
}

impl Serialize for Bulk {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bulk::Finite(k) => s.serialize_f64(*k),
            Bulk::Incompressible => s.serialize_str("incompressible"),
        }
    }
}

impl<'de> Deserialize<'de> for Bulk {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Modulus(f64),
            Flag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Modulus(k) => Ok(Bulk::Finite(k)),
            Raw::Flag(s) if s == "incompressible" => Ok(Bulk::Incompressible),
            Raw::Flag(s) => Err(serde::de::Error::custom(format!(
                "bulk modulus must be a number or \"incompressible\", got \"{s}\""
            ))),
        }
    }
}

/// Equilibrium branch parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumParams {
    pub c10: f64,
    pub c01: f64,
    #[serde(rename = "k")]
    pub bulk: Bulk,
}

impl EquilibriumParams {
    pub fn validate(&self) -> Result<(), DomainError> {
        if !(self.c10 >= 0.0 && self.c01 >= 0.0 && self.c10.is_finite() && self.c01.is_finite()) {
            return Err(DomainError::InvalidParameter(format!(
                "equilibrium moduli must be finite and non-negative (c10 = {}, c01 = {})",
                self.c10, self.c01
            )));
        }
        if let Bulk::Finite(k) = self.bulk {
            if !(k > 0.0 && k.is_finite()) {
                return Err(DomainError::InvalidParameter(format!("bulk modulus must be positive, got {k}")));
            }
        }
        Ok(())
    }
}

/// Isochoric part of the equilibrium stress, `C⁻¹(c10 C̄ - c01 C̄⁻¹)ᴰ`.
fn isochoric_equilibrium(c: &SymTensor3, p: &EquilibriumParams) -> Result<SymTensor3, DomainError> {
    let c_inv = c.inverse()?;
    let j3 = c.det().cbrt();
    let tau = (p.c10 / j3) * c.trace() - p.c01 * j3 * c_inv.trace();
    let c_inv_sq = c_inv.dot(&c_inv).sym_part();
    Ok(SymTensor3::IDENTITY * (p.c10 / j3) - c_inv_sq * (p.c01 * j3) - c_inv * (tau / 3.0))
}

/// 2nd Piola-Kirchhoff stress of the equilibrium branch.
///
/// With [`Bulk::Incompressible`] only the isochoric part is returned; the
/// pressure term `-p C⁻¹` is left to the caller.
///
/// ```text
/// T̃ = C⁻¹(c10 C̄ - c01 C̄⁻¹)ᴰ + k/10 ((det C)^(5/2) - (det C)^(-5/2)) C⁻¹
/// ```
pub fn equilibrium_stress(c: &SymTensor3, p: &EquilibriumParams) -> Result<SymTensor3> {
    if !c.is_finite() {
        return Err(DomainError::NonFinite("right Cauchy-Green tensor").into());
    }
    if !c.is_positive_definite() {
        return Err(DomainError::NotPositiveDefinite { min_eigenvalue: c.min_eigenvalue() }.into());
    }
    let iso = isochoric_equilibrium(c, p)?;
    Ok(match p.bulk {
        Bulk::Incompressible => iso,
        Bulk::Finite(k) => {
            let j = c.det();
            if j == 1.0 {
                iso
            } else {
                iso + c.inverse()? * (k / 10.0 * (j.powf(2.5) - j.powf(-2.5)))
            }
        }
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    equilibrium: EquilibriumParams,
    #[serde(default)]
    branches: Vec<MaterialParams>,
}

/// Equilibrium branch plus Maxwell branches with their current states.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeModel {
    pub equilibrium: EquilibriumParams,
    pub branches: Vec<MaterialParams>,
    pub states: Vec<LagrangianState>,
}

impl CompositeModel {
    /// Model with every branch in its stress-free state.
    pub fn new(equilibrium: EquilibriumParams, branches: Vec<MaterialParams>) -> Result<Self> {
        equilibrium.validate()?;
        for b in &branches {
            b.validate()?;
        }
        let states = vec![LagrangianState::natural(); branches.len()];
        Ok(CompositeModel { equilibrium, branches, states })
    }

    /// Parses a model document
    /// `{"equilibrium": {"c10", "c01", "k"}, "branches": [{"c10", "c01", "eta"}, ...]}`
    /// where `k` is a number or `"incompressible"`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(s).map_err(|e| Error::ModelFile(e.to_string()))?;
        Self::new(file.equilibrium, file.branches)
    }

    pub fn to_json_string(&self) -> String {
        let file = ModelFile { equilibrium: self.equilibrium, branches: self.branches.clone() };
        serde_json::to_string_pretty(&file).expect("model parameters serialize")
    }

    /// The bundled cartilage parameter set.
    pub fn tmj_cartilage() -> Self {
        Self::from_json_str(TMJ_CARTILAGE_JSON).expect("bundled model file is valid")
    }

    /// Resets every branch to its stress-free state.
    pub fn reset(&mut self) {
        self.states.iter_mut().for_each(|s| *s = LagrangianState::natural());
    }

    pub fn validate_states(&self) -> Result<(), DomainError> {
        if self.states.len() != self.branches.len() {
            return Err(DomainError::InvalidParameter(format!(
                "{} branches but {} states",
                self.branches.len(),
                self.states.len()
            )));
        }
        self.states.iter().try_for_each(|s| check_manifold(&s.ci))
    }

    /// Stress at `c` with the current branch states, no evolution.
    pub fn stress(&self, c: &SymTensor3) -> Result<SymTensor3> {
        let mut total = equilibrium_stress(c, &self.equilibrium)?;
        for (b, s) in self.branches.iter().zip(&self.states) {
            total += stress_2pk(c, &s.ci, b)?;
        }
        Ok(total)
    }

    /// Advances every branch to `c_next` and returns the total 2nd
    /// Piola-Kirchhoff stress. The states are only updated if every branch
    /// succeeds.
    pub fn step(&mut self, c_next: &SymTensor3, dt: f64, method: Method) -> Result<SymTensor3> {
        let (states, stress) = composite_step(c_next, self, dt, method)?;
        self.states = states;
        Ok(stress)
    }
}

/// Advances every branch of `model` to `c_next` by `dt` with `method` and
/// returns the new branch states and the total stress
/// `T̃ = T̃_eq + Σ T̃_ov`.
pub fn composite_step(
    c_next: &SymTensor3,
    model: &CompositeModel,
    dt: f64,
    method: Method,
) -> Result<(Vec<LagrangianState>, SymTensor3)> {
    model.validate_states()?;
    let mut total = equilibrium_stress(c_next, &model.equilibrium)?;
    let mut states = Vec::with_capacity(model.branches.len());
    for (b, s) in model.branches.iter().zip(&model.states) {
        let r = method.step(c_next, s, dt, b)?;
        total += r.stress;
        states.push(r.state);
    }
    Ok((states, total))
}

/// Isochoric uniaxial deformation `diag(1 + ε, (1 + ε)^(-1/2), (1 + ε)^(-1/2))`.
pub fn uniaxial_deformation(strain: f64) -> Result<Tensor3, DomainError> {
    let stretch = 1.0 + strain;
    if !(stretch > 0.0) || !stretch.is_finite() {
        return Err(DomainError::NonPositiveDeterminant(stretch));
    }
    let lateral = stretch.sqrt().recip();
    Ok(Tensor3::from_diag([stretch, lateral, lateral]))
}

fn axial_stretch(f: &Tensor3) -> Result<f64, DomainError> {
    let m = &f.0;
    let off = [m[0][1], m[0][2], m[1][0], m[1][2], m[2][0], m[2][1]];
    let stretch = m[0][0];
    let lateral = m[1][1];
    let tol = 1e-12 * f.norm();
    let uniaxial = off.iter().all(|x| x.abs() <= tol)
        && (m[2][2] - lateral).abs() <= tol
        && stretch > 0.0
        && (stretch * lateral * lateral - 1.0).abs() <= 1e-12;
    if !uniaxial {
        return Err(DomainError::InvalidParameter("deformation is not isochoric uniaxial".into()));
    }
    Ok(stretch)
}

/// Axial engineering stress along a uniaxial history.
///
/// `history` holds `(t, F)` pairs with increasing `t`; every `F` must be of
/// the form returned by [`uniaxial_deformation`]. The branches of `model`
/// start from their current states and are left in their final states.
///
/// For an incompressible model the pressure follows from the traction-free
/// lateral faces, giving `P11 = (S11 - S22) / λ` with Kirchhoff stress
/// `S = F T̃ Fᵀ`. With a finite bulk modulus the volumetric term vanishes on
/// these isochoric histories and `P11 = S11 / λ`.
pub fn uniaxial_axial_stress(
    model: &mut CompositeModel,
    history: &[(f64, Tensor3)],
    method: Method,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(history.len());
    let mut t_prev = None;
    for (t, f) in history {
        let stretch = axial_stretch(f)?;
        let c = SymTensor3::IDENTITY.pull(f);
        let stress = match t_prev {
            None => model.stress(&c)?,
            Some(t0) => {
                let dt = t - t0;
                if !(dt >= 0.0) {
                    return Err(DomainError::NegativeTimeStep(dt).into());
                }
                model.step(&c, dt, method)?
            }
        };
        t_prev = Some(*t);
        out.push(axial_from_kirchhoff(&stress.push(f), stretch, model.equilibrium.bulk));
    }
    Ok(out)
}

fn axial_from_kirchhoff(s: &SymTensor3, stretch: f64, bulk: Bulk) -> f64 {
    let axial = match bulk {
        Bulk::Incompressible => s.get(0, 0) - s.get(1, 1),
        Bulk::Finite(_) => s.get(0, 0),
    };
    axial / stretch
}

/// Axial engineering stress from the Kirchhoff stress of a uniaxial state,
/// with the same pressure treatment as [`uniaxial_axial_stress`].
pub fn axial_engineering_stress(kirchhoff: &SymTensor3, f: &Tensor3, bulk: Bulk) -> Result<f64, DomainError> {
    Ok(axial_from_kirchhoff(kirchhoff, axial_stretch(f)?, bulk))
}
