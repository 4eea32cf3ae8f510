//! Single-branch multiplicative Maxwell fluid with Mooney-Rivlin elasticity.
//!
//! The internal variable is the inelastic right Cauchy-Green tensor `Ci`,
//! which lives on the manifold of symmetric positive definite tensors with
//! unit determinant. Its evolution is
//!
//! ```text
//! dCi/dt = 1/η (c10 C̄ Ci⁻¹ - c01 Ci C̄⁻¹)ᴰ Ci
//! ```
//!
//! and the stress follows from [`stress_2pk`]. Four Lagrangian steppers are
//! provided (see [`Method`]) plus the iteration-free stepper on the current
//! configuration, [`ifebm_step_eulerian`].

mod eulerian;
mod ifebm;
mod implicit;
mod quadratic;
mod reference;
mod stress;
mod twoiter;

pub use eulerian::ifebm_step_eulerian;
pub use ifebm::ifebm_step_lagrangian;
pub use implicit::{em_step, mebm_step, NEWTON_MAX_ITERATIONS, SUBSTEP_MAX_DEPTH};
pub use quadratic::{quad_root_x, residual_r, solve_phi, QuadraticProblem};
#[cfg(feature = "subtractive-root")]
pub use quadratic::subtractive_root_x;
pub use reference::{reference_solve, ReferenceSolution, RICHARDSON_TOLERANCE};
pub use stress::{kirchhoff_eulerian, kirchhoff_from_2pk, stress_2pk};
pub use twoiter::twoiter_step;

use serde::{Deserialize, Serialize};

use crate::error::{DomainError, Result};
use crate::tensor3::{SymTensor3, Tensor3};

/// Tolerance on `det Ci = 1` for a valid internal state.
pub const MANIFOLD_TOLERANCE: f64 = 1e-12;

/// Parameters of one Maxwell branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub c10: f64,
    pub c01: f64,
    pub eta: f64,
}

impl MaterialParams {
    pub fn new(c10: f64, c01: f64, eta: f64) -> Result<Self, DomainError> {
        let p = MaterialParams { c10, c01, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        let bad = |msg: String| Err(DomainError::InvalidParameter(msg));
        if !(self.c10.is_finite() && self.c01.is_finite()) || self.c10 < 0.0 || self.c01 < 0.0 {
            return bad(format!("moduli must be finite and non-negative (c10 = {}, c01 = {})", self.c10, self.c01));
        }
        if !(self.c10 + self.c01 > 0.0) {
            return bad("c10 + c01 must be positive".into());
        }
        // eta = +inf is a frozen branch, which is allowed
        if !(self.eta > 0.0) {
            return bad(format!("viscosity must be positive (eta = {})", self.eta));
        }
        Ok(())
    }

    /// Shear modulus `c10 + c01` of the small-strain limit.
    pub fn shear_modulus(&self) -> f64 {
        self.c10 + self.c01
    }

    /// `dt · c01 / η`, the coefficient of the quadratic term.
    pub fn epsilon(&self, dt: f64) -> f64 {
        self.c01 * self.flow_factor(dt)
    }

    /// `dt / η`, zero for a frozen branch.
    pub fn flow_factor(&self, dt: f64) -> f64 {
        if self.eta.is_infinite() {
            0.0
        } else {
            dt / self.eta
        }
    }
}

/// Internal state on the reference configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianState {
    pub ci: SymTensor3,
}

impl LagrangianState {
    /// Stress-free initial state `Ci = I`.
    pub fn natural() -> Self {
        LagrangianState { ci: SymTensor3::IDENTITY }
    }

    pub fn new(ci: SymTensor3) -> Result<Self, DomainError> {
        check_manifold(&ci)?;
        Ok(LagrangianState { ci })
    }
}

impl Default for LagrangianState {
    fn default() -> Self {
        Self::natural()
    }
}

/// Internal state on the current configuration.
///
/// `be_inv_bar` is the unimodular part of the inverse elastic left
/// Cauchy-Green tensor, `f_prev` the deformation gradient of the last step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerianState {
    pub be_inv_bar: SymTensor3,
    pub f_prev: Tensor3,
}

impl EulerianState {
    pub fn natural() -> Self {
        EulerianState { be_inv_bar: SymTensor3::IDENTITY, f_prev: Tensor3::IDENTITY }
    }

    /// Eulerian state equivalent to a Lagrangian one at deformation `f`.
    pub fn from_lagrangian(state: &LagrangianState, f: &Tensor3) -> Result<Self, DomainError> {
        let f_inv = f.inverse()?;
        // B_e⁻¹ = F⁻ᵀ Ci F⁻¹
        let be_inv = state.ci.pull(&f_inv);
        Ok(EulerianState { be_inv_bar: be_inv.unimodular()?, f_prev: *f })
    }

    /// Inverse of [`EulerianState::from_lagrangian`].
    pub fn to_lagrangian(&self) -> Result<LagrangianState, DomainError> {
        let ci = self.be_inv_bar.pull(&self.f_prev).unimodular()?;
        Ok(LagrangianState { ci })
    }
}

/// Scalars reported by a step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// `(det A)^(1/3)`, zero for steppers that do not form `A`.
    pub phi0: f64,
    /// Incompressibility multiplier actually used.
    pub phi: f64,
    /// `c01 dt / η`.
    pub eps: f64,
    /// Newton iterations, summed over substeps. Zero for closed-form paths.
    pub iterations: u32,
    /// Accepted substeps after bisection, zero when the step was taken whole.
    pub substeps: u32,
    /// Newton solves that failed and triggered a bisection.
    pub divergences: u32,
    /// 2IEBM fell back to the estimate because `R'` vanished.
    pub fallback: bool,
}

/// Output of a stepper: new state, stress and diagnostics.
///
/// For Lagrangian steppers `stress` is the 2nd Piola-Kirchhoff stress, for
/// the Eulerian stepper it is the Kirchhoff stress.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult<S> {
    pub state: S,
    pub stress: SymTensor3,
    pub diagnostics: Diagnostics,
}

/// Lagrangian time stepper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Iteration-free Euler backward method.
    Ifebm,
    /// IFEBM followed by two Newton corrections of the multiplier.
    TwoIter,
    /// Euler backward with exact unimodular projection, solved by Newton.
    Mebm,
    /// Exponential map, solved by Newton.
    Em,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Ifebm, Method::TwoIter, Method::Mebm, Method::Em];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ifebm => "ifebm",
            Method::TwoIter => "2iebm",
            Method::Mebm => "mebm",
            Method::Em => "em",
        }
    }

    pub fn step(
        self,
        c_next: &SymTensor3,
        state: &LagrangianState,
        dt: f64,
        p: &MaterialParams,
    ) -> Result<StepResult<LagrangianState>> {
        match self {
            Method::Ifebm => ifebm_step_lagrangian(c_next, state, dt, p),
            Method::TwoIter => twoiter_step(c_next, state, dt, p),
            Method::Mebm => mebm_step(c_next, state, dt, p),
            Method::Em => em_step(c_next, state, dt, p),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ifebm" => Ok(Method::Ifebm),
            "2iebm" | "twoiter" => Ok(Method::TwoIter),
            "mebm" => Ok(Method::Mebm),
            "em" => Ok(Method::Em),
            other => Err(format!("unknown method '{other}' (expected ifebm, 2iebm, mebm or em)")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Step with no flow (`dt = 0` or `η = ∞`): the state is kept exactly.
fn frozen_step(c_next: &SymTensor3, state: &LagrangianState, p: &MaterialParams) -> Result<StepResult<LagrangianState>> {
    check_manifold(&state.ci)?;
    let stress = stress_2pk(c_next, &state.ci, p)?;
    Ok(StepResult { state: *state, stress, diagnostics: Diagnostics { phi0: 1.0, phi: 1.0, ..Default::default() } })
}

pub(crate) fn check_time_step(dt: f64) -> Result<(), DomainError> {
    if dt < 0.0 || dt.is_nan() {
        return Err(DomainError::NegativeTimeStep(dt));
    }
    Ok(())
}

pub(crate) fn check_manifold(ci: &SymTensor3) -> Result<(), DomainError> {
    if !ci.is_finite() {
        return Err(DomainError::NonFinite("internal state"));
    }
    let det = ci.det();
    if (det - 1.0).abs() > 1e-10 {
        return Err(DomainError::InvalidParameter(format!(
            "internal state must be unimodular (det = {det})"
        )));
    }
    if !ci.is_positive_definite() {
        return Err(DomainError::NotPositiveDefinite { min_eigenvalue: ci.min_eigenvalue() });
    }
    Ok(())
}

/// Mandel-like flow direction `f(Ci) Ci · η`, symmetric:
/// `c10 C̄ - c01 Ci C̄⁻¹ Ci - tr(c10 C̄ Ci⁻¹ - c01 Ci C̄⁻¹)/3 · Ci`.
pub(crate) fn flow_times_ci(
    c_bar: &SymTensor3,
    c_bar_inv: &SymTensor3,
    ci: &SymTensor3,
    p: &MaterialParams,
) -> Result<SymTensor3, DomainError> {
    let ci_inv = ci.inverse()?;
    let tr = p.c10 * c_bar.ddot(&ci_inv) - p.c01 * ci.ddot(c_bar_inv);
    Ok(p.c10 * *c_bar - p.c01 * c_bar_inv.sandwich(ci) - (tr / 3.0) * *ci)
}
