//! Finite-strain Maxwell fluid with Mooney-Rivlin elasticity and its
//! iteration-free implicit time integration.
//!
//! * [`tensor3`]: fixed-size 3×3 tensor algebra.
//! * [`constitutive`]: single-branch stress and the time steppers.
//! * [`tangent`]: finite-difference consistent tangents and their symmetry.
//! * [`composite`]: equilibrium branch plus parallel Maxwell branches.
//! * [`sampling`]: seeded random tensors.
//!
//! ```
//! use maxwell_core::constitutive::{LagrangianState, MaterialParams, Method};
//! use maxwell_core::tensor3::SymTensor3;
//!
//! # fn main() -> maxwell_core::Result<()> {
//! let p = MaterialParams::new(1.0, 1.0, 1.0)?;
//! let c = SymTensor3::from_diag([1.44, 0.83, 0.83]);
//! let step = Method::Ifebm.step(&c, &LagrangianState::natural(), 0.1, &p)?;
//! assert!((step.state.ci.det() - 1.0).abs() < 1e-12);
//! # Ok(())
//! # }
//! ```

pub mod composite;
pub mod constitutive;
pub mod error;
pub mod sampling;
pub mod tangent;
pub mod tensor3;

pub use error::{ConvergenceError, DomainError, Error, Result};
