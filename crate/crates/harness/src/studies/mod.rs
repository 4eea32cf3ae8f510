pub mod convergence;
pub mod nonprop;
pub mod robustness;
pub mod tangent;
pub mod uniaxial;
