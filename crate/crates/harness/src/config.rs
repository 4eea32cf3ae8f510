use std::path::PathBuf;

use maxwell_core::composite::CompositeModel;
use maxwell_core::constitutive::{MaterialParams, Method};

use crate::error::{HarnessError, Result};
use crate::loading::LoadingProgram;
use crate::run::Formulation;

/// Settings shared by every study.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dt: f64,
    pub params: MaterialParams,
    /// Restricts studies that sweep steppers to a single one.
    pub method: Option<Method>,
    pub formulation: Formulation,
    /// Program for the single-point studies; uniaxial runs build their own.
    pub program: LoadingProgram,
    /// Model for the uniaxial study.
    pub model: CompositeModel,
    /// Total IFEBM substeps of the reference solution over the program.
    pub reference_substeps: usize,
    /// Absolute difference step for tangents, default per strain.
    pub fd_step: Option<f64>,
    pub seed: u64,
    /// Directory for CSV output; nothing is written when absent.
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dt: 0.1,
            params: MaterialParams { c10: 1.0, c01: 1.0, eta: 1.0 },
            method: None,
            formulation: Formulation::Lagrangian,
            program: LoadingProgram::Nonproportional,
            model: CompositeModel::tmj_cartilage(),
            reference_substeps: 100_000,
            fd_step: None,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    /// The reference must be at least 100 times finer than the coarse run.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        self.params.validate()?;
        let (start, end) = self.program.domain();
        if self.dt > end - start {
            return bad(format!("dt = {} exceeds the loading interval [{start}, {end}]", self.dt));
        }
        let coarse = self.program.steps_for(self.dt);
        if self.reference_substeps < 100 * coarse {
            return bad(format!(
                "reference substeps {} must be at least 100 x {coarse} coarse steps",
                self.reference_substeps
            ));
        }
        if let Some(h) = self.fd_step {
            if !(h > 0.0 && h.is_finite()) {
                return bad(format!("fd step must be positive, got {h}"));
            }
        }
        Ok(())
    }

    /// Steppers selected for multi-method studies.
    pub fn methods(&self) -> Vec<Method> {
        self.method.map_or_else(|| Method::ALL.to_vec(), |m| vec![m])
    }
}
