//! Strain-driven deformation histories.

use serde::Deserialize;

use maxwell_core::composite::uniaxial_deformation;
use maxwell_core::tensor3::Tensor3;
use maxwell_core::DomainError;

/// End time of the non-proportional program.
pub const NONPROPORTIONAL_END: f64 = 3.0;

/// The four corners of the non-proportional program, visited at t = 0, 1, 2, 3.
pub fn nonproportional_keyframes() -> [Tensor3; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [
        Tensor3::IDENTITY,
        Tensor3::from_diag([2.0, r, r]),
        Tensor3([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
        Tensor3::from_diag([r, 2.0, r]),
    ]
}

/// Piecewise-linear deformation path through user-supplied keyframes.
#[derive(Debug, Clone, PartialEq)]
pub struct Keyframes {
    pub times: Vec<f64>,
    pub frames: Vec<Tensor3>,
    /// Project every interpolated `F` onto `det F = 1`.
    pub isochoric: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KeyframeFile {
    times: Vec<f64>,
    frames: Vec<[[f64; 3]; 3]>,
    #[serde(default = "default_isochoric")]
    isochoric: bool,
}

fn default_isochoric() -> bool {
    true
}

impl Keyframes {
    pub fn new(times: Vec<f64>, frames: Vec<Tensor3>, isochoric: bool) -> Result<Self, DomainError> {
        let bad = |msg: String| Err(DomainError::InvalidParameter(msg));
        if times.len() != frames.len() {
            return bad(format!("{} times but {} frames", times.len(), frames.len()));
        }
        if times.len() < 2 {
            return bad("at least two keyframes are needed".into());
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("keyframe times must be finite and strictly increasing".into());
        }
        for (t, f) in times.iter().zip(&frames) {
            if !f.is_finite() || !(f.det() > 0.0) {
                return bad(format!("keyframe at t = {t} must be finite with positive determinant"));
            }
        }
        Ok(Keyframes { times, frames, isochoric })
    }

    /// Parses `{"times": [...], "frames": [[[..], [..], [..]], ...], "isochoric": true}`,
    /// frames given row by row.
    pub fn from_json_str(s: &str) -> Result<Self, String> {
        let file: KeyframeFile = serde_json::from_str(s).map_err(|e| e.to_string())?;
        Self::new(file.times, file.frames.into_iter().map(Tensor3).collect(), file.isochoric)
            .map_err(|e| e.to_string())
    }

    fn interpolate(&self, t: f64) -> Result<Tensor3, DomainError> {
        let (start, end) = (self.times[0], *self.times.last().expect("non-empty"));
        if !(t >= start && t <= end) {
            return Err(DomainError::OutsideLoadingDomain { t, start, end });
        }
        let k = self.times.partition_point(|&tk| tk < t).clamp(1, self.times.len() - 1);
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        let f = self.frames[k - 1] * (1.0 - w) + self.frames[k] * w;
        if self.isochoric {
            f.unimodular()
        } else if f.det() > 0.0 {
            Ok(f)
        } else {
            Err(DomainError::NonPositiveDeterminant(f.det()))
        }
    }
}

/// A deformation history `F(t)` on a closed time interval.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadingProgram {
    /// Piecewise-linear path `I → F₂ → F₃ → F₄` on `[0, 3]`, projected to unit
    /// determinant, with abrupt changes of direction at t = 1 and t = 2.
    Nonproportional,
    /// Isochoric uniaxial tension-compression with a triangular strain
    /// signal: `ε` rises from 0 to `amplitude` in the first quarter period,
    /// falls to `-amplitude` at three quarters and returns to 0, so that
    /// `|dε/dt| = 4 · amplitude · frequency`.
    Uniaxial { amplitude: f64, frequency: f64, cycles: u32 },
    Keyframes(Keyframes),
}

impl LoadingProgram {
    pub fn domain(&self) -> (f64, f64) {
        match self {
            LoadingProgram::Nonproportional => (0.0, NONPROPORTIONAL_END),
            LoadingProgram::Uniaxial { frequency, cycles, .. } => (0.0, *cycles as f64 / frequency),
            LoadingProgram::Keyframes(k) => (k.times[0], *k.times.last().expect("non-empty")),
        }
    }

    /// Engineering strain of the uniaxial program, `None` for the others.
    pub fn strain(&self, t: f64) -> Option<f64> {
        match *self {
            LoadingProgram::Uniaxial { amplitude, frequency, .. } => {
                let phase = (t * frequency).fract() * 4.0;
                Some(amplitude * if phase <= 1.0 {
                    phase
                } else if phase <= 3.0 {
                    2.0 - phase
                } else {
                    phase - 4.0
                })
            }
            _ => None,
        }
    }

    pub fn deformation(&self, t: f64) -> Result<Tensor3, DomainError> {
        let (start, end) = self.domain();
        if !(t >= start && t <= end) {
            return Err(DomainError::OutsideLoadingDomain { t, start, end });
        }
        match self {
            LoadingProgram::Nonproportional => {
                let frames = nonproportional_keyframes();
                let k = (t.ceil() as usize).clamp(1, 3);
                let w = t - (k - 1) as f64;
                (frames[k - 1] * (1.0 - w) + frames[k] * w).unimodular()
            }
            LoadingProgram::Uniaxial { .. } => uniaxial_deformation(self.strain(t).expect("uniaxial")),
            LoadingProgram::Keyframes(k) => k.interpolate(t),
        }
    }

    /// Uniform grid with `steps` intervals over the whole domain.
    pub fn grid(&self, steps: usize) -> Vec<f64> {
        let (start, end) = self.domain();
        (0..=steps)
            .map(|k| if k == steps { end } else { start + (end - start) * k as f64 / steps as f64 })
            .collect()
    }

    /// Number of intervals of length closest to `dt`.
    pub fn steps_for(&self, dt: f64) -> usize {
        let (start, end) = self.domain();
        ((end - start) / dt).round().max(1.0) as usize
    }
}
