//! Observed convergence order on dyadically refined steps.

use maxwell_core::constitutive::{Method, RICHARDSON_TOLERANCE};

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{fmt_f64, write_csv, Check, Report};
use crate::run::{integrate, max, pointwise_gap, reference, Formulation};

/// Number of step sizes `dt, dt/2, dt/4, dt/8`.
pub const LEVELS: usize = 4;
pub const ORDER_RANGE: (f64, f64) = (0.85, 1.15);
/// Bounds on `E(dt) / E(dt/2)` for the coarsest pair.
pub const RATIO_RANGE: (f64, f64) = (1.7, 2.3);
/// Errors below this fraction of the peak reference stress are round-off.
pub const NOISE_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub dts: Vec<f64>,
    /// Time-max error per level.
    pub errors: Vec<(Method, Vec<f64>)>,
    pub reference_gap: f64,
    /// Peak Frobenius norm of the reference stress.
    pub stress_scale: f64,
}

impl ConvergenceStudy {
    /// `log2(E(dt_k) / E(dt_(k+1)))`, NaN where both errors are at the noise floor.
    pub fn orders(&self, m: Method) -> Option<Vec<f64>> {
        let (_, e) = self.errors.iter().find(|(k, _)| *k == m)?;
        let floor = NOISE_FLOOR * self.stress_scale;
        Some(e.windows(2).map(|w| if w[0] <= floor || w[1] <= floor { f64::NAN } else { (w[0] / w[1]).log2() }).collect())
    }

    pub fn indeterminate(&self, m: Method) -> bool {
        self.orders(m).is_some_and(|o| o.iter().any(|x| x.is_nan()))
    }

    pub fn coarse_ratio(&self, m: Method) -> Option<f64> {
        let (_, e) = self.errors.iter().find(|(k, _)| *k == m)?;
        Some(e[0] / e[1])
    }
}

pub fn convergence_study(cfg: &RunConfig) -> Result<ConvergenceStudy> {
    cfg.validate()?;
    let coarse = cfg.program.steps_for(cfg.dt);
    let finest = coarse << (LEVELS - 1);
    let grid = cfg.program.grid(finest);
    let reference = reference(&cfg.program, &cfg.params, &grid, cfg.reference_substeps)?;
    let stress_scale = reference.kirchhoff.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let (start, end) = cfg.program.domain();
    let dts = (0..LEVELS).map(|k| (end - start) / (coarse << k) as f64).collect();
    let mut errors = Vec::new();
    for m in cfg.methods() {
        let mut per_level = Vec::with_capacity(LEVELS);
        for k in 0..LEVELS {
            let steps = coarse << k;
            let stride = finest / steps;
            let run = integrate(&cfg.program, m, Formulation::Lagrangian, &cfg.params, steps)?;
            let at_grid: Vec<_> = reference.kirchhoff.iter().step_by(stride).copied().collect();
            per_level.push(max(&pointwise_gap(&run.kirchhoff, &at_grid)));
        }
        errors.push((m, per_level));
    }
    Ok(ConvergenceStudy { dts, errors, reference_gap: reference.richardson_gap, stress_scale })
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let study = convergence_study(cfg)?;
    let mut report = Report::new("convergence");
    report.metric("reference_richardson_gap", study.reference_gap);
    if study.reference_gap >= RICHARDSON_TOLERANCE {
        report.warnings.push(format!(
            "reference Richardson gap {:.3e} is above {RICHARDSON_TOLERANCE:e}",
            study.reference_gap
        ));
    }
    for (m, _) in &study.errors {
        let orders = study.orders(*m).expect("method ran");
        if study.indeterminate(*m) {
            report.warnings.push(format!("{m}: errors at round-off level, order indeterminate"));
            continue;
        }
        for (k, p) in orders.iter().enumerate() {
            report.check(Check::within(format!("order_{m}_level{k}"), *p, ORDER_RANGE.0, ORDER_RANGE.1));
        }
        let ratio = study.coarse_ratio(*m).expect("method ran");
        report.check(Check::within(format!("error_ratio_{m}"), ratio, RATIO_RANGE.0, RATIO_RANGE.1));
    }
    if let Some(dir) = &cfg.out {
        let mut header = vec!["dt".to_string()];
        header.extend(study.errors.iter().map(|(m, _)| format!("error_{m}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = study.dts.iter().enumerate().map(|(k, dt)| {
            std::iter::once(fmt_f64(*dt)).chain(study.errors.iter().map(|(_, e)| fmt_f64(e[k]))).collect::<Vec<_>>()
        });
        report.files.push(write_csv(dir, "convergence.csv", &header, rows)?);
    }
    Ok(report)
}
