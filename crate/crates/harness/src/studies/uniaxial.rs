//! Cyclic uniaxial tension-compression of the multi-branch model.

use rayon::prelude::*;

use maxwell_core::composite::{axial_engineering_stress, equilibrium_stress, CompositeModel};
use maxwell_core::constitutive::{ifebm_step_eulerian, stress_2pk, EulerianState, Method, MANIFOLD_TOLERANCE};
use maxwell_core::tensor3::SymTensor3;

use crate::config::RunConfig;
use crate::error::Result;
use crate::loading::LoadingProgram;
use crate::report::{fmt_f64, write_csv, Check, Report};
use crate::run::Formulation;

pub const FREQUENCIES: [f64; 3] = [10.0, 1.0, 0.1];
pub const AMPLITUDES: [f64; 2] = [0.2, 0.4];
pub const CYCLES: u32 = 2;
pub const COARSE_STEPS_PER_CYCLE: usize = 50;
pub const FINE_STEPS_PER_CYCLE: usize = 5000;
/// Largest coarse-to-fine gap as a fraction of the peak fine stress.
pub const COARSE_GAP_LIMIT: f64 = 0.03;
/// Relative tolerance on the loop area sign, for trapezoidal round-off.
pub const LOOP_AREA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct UniaxialCurve {
    pub times: Vec<f64>,
    pub strain: Vec<f64>,
    pub stress: Vec<f64>,
    /// Largest `|det Ci - 1|` over all branches and steps.
    pub manifold_drift: f64,
}

impl UniaxialCurve {
    /// `∮ σ dε` for each full cycle by the trapezoidal rule.
    pub fn loop_areas(&self, steps_per_cycle: usize) -> Vec<f64> {
        let n = (self.times.len() - 1) / steps_per_cycle;
        (0..n)
            .map(|k| {
                let range = k * steps_per_cycle..(k + 1) * steps_per_cycle;
                range
                    .map(|i| 0.5 * (self.stress[i] + self.stress[i + 1]) * (self.strain[i + 1] - self.strain[i]))
                    .sum()
            })
            .collect()
    }

    pub fn peak(&self) -> f64 {
        self.stress.iter().fold(0.0, |m: f64, s| m.max(s.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniaxialCell {
    pub frequency: f64,
    pub amplitude: f64,
    pub coarse: UniaxialCurve,
    pub fine: UniaxialCurve,
    /// Coarse curve recomputed on the other formulation, IFEBM only.
    pub dual: Option<UniaxialCurve>,
}

impl UniaxialCell {
    /// `max |σ_coarse - σ_fine|` at the coarse times over the peak fine stress.
    pub fn relative_gap(&self) -> f64 {
        let stride = FINE_STEPS_PER_CYCLE / COARSE_STEPS_PER_CYCLE;
        let gap = self
            .coarse
            .stress
            .iter()
            .zip(self.fine.stress.iter().step_by(stride))
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
        let peak = self.fine.peak();
        if peak == 0.0 {
            gap
        } else {
            gap / peak
        }
    }

    pub fn dual_mismatch(&self) -> Option<f64> {
        let dual = self.dual.as_ref()?;
        let peak = self.coarse.peak();
        let gap = self.coarse.stress.iter().zip(&dual.stress).fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
        Some(if peak == 0.0 { gap } else { gap / peak })
    }
}

/// Runs the model from its natural state on `program`.
pub fn simulate(
    model: &CompositeModel,
    program: &LoadingProgram,
    steps: usize,
    method: Method,
    formulation: Formulation,
) -> Result<UniaxialCurve> {
    let times = program.grid(steps);
    let strain: Vec<f64> = times.iter().map(|t| program.strain(*t).unwrap_or(0.0)).collect();
    let mut stress = Vec::with_capacity(times.len());
    let mut drift: f64 = 0.0;
    match formulation {
        Formulation::Lagrangian => {
            let mut model = model.clone();
            model.reset();
            for (k, t) in times.iter().enumerate() {
                let f = program.deformation(*t)?;
                let c = SymTensor3::IDENTITY.pull(&f);
                let s = if k == 0 { model.stress(&c)? } else { model.step(&c, t - times[k - 1], method)? };
                drift = model.states.iter().fold(drift, |m, s| m.max((s.ci.det() - 1.0).abs()));
                stress.push(axial_engineering_stress(&s.push(&f), &f, model.equilibrium.bulk)?);
            }
        }
        Formulation::Eulerian => {
            let mut states = vec![EulerianState::natural(); model.branches.len()];
            for (k, t) in times.iter().enumerate() {
                let f = program.deformation(*t)?;
                let c = SymTensor3::IDENTITY.pull(&f);
                let mut kirchhoff = equilibrium_stress(&c, &model.equilibrium)?.push(&f);
                if k == 0 {
                    for (p, s) in model.branches.iter().zip(&states) {
                        let lagrangian = s.to_lagrangian()?;
                        kirchhoff += stress_2pk(&c, &lagrangian.ci, p)?.push(&f);
                    }
                } else {
                    for (p, s) in model.branches.iter().zip(states.iter_mut()) {
                        let r = ifebm_step_eulerian(&f, s, t - times[k - 1], p)?;
                        *s = r.state;
                        kirchhoff += r.stress;
                        drift = drift.max((s.to_lagrangian()?.ci.det() - 1.0).abs());
                    }
                }
                stress.push(axial_engineering_stress(&kirchhoff, &f, model.equilibrium.bulk)?);
            }
        }
    }
    Ok(UniaxialCurve { times, strain, stress, manifold_drift: drift })
}

fn cell(cfg: &RunConfig, method: Method, frequency: f64, amplitude: f64) -> Result<UniaxialCell> {
    let program = LoadingProgram::Uniaxial { amplitude, frequency, cycles: CYCLES };
    let total = |per_cycle: usize| per_cycle * CYCLES as usize;
    let coarse = simulate(&cfg.model, &program, total(COARSE_STEPS_PER_CYCLE), method, Formulation::Lagrangian)?;
    let fine = simulate(&cfg.model, &program, total(FINE_STEPS_PER_CYCLE), method, Formulation::Lagrangian)?;
    let dual = if method == Method::Ifebm {
        Some(simulate(&cfg.model, &program, total(COARSE_STEPS_PER_CYCLE), method, Formulation::Eulerian)?)
    } else {
        None
    };
    Ok(UniaxialCell { frequency, amplitude, coarse, fine, dual })
}

pub fn uniaxial_study(cfg: &RunConfig) -> Result<Vec<UniaxialCell>> {
    let method = cfg.method.unwrap_or(Method::Ifebm);
    let grid: Vec<(f64, f64)> =
        FREQUENCIES.iter().flat_map(|f| AMPLITUDES.iter().map(move |a| (*f, *a))).collect();
    grid.par_iter().map(|&(f, a)| cell(cfg, method, f, a)).collect()
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let cells = uniaxial_study(cfg)?;
    let mut report = Report::new("uniaxial");
    for c in &cells {
        let tag = format!("f{}_a{}", c.frequency, c.amplitude);
        report.metric(format!("peak_stress_{tag}"), c.fine.peak());
        report.check(Check::below(format!("coarse_fine_gap_{tag}"), c.relative_gap(), COARSE_GAP_LIMIT));
        for (name, curve, per_cycle) in
            [("coarse", &c.coarse, COARSE_STEPS_PER_CYCLE), ("fine", &c.fine, FINE_STEPS_PER_CYCLE)]
        {
            let floor = -LOOP_AREA_TOLERANCE * curve.peak() * c.amplitude;
            for (k, area) in curve.loop_areas(per_cycle).iter().enumerate() {
                report.metric(format!("loop_area_{name}_{tag}_cycle{}", k + 1), *area);
                report.check(Check::above(format!("loop_area_{name}_{tag}_cycle{}", k + 1), *area, floor));
            }
            report.check(Check::below(format!("det_drift_{name}_{tag}"), curve.manifold_drift, MANIFOLD_TOLERANCE));
        }
        if let Some(m) = c.dual_mismatch() {
            report.check(Check::below(format!("lagrangian_eulerian_mismatch_{tag}"), m, 1e-10));
        }
    }
    if let Some(dir) = &cfg.out {
        for c in &cells {
            for (name, curve) in [("coarse", &c.coarse), ("fine", &c.fine)] {
                let rows = (0..curve.times.len())
                    .map(|i| vec![fmt_f64(curve.times[i]), fmt_f64(curve.strain[i]), fmt_f64(curve.stress[i])]);
                let file = format!("uniaxial_f{}_a{}_{name}.csv", c.frequency, c.amplitude);
                report.files.push(write_csv(dir, &file, &["t", "strain", "stress"], rows)?);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_amplitude_gives_zero_stress() {
        let program = LoadingProgram::Uniaxial { amplitude: 0.0, frequency: 1.0, cycles: 1 };
        let model = CompositeModel::tmj_cartilage();
        let curve = simulate(&model, &program, 50, Method::Ifebm, Formulation::Lagrangian).unwrap();
        assert!(curve.stress.iter().all(|s| s.abs() < 1e-14));
    }

    #[test]
    fn loop_area_of_a_line_vanishes() {
        let curve = UniaxialCurve {
            times: vec![0.0, 1.0, 2.0, 3.0, 4.0],
            strain: vec![0.0, 1.0, 0.0, -1.0, 0.0],
            stress: vec![0.0, 2.0, 0.0, -2.0, 0.0],
            manifold_drift: 0.0,
        };
        assert_eq!(curve.loop_areas(4), vec![0.0]);
        // viscous stress leads the strain by a quarter period
        let viscous = UniaxialCurve { stress: vec![1.0, 1.0, -1.0, -1.0, 1.0], ..curve };
        assert_eq!(viscous.loop_areas(4), vec![2.0]);
    }

    #[test]
    fn eulerian_composite_matches_lagrangian() {
        let program = LoadingProgram::Uniaxial { amplitude: 0.3, frequency: 1.0, cycles: 1 };
        let model = CompositeModel::tmj_cartilage();
        let a = simulate(&model, &program, 40, Method::Ifebm, Formulation::Lagrangian).unwrap();
        let b = simulate(&model, &program, 40, Method::Ifebm, Formulation::Eulerian).unwrap();
        for (x, y) in a.stress.iter().zip(&b.stress) {
            assert!((x - y).abs() < 1e-12 * a.peak());
        }
    }
}
