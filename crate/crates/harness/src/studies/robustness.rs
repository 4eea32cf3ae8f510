//! Iteration effort of the Newton-based steppers at large steps and the
//! round-off hazard of the subtractive quadratic root.

use rand::Rng;

use maxwell_core::constitutive::{quad_root_x, solve_phi, subtractive_root_x, Method, MANIFOLD_TOLERANCE};
use maxwell_core::sampling;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{fmt_f64, write_csv, Check, Report};
use crate::run::{integrate, Formulation};

pub const LARGE_STEPS: [f64; 2] = [0.5, 1.0];
pub const ROOT_EPS: f64 = 1e-12;
pub const ROOT_SAMPLES: usize = 200;

/// Work done by one stepper over a run, or the reason it stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct Effort {
    pub method: Method,
    pub dt: f64,
    pub iterations: u64,
    pub substeps: u64,
    pub divergences: u64,
    pub manifold_drift: f64,
    pub failure: Option<String>,
}

impl Effort {
    /// Bisection was needed or the run gave up.
    pub fn struggled(&self) -> bool {
        self.substeps > 0 || self.divergences > 0 || self.failure.is_some()
    }
}

/// Largest deviations over the random inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootComparison {
    /// `max ‖X_subtractive - X_stable‖`
    pub subtractive_vs_stable: f64,
    /// `max ‖X_stable(ε) - X(0)‖`
    pub stable_vs_limit: f64,
}

pub fn effort(cfg: &RunConfig, method: Method, dt: f64) -> Effort {
    let steps = cfg.program.steps_for(dt);
    match integrate(&cfg.program, method, Formulation::Lagrangian, &cfg.params, steps) {
        Ok(t) => Effort {
            method,
            dt,
            iterations: t.total(|d| d.iterations),
            substeps: t.total(|d| d.substeps),
            divergences: t.total(|d| d.divergences),
            manifold_drift: t.manifold_drift(),
            failure: None,
        },
        Err(e) => Effort {
            method,
            dt,
            iterations: 0,
            substeps: 0,
            divergences: 0,
            manifold_drift: 0.0,
            failure: Some(e.to_string()),
        },
    }
}

/// Compares both root forms on `A = s U` with `U` unimodular and `s` log-uniform in `[1, 1000]`.
pub fn compare_roots(seed: u64) -> maxwell_core::Result<RootComparison> {
    let mut rng = sampling::rng(seed);
    let mut out = RootComparison { subtractive_vs_stable: 0.0, stable_vs_limit: 0.0 };
    for _ in 0..ROOT_SAMPLES {
        let scale = 10f64.powf(rng.random_range(0.0..3.0));
        let a = sampling::unimodular_spd(&mut rng, 4.0) * scale;
        let (phi0, phi) = solve_phi(&a, ROOT_EPS)?;
        let stable = quad_root_x(&a, phi, ROOT_EPS)?;
        let subtractive = subtractive_root_x(&a, phi, ROOT_EPS)?;
        let limit = quad_root_x(&a, phi0, 0.0)?;
        out.subtractive_vs_stable = out.subtractive_vs_stable.max((subtractive - stable).norm());
        out.stable_vs_limit = out.stable_vs_limit.max((stable - limit).norm());
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("robustness");
    let mut efforts = Vec::new();
    for dt in LARGE_STEPS {
        for m in Method::ALL {
            efforts.push(effort(cfg, m, dt));
        }
    }
    for e in &efforts {
        let tag = format!("{}_dt{}", e.method, e.dt);
        report.metric(format!("iterations_{tag}"), e.iterations as f64);
        report.metric(format!("substeps_{tag}"), e.substeps as f64);
        report.metric(format!("divergences_{tag}"), e.divergences as f64);
        if let Some(f) = &e.failure {
            report.warnings.push(format!("{tag}: {f}"));
        } else {
            report.check(Check::below(format!("det_drift_{tag}"), e.manifold_drift, MANIFOLD_TOLERANCE));
        }
        match e.method {
            Method::Ifebm | Method::TwoIter => {
                report.check(Check::below(format!("substeps_{tag}"), e.substeps as f64 + f64::from(u8::from(e.failure.is_some())), 0.5));
                if e.method == Method::Ifebm {
                    report.check(Check::below(format!("iterations_{tag}"), e.iterations as f64, 0.5));
                }
            }
            Method::Mebm | Method::Em if e.dt == 1.0 => {
                report.check(Check::above(format!("needs_bisection_{tag}"), f64::from(u8::from(e.struggled())), 0.5));
            }
            _ => {}
        }
    }
    let roots = compare_roots(cfg.seed)?;
    report.metric("subtractive_vs_stable", roots.subtractive_vs_stable);
    report.metric("stable_vs_limit", roots.stable_vs_limit);
    report.check(Check::above("subtractive_vs_stable", roots.subtractive_vs_stable, 1e-4));
    report.check(Check::below("stable_vs_limit", roots.stable_vs_limit, 1e-10));
    if let Some(dir) = &cfg.out {
        let rows = efforts.iter().map(|e| {
            vec![
                e.method.to_string(),
                fmt_f64(e.dt),
                e.iterations.to_string(),
                e.substeps.to_string(),
                e.divergences.to_string(),
                e.failure.clone().unwrap_or_default(),
            ]
        });
        let header = ["method", "dt", "iterations", "substeps", "divergences", "failure"];
        report.files.push(write_csv(dir, "robustness.csv", &header, rows)?);
    }
    Ok(report)
}
