//! Symmetry deviation of the consistent tangent over a grid of steps and viscosities.

use rayon::prelude::*;

use maxwell_core::constitutive::{LagrangianState, MaterialParams, Method};
use maxwell_core::tangent::{consistent_tangent, default_fd_step, symmetry_deviation};
use maxwell_core::tensor3::SymTensor3;

use crate::config::RunConfig;
use crate::error::Result;
use crate::loading::LoadingProgram;
use crate::report::{fmt_f64, write_csv, Check, Report};

pub const SWEEP_DTS: [f64; 2] = [0.1, 0.05];
pub const SWEEP_ETAS: [f64; 6] = [100.0, 10.0, 1.0, 0.1, 0.01, 0.001];
/// Deviations below this are printed as `<1e-9`.
pub const REPORT_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentCell {
    pub method: Method,
    pub dt: f64,
    pub eta: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentSweep {
    pub cells: Vec<TangentCell>,
}

impl TangentSweep {
    pub fn get(&self, method: Method, dt: f64, eta: f64) -> Option<f64> {
        self.cells.iter().find(|c| c.method == method && c.dt == dt && c.eta == eta).map(|c| c.deviation)
    }
}

/// Deviation over the tangents taken at every step of a run with uniform `dt`.
///
/// `fd_step` overrides the default difference step.
pub fn deviation_along(
    program: &LoadingProgram,
    method: Method,
    p: &MaterialParams,
    dt: f64,
    fd_step: Option<f64>,
) -> maxwell_core::Result<f64> {
    let times = program.grid(program.steps_for(dt));
    let mut state = LagrangianState::natural();
    let mut history = Vec::with_capacity(times.len());
    for w in times.windows(2) {
        let c = SymTensor3::IDENTITY.pull(&program.deformation(w[1])?);
        let h = fd_step.unwrap_or_else(|| default_fd_step(&c));
        history.push(consistent_tangent(method, &c, &state, w[1] - w[0], p, h)?);
        state = method.step(&c, &state, w[1] - w[0], p)?.state;
    }
    Ok(symmetry_deviation(&history))
}

pub fn tangent_sweep(cfg: &RunConfig) -> Result<TangentSweep> {
    let methods = cfg.method.map_or_else(|| vec![Method::Ifebm, Method::TwoIter], |m| vec![m]);
    let grid: Vec<(Method, f64, f64)> = methods
        .iter()
        .flat_map(|m| SWEEP_DTS.iter().flat_map(move |dt| SWEEP_ETAS.iter().map(move |eta| (*m, *dt, *eta))))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(method, dt, eta)| {
            let p = MaterialParams { eta, ..cfg.params };
            let deviation = deviation_along(&cfg.program, method, &p, dt, cfg.fd_step)?;
            Ok(TangentCell { method, dt, eta, deviation })
        })
        .collect::<maxwell_core::Result<Vec<_>>>()?;
    Ok(TangentSweep { cells })
}

fn table_entry(x: f64) -> String {
    if x < REPORT_FLOOR {
        format!("<{REPORT_FLOOR:e}")
    } else {
        fmt_f64(x)
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let sweep = tangent_sweep(cfg)?;
    let mut report = Report::new("tangent-sweep");
    for c in &sweep.cells {
        report.metric(format!("deviation_{}_dt{}_eta{}", c.method, c.dt, c.eta), c.deviation);
    }
    // the reference deviations hold for c10 = c01 = 1 on the built-in program
    let reference_setting = cfg.params.c10 == 1.0
        && cfg.params.c01 == 1.0
        && cfg.program == LoadingProgram::Nonproportional
        && cfg.fd_step.is_none();
    if reference_setting {
        if let (Some(coarse), Some(fine)) = (sweep.get(Method::Ifebm, 0.1, 1.0), sweep.get(Method::Ifebm, 0.05, 1.0)) {
            report.check(Check::within("ifebm_dt0.1_eta1", coarse, 6e-5, 5.4e-4));
            report.check(Check::within("ifebm_dt0.05_eta1", fine, 1e-5, 9e-5));
            report.check(Check::above("ifebm_eta1_halving_factor", coarse / fine, 3.0));
        }
        for c in sweep.cells.iter().filter(|c| c.method == Method::TwoIter && !(c.dt == 0.1 && c.eta == 0.1)) {
            report.check(Check::below(format!("2iebm_dt{}_eta{}", c.dt, c.eta), c.deviation, 1e-8));
        }
    } else {
        report.warnings.push("reference values apply to c10 = c01 = 1 on the built-in program only; no checks run".into());
    }
    if let Some(dir) = &cfg.out {
        let mut header = vec!["dt".to_string()];
        header.extend(SWEEP_ETAS.iter().map(|eta| format!("eta={eta}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let methods: Vec<Method> = sweep.cells.iter().map(|c| c.method).fold(Vec::new(), |mut v, m| {
            if !v.contains(&m) {
                v.push(m);
            }
            v
        });
        for m in methods {
            let rows = SWEEP_DTS.iter().map(|dt| {
                std::iter::once(dt.to_string())
                    .chain(SWEEP_ETAS.iter().map(|eta| table_entry(sweep.get(m, *dt, *eta).expect("cell computed"))))
                    .collect::<Vec<_>>()
            });
            report.files.push(write_csv(dir, &format!("tangent_{m}.csv"), &header, rows)?);
        }
    }
    Ok(report)
}
