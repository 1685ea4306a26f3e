//! Grid refinement study on the vortex preset.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sohr::{run, Boundary, FieldState, GridSpec, HydroParams, RunSpec, TimeStep};

use super::initial::Preset;
use super::norms::{l1_relative_error, Component};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSpec {
    pub lx: f64,
    pub ly: f64,
    pub base_dx: f64,
    /// Number of grids, each halving the spacing of the previous one.
    pub levels: usize,
    pub dt: f64,
    pub t_final: f64,
    pub params: HydroParams,
}

impl ConvergenceSpec {
    /// `Δx = 0.25 → 0.03125`, `Δt = 0.001`, `T = 1` on the 10 × 10 box.
    pub fn reference() -> Result<Self> {
        Ok(Self {
            lx: 10.0,
            ly: 10.0,
            base_dx: 0.25,
            levels: 4,
            dt: 0.001,
            t_final: 1.0,
            params: HydroParams::reference()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorLevel {
    pub level: usize,
    pub dx: f64,
    pub err_rho: f64,
    pub err_cos: f64,
    /// `log2(e_{k-1} / e_k)`; absent on the coarsest level.
    pub order_rho: Option<f64>,
    pub order_cos: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub levels: Vec<ErrorLevel>,
    /// Wall-clock seconds of each grid's run, coarsest first.
    pub runtimes: Vec<f64>,
}

pub const ERROR_REPORT_HEADER: &str = "level,dx,err_rho,err_cos,order_rho,order_cos";

impl ErrorReport {
    pub fn from_errors(dx: &[f64], err_rho: &[f64], err_cos: &[f64], runtimes: Vec<f64>) -> Self {
        let order = |e: &[f64], k: usize| (k > 0).then(|| (e[k - 1] / e[k]).log2());
        let levels = (0..err_rho.len())
            .map(|k| ErrorLevel {
                level: k,
                dx: dx[k],
                err_rho: err_rho[k],
                err_cos: err_cos[k],
                order_rho: order(err_rho, k),
                order_cos: order(err_cos, k),
            })
            .collect();
        Self { levels, runtimes }
    }

    pub fn to_csv(&self) -> String {
        let opt = |o: Option<f64>| o.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let mut s = String::from(ERROR_REPORT_HEADER);
        s.push('\n');
        for l in &self.levels {
            s.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{},{}\n",
                l.level,
                l.dx,
                l.err_rho,
                l.err_cos,
                opt(l.order_rho),
                opt(l.order_cos)
            ));
        }
        s
    }

    pub fn orders(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.levels
            .iter()
            .filter_map(|l| Some((l.order_rho?, l.order_cos?)))
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.levels
            .windows(2)
            .all(|w| w[1].err_rho < w[0].err_rho && w[1].err_cos < w[0].err_cos)
    }
}

/// Runs the vortex preset with fixed boundary data on every grid and
/// compares each grid with the 2×2 restriction of the next finer one.
pub fn convergence_study(spec: &ConvergenceSpec) -> Result<ErrorReport> {
    if spec.levels < 3 {
        return Err(Error::Config(format!(
            "a convergence study needs at least 3 grids, got {}",
            spec.levels
        )));
    }
    let grids = (0..spec.levels)
        .map(|k| {
            let dx = spec.base_dx / (1u64 << k) as f64;
            GridSpec::with_spacing(spec.lx, spec.ly, dx, dx, Boundary::FixedDirichlet)
        })
        .collect::<Result<Vec<_>>>()?;
    let runs: Vec<Result<(FieldState, f64)>> = grids
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let start = Instant::now();
            let (initial, _) = Preset::Vortex.field(*g);
            let rs = RunSpec::new(spec.params, spec.t_final, TimeStep::Fixed(spec.dt));
            let out = run(&initial, &rs).map_err(|e| Error::Unstable {
                time: f64::NAN,
                reason: format!("level {k} (dx = {}): {e}", g.dx()),
            })?;
            Ok((out.final_state, start.elapsed().as_secs_f64()))
        })
        .collect();
    let mut finals = Vec::with_capacity(runs.len());
    let mut runtimes = Vec::with_capacity(runs.len());
    for r in runs {
        let (f, t) = r?;
        finals.push(f);
        runtimes.push(t);
    }
    let mut dx = Vec::new();
    let mut err_rho = Vec::new();
    let mut err_cos = Vec::new();
    for k in 0..finals.len() - 1 {
        let reference = finals[k + 1].restrict()?;
        dx.push(finals[k].grid.dx());
        err_rho.push(l1_relative_error(&finals[k], &reference, Component::Rho)?);
        err_cos.push(l1_relative_error(&finals[k], &reference, Component::CosTheta)?);
    }
    Ok(ErrorReport::from_errors(&dx, &err_rho, &err_cos, runtimes))
}
