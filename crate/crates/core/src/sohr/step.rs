//! One splitting step: conservative finite-volume update, then relaxation.

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::field::FieldState;
use super::flux::{flux_x_numerical, jacobian_x, spectrum, State};
use super::grid::{Boundary, GridSpec};
use super::params::HydroParams;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepReport {
    pub lambda_max: f64,
    pub fallbacks: usize,
    pub complex_spectra: usize,
}

impl StepReport {
    fn merge(&mut self, other: &StepReport) {
        self.lambda_max = self.lambda_max.max(other.lambda_max);
        self.fallbacks += other.fallbacks;
        self.complex_spectra += other.complex_spectra;
    }
}

#[inline]
fn conserved(s: &FieldState, k: usize) -> State {
    [s.rho[k], s.mom[k][0], s.mom[k][1]]
}

#[inline]
fn as_x(q: State, swap: bool) -> State {
    if swap {
        [q[0], q[2], q[1]]
    } else {
        q
    }
}

/// Forward differences `(Q_{i+1} - Q_i)/Δ` along one axis, in x-orientation.
///
/// On a Dirichlet grid the last cell of each line uses the backward difference.
fn forward_differences(s: &FieldState, along_x: bool) -> Vec<State> {
    let g = s.grid;
    let (len, h) = if along_x { (g.nx, g.dx()) } else { (g.ny, g.dy()) };
    let mut out = vec![[0.0; 3]; g.cells()];
    for j in 0..g.ny {
        for i in 0..g.nx {
            let pos = if along_x { i } else { j };
            let (a, b) = match (pos + 1 == len, g.bc) {
                (false, _) => (pos, pos + 1),
                (true, Boundary::Periodic) => (pos, 0),
                (true, Boundary::FixedDirichlet) => (pos - 1, pos),
            };
            let idx = |p: usize| if along_x { g.index(p, j) } else { g.index(i, p) };
            let qa = as_x(conserved(s, idx(a)), !along_x);
            let qb = as_x(conserved(s, idx(b)), !along_x);
            out[g.index(i, j)] = [(qb[0] - qa[0]) / h, (qb[1] - qa[1]) / h, (qb[2] - qa[2]) / h];
        }
    }
    out
}

/// Interface fluxes; entry `index(i, j)` holds the flux through the upper
/// face of cell `(i, j)` along the axis, stored in x-orientation.
fn interface_fluxes(
    s: &FieldState,
    grads: &[State],
    p: &HydroParams,
    along_x: bool,
) -> (Vec<State>, StepReport) {
    let g = s.grid;
    let mut flux = vec![[0.0; 3]; g.cells()];
    let len = if along_x { g.nx } else { g.ny };
    let reports: Vec<StepReport> = flux
        .par_chunks_mut(g.nx)
        .enumerate()
        .map(|(j, row)| {
            let mut rep = StepReport::default();
            for (i, slot) in row.iter_mut().enumerate() {
                let pos = if along_x { i } else { j };
                let next = if pos + 1 < len {
                    pos + 1
                } else if g.bc == Boundary::Periodic {
                    0
                } else {
                    continue;
                };
                let (kl, kr) = if along_x {
                    (g.index(i, j), g.index(next, j))
                } else {
                    (g.index(i, j), g.index(i, next))
                };
                let ql = as_x(conserved(s, kl), !along_x);
                let qr = as_x(conserved(s, kr), !along_x);
                let (f, r) = flux_x_numerical(ql, qr, grads[kl], grads[kr], p);
                *slot = f;
                rep.lambda_max = rep.lambda_max.max(r.lambda_max);
                rep.fallbacks += r.fallback as usize;
                rep.complex_spectra += r.complex_spectrum as usize;
            }
            rep
        })
        .collect();
    let mut total = StepReport::default();
    for r in &reports {
        total.merge(r);
    }
    (flux, total)
}

fn check_density(s: &FieldState) -> Result<()> {
    let g = s.grid;
    for (k, &r) in s.rho.iter().enumerate() {
        if !(r > 0.0) {
            return Err(Error::Numeric(format!(
                "non-positive density {r:e} at cell ({}, {})",
                k % g.nx,
                k / g.nx
            )));
        }
    }
    Ok(())
}

/// Largest Jacobian spectral radius over all interfaces.
pub fn max_wave_speed(s: &FieldState, p: &HydroParams) -> Result<f64> {
    check_density(s)?;
    let mut lambda: f64 = 0.0;
    for along_x in [true, false] {
        let grads = forward_differences(s, along_x);
        let g = s.grid;
        let len = if along_x { g.nx } else { g.ny };
        for j in 0..g.ny {
            for i in 0..g.nx {
                let pos = if along_x { i } else { j };
                let next = if pos + 1 < len {
                    pos + 1
                } else if g.bc == Boundary::Periodic {
                    0
                } else {
                    continue;
                };
                let (kl, kr) = if along_x {
                    (g.index(i, j), g.index(next, j))
                } else {
                    (g.index(i, j), g.index(i, next))
                };
                let ql = as_x(conserved(s, kl), !along_x);
                let qr = as_x(conserved(s, kr), !along_x);
                let mean = [
                    0.5 * (ql[0] + qr[0]),
                    0.5 * (ql[1] + qr[1]),
                    0.5 * (ql[2] + qr[2]),
                ];
                let gm = [
                    0.5 * (grads[kl][0] + grads[kr][0]),
                    0.5 * (grads[kl][1] + grads[kr][1]),
                    0.5 * (grads[kl][2] + grads[kr][2]),
                ];
                lambda = lambda.max(spectrum(&jacobian_x(mean, gm, p)).radius());
            }
        }
    }
    Ok(lambda)
}

/// Time step from the hyperbolic and diffusive stability limits.
pub fn cfl_dt_from(lambda_max: f64, rho_max: f64, grid: &GridSpec, p: &HydroParams) -> f64 {
    let h = grid.dx().min(grid.dy());
    let diffusivity = p.gamma() + p.repulsion() * rho_max.max(0.0);
    let hyperbolic = if lambda_max > 0.0 {
        p.cfl_hyp * h / lambda_max
    } else {
        f64::INFINITY
    };
    let diffusive = if diffusivity > 0.0 {
        p.cfl_diff * h * h / (2.0 * diffusivity)
    } else {
        f64::INFINITY
    };
    hyperbolic.min(diffusive).min(p.dt_max)
}

pub fn cfl_dt(s: &FieldState, p: &HydroParams) -> Result<f64> {
    let lambda = max_wave_speed(s, p)?;
    Ok(cfl_dt_from(lambda, s.max_rho(), &s.grid, p))
}

/// Flux-form update of `(ρ, ρΩ)` over all interfaces.
///
/// `frame` supplies the held boundary data on Dirichlet grids.
pub fn conservative_step(
    s: &FieldState,
    dt: f64,
    p: &HydroParams,
    frame: Option<&FieldState>,
) -> Result<(FieldState, StepReport)> {
    check_density(s)?;
    let g = s.grid;
    if g.bc == Boundary::FixedDirichlet && frame.is_none() {
        return Err(Error::Config("Dirichlet grid stepped without boundary data".into()));
    }
    let gx = forward_differences(s, true);
    let gy = forward_differences(s, false);
    let (fx, mut report) = interface_fluxes(s, &gx, p, true);
    let (fy, ry) = interface_fluxes(s, &gy, p, false);
    report.merge(&ry);

    let (cx, cy) = (dt / g.dx(), dt / g.dy());
    let mut out = s.clone();
    out.time = s.time + dt;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let k = g.index(i, j);
            if g.is_frame(i, j) {
                let b = frame.expect("checked above");
                out.rho[k] = b.rho[k];
                out.mom[k] = b.mom[k];
                continue;
            }
            let il = if i == 0 { g.nx - 1 } else { i - 1 };
            let jl = if j == 0 { g.ny - 1 } else { j - 1 };
            let (fe, fw) = (fx[k], fx[g.index(il, j)]);
            // y-fluxes are stored with momentum components swapped
            let (fn_, fs) = (fy[k], fy[g.index(i, jl)]);
            out.rho[k] = s.rho[k] - cx * (fe[0] - fw[0]) - cy * (fn_[0] - fs[0]);
            out.mom[k][0] = s.mom[k][0] - cx * (fe[1] - fw[1]) - cy * (fn_[2] - fs[2]);
            out.mom[k][1] = s.mom[k][1] - cx * (fe[2] - fw[2]) - cy * (fn_[1] - fs[1]);
        }
    }
    for j in 0..g.ny {
        for i in 0..g.nx {
            let r = out.rho[g.index(i, j)];
            if !(r > 0.0) {
                return Err(Error::Positivity {
                    i,
                    j,
                    rho: r,
                    suggested_dt: 0.5 * dt,
                });
            }
        }
    }
    Ok((out, report))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RelaxReport {
    /// Cells with vanishing momentum that were given the default direction.
    pub zero_momentum: usize,
}

/// Exact solution of `∂t(ρΩ) = (ρ/η)(1 - |Ω|²)Ω` over `dt`; `eta = 0` normalizes.
pub fn relaxation_step(
    s: &FieldState,
    eta: f64,
    dt: f64,
    default_axis: [f64; 2],
) -> (FieldState, RelaxReport) {
    let mut out = s.clone();
    let mut report = RelaxReport::default();
    let decay = if eta > 0.0 { (-2.0 * dt / eta).exp() } else { 0.0 };
    for k in 0..s.rho.len() {
        let rho = s.rho[k];
        if !(rho > 0.0) {
            continue;
        }
        let [mx, my] = s.mom[k];
        let norm = mx.hypot(my);
        if norm == 0.0 {
            report.zero_momentum += 1;
            if eta == 0.0 {
                out.mom[k] = [rho * default_axis[0], rho * default_axis[1]];
            }
            continue;
        }
        if eta == 0.0 {
            out.mom[k] = [rho * (mx / norm), rho * (my / norm)];
        } else {
            let m0 = (norm / rho) * (norm / rho);
            let m = m0 / (m0 + (1.0 - m0) * decay);
            let scale = (m / m0).sqrt();
            out.mom[k] = [mx * scale, my * scale];
        }
    }
    (out, report)
}
