//! Interactions and the Euler-Maruyama step of the scaled particle model.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::Result;
use crate::gci::KernelSpec;

use super::cells::{min_image, CellList};
use super::state::{wrap, IbmParams, ParticleState};

/// `|J|` below which the mean orientation is treated as undefined.
pub const DEGENERATE_FLUX: f64 = 1e-12;

fn potential_kernel() -> KernelSpec {
    KernelSpec::quadratic_well(1.0)
}

fn alignment_kernel() -> KernelSpec {
    static KERNEL: OnceLock<KernelSpec> = OnceLock::new();
    *KERNEL.get_or_init(|| KernelSpec::indicator_ball(1.0).normalized(2))
}

/// Cheap rejection well beyond `cutoff`; pairs near it take the exact test.
#[inline]
fn outside(delta: [f64; 2], cutoff: f64) -> bool {
    delta[0] * delta[0] + delta[1] * delta[1] > cutoff * cutoff * (1.0 + 1e-9)
}

/// Contribution of a source at displacement `delta = x - X_i` to `∇Φ(x)`.
#[inline]
fn pair_gradient(delta: [f64; 2], range: f64, prefactor: f64, phi: &KernelSpec) -> [f64; 2] {
    if outside(delta, range) {
        return [0.0, 0.0];
    }
    let dist = delta[0].hypot(delta[1]);
    if dist == 0.0 || dist > range {
        return [0.0, 0.0];
    }
    let g = prefactor * phi.profile_derivative(dist / range) / (range * dist);
    [g * delta[0], g * delta[1]]
}

/// `Φ(x) = (w / (εr)²) Σ_i φ(|x - X_i| / (εr))`, summed directly.
pub fn potential_direct(state: &ParticleState, params: &IbmParams, x: [f64; 2]) -> f64 {
    let range = params.repulsion_range();
    let prefactor = params.weight() / (range * range);
    let phi = potential_kernel();
    state
        .positions
        .iter()
        .map(|p| {
            let d = min_image(x, *p, state.lx, state.ly);
            phi.profile(d[0].hypot(d[1]) / range)
        })
        .sum::<f64>()
        * prefactor
}

/// `∇Φ(X_k)` for every particle by direct O(N²) summation.
pub fn repulsion_gradient_direct(state: &ParticleState, params: &IbmParams) -> Vec<[f64; 2]> {
    let range = params.repulsion_range();
    let prefactor = params.weight() / (range * range);
    let phi = potential_kernel();
    state
        .positions
        .iter()
        .map(|xk| {
            let mut acc = [0.0, 0.0];
            for xi in &state.positions {
                let g = pair_gradient(min_image(*xk, *xi, state.lx, state.ly), range, prefactor, &phi);
                acc[0] += g[0];
                acc[1] += g[1];
            }
            acc
        })
        .collect()
}

/// `∇Φ(X_k)` for every particle using cell lists.
///
/// Coincident pairs, including the particle itself, contribute nothing.
pub fn repulsion_gradient(state: &ParticleState, params: &IbmParams) -> Vec<[f64; 2]> {
    let cells = CellList::build(&state.positions, state.lx, state.ly, params.repulsion_range());
    repulsion_gradient_with(state, params, &cells)
}

fn repulsion_gradient_with(state: &ParticleState, params: &IbmParams, cells: &CellList) -> Vec<[f64; 2]> {
    let range = params.repulsion_range();
    let prefactor = params.weight() / (range * range);
    let phi = potential_kernel();
    state
        .positions
        .par_iter()
        .map(|xk| {
            let mut acc = [0.0, 0.0];
            cells.for_each_candidate(*xk, |i| {
                let d = min_image(*xk, state.positions[i], state.lx, state.ly);
                let g = pair_gradient(d, range, prefactor, &phi);
                acc[0] += g[0];
                acc[1] += g[1];
            });
            acc
        })
        .collect()
}

fn orientations(state: &ParticleState) -> Vec<[f64; 2]> {
    (0..state.len()).map(|i| state.orientation(i)).collect()
}

fn flux_at(
    state: &ParticleState,
    orient: &[[f64; 2]],
    params: &IbmParams,
    k: usize,
    cells: Option<&CellList>,
) -> [f64; 2] {
    let range = params.alignment_range();
    let kernel = alignment_kernel();
    let cutoff = kernel.support() * range;
    let xk = state.positions[k];
    let inv_n = 1.0 / state.len() as f64;
    let mut j = [0.0, 0.0];
    let mut add = |i: usize| {
        let d = min_image(xk, state.positions[i], state.lx, state.ly);
        if outside(d, cutoff) {
            return;
        }
        let w = kernel.profile(d[0].hypot(d[1]) / range);
        if w != 0.0 {
            let o = orient[i];
            j[0] += w * o[0];
            j[1] += w * o[1];
        }
    };
    match cells {
        Some(c) => c.for_each_candidate(xk, &mut add),
        None => (0..state.len()).for_each(&mut add),
    }
    [j[0] * inv_n, j[1] * inv_n]
}

/// `J_k / |J_k|` with `J_k = (1/N) Σ_i K(|X_k - X_i| / (√ε R)) ω_i`;
/// `None` when `|J_k|` is below [`DEGENERATE_FLUX`].
pub fn mean_orientation(state: &ParticleState, k: usize, params: &IbmParams) -> Option<[f64; 2]> {
    normalize(flux_at(state, &orientations(state), params, k, None))
}

fn normalize(j: [f64; 2]) -> Option<[f64; 2]> {
    let n = j[0].hypot(j[1]);
    (n >= DEGENERATE_FLUX).then(|| [j[0] / n, j[1] / n])
}

/// Mean orientations of all particles through cell lists.
pub fn mean_orientations(state: &ParticleState, params: &IbmParams) -> Vec<Option<[f64; 2]>> {
    let cells = CellList::build(&state.positions, state.lx, state.ly, params.alignment_range());
    let orient = orientations(state);
    (0..state.len())
        .into_par_iter()
        .map(|k| normalize(flux_at(state, &orient, params, k, Some(&cells))))
        .collect()
}

/// Standard normal increments indexed by step and particle.
pub trait Noise: Sync {
    fn normal(&self, step: u64, particle: usize) -> f64;
}

/// Counter-based stream: a ChaCha generator keyed by `(seed, step)` on
/// stream `particle`. Independent of thread scheduling.
#[derive(Debug, Clone, Copy)]
pub struct CounterNoise {
    pub seed: u64,
}

impl Noise for CounterNoise {
    fn normal(&self, step: u64, particle: usize) -> f64 {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&step.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(particle as u64);
        StandardNormal.sample(&mut rng)
    }
}

/// The same prescribed draw for particle `k` at every step.
#[derive(Debug, Clone)]
pub struct FixedNoise(pub Vec<f64>);

impl Noise for FixedNoise {
    fn normal(&self, _step: u64, particle: usize) -> f64 {
        self.0[particle]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IbmStepReport {
    /// Particles without aligned neighbours that kept their own orientation.
    pub degenerate: usize,
}

/// One explicit step; all interactions are evaluated on the pre-step state.
///
/// The repulsive velocity `u = -μ∇Φ` enters tamed, as `u / (1 + Δt|u| / (εr))`,
/// so a single step never pushes a particle further than the repulsion range.
pub fn ibm_step(
    state: &ParticleState,
    params: &IbmParams,
    noise: &impl Noise,
) -> Result<(ParticleState, IbmStepReport)> {
    params.validate()?;
    let grad = repulsion_gradient(state, params);
    let targets = mean_orientations(state, params);
    let dt = params.dt;
    let noise_amp = (2.0 * params.d * dt / params.epsilon).sqrt();
    let reach = params.repulsion_range();
    let updated: Vec<([f64; 2], f64)> = (0..state.len())
        .into_par_iter()
        .map(|k| {
            let phi = state.angles[k];
            let (s, c) = phi.sin_cos();
            let u = [-params.mu * grad[k][0], -params.mu * grad[k][1]];
            let taming = 1.0 + dt * u[0].hypot(u[1]) / reach;
            let v = [c + u[0] / taming, s + u[1] / taming];
            let target = targets[k].unwrap_or([c, s]);
            let tangential = |u: [f64; 2]| -s * u[0] + c * u[1];
            let drift = tangential(target) / params.epsilon + params.alpha * tangential(v);
            let xi = if noise_amp > 0.0 { noise.normal(state.step, k) } else { 0.0 };
            let x = state.positions[k];
            (
                [wrap(x[0] + v[0] * dt, state.lx), wrap(x[1] + v[1] * dt, state.ly)],
                phi + drift * dt + noise_amp * xi,
            )
        })
        .collect();
    let report = IbmStepReport {
        degenerate: targets.iter().filter(|t| t.is_none()).count(),
    };
    let (positions, angles) = updated.into_iter().unzip();
    Ok((
        ParticleState {
            lx: state.lx,
            ly: state.ly,
            positions,
            angles,
            time: state.time + dt,
            step: state.step + 1,
        },
        report,
    ))
}

/// Advances by whole steps until `t_final`, the last step shortened to land on it.
pub fn ibm_run(
    state: &ParticleState,
    params: &IbmParams,
    noise: &impl Noise,
    t_final: f64,
) -> Result<(ParticleState, IbmStepReport)> {
    let mut s = state.clone();
    let mut total = IbmStepReport::default();
    let end = state.time + t_final;
    while s.time < end {
        let remaining = end - s.time;
        let mut p = *params;
        let lands = remaining <= p.dt * (1.0 + 1e-6);
        if lands {
            p.dt = remaining;
        }
        let (next, rep) = ibm_step(&s, &p, noise)?;
        total.degenerate += rep.degenerate;
        s = next;
        if lands {
            s.time = end;
        }
    }
    Ok((s, total))
}
