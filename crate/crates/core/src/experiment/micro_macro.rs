//! Particle model against the macroscopic solver on the Riemann and
//! Taylor-Green problems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::particle::{deposit_fields, ensemble_run, sample_von_mises, EnsembleRun, IbmParams, ParticleState};
use crate::sohr::{run, Boundary, FieldState, GridSpec, HydroParams, RunSpec, TimeStep};

use super::initial::{taylor_green_initial_data, Preset, RIEMANN_LEFT, RIEMANN_RIGHT, TAYLOR_GREEN_DENSITY};
use super::norms::{l1_relative_error, Component};

/// Shared physical constants of a micro-macro comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub mu: f64,
    pub alpha: f64,
    pub d: f64,
    pub f0: f64,
    pub r: f64,
    pub big_r: f64,
    /// Viscosity moment of the macroscopic model; `R²/8` matches the
    /// normalized indicator kernel of range `R`.
    pub k0: f64,
}

impl Physics {
    pub fn new(mu: f64, alpha: f64, d: f64, f0: f64, r: f64, big_r: f64) -> Self {
        Self {
            mu,
            alpha,
            d,
            f0,
            r,
            big_r,
            k0: big_r * big_r / 8.0,
        }
    }

    /// Macroscopic parameters matching the particle model (`v0 = 1`).
    pub fn hydro(&self) -> Result<HydroParams> {
        let mut p = HydroParams::with_physics(1.0, self.mu, self.alpha, self.d, self.f0)?;
        p.k0 = self.k0;
        Ok(p)
    }

    pub fn ibm(&self, n: usize, epsilon: f64, mass: f64, seed: u64) -> IbmParams {
        let mut p = IbmParams::new(n, epsilon, mass, seed);
        p.r = self.r;
        p.big_r = self.big_r;
        p.alpha = self.alpha;
        p.d = self.d;
        p.mu = self.mu;
        p
    }
}

/// Riemann data as particles: each side receives its share of the mass,
/// positions uniform, angles drawn from the local VMF equilibrium.
pub fn riemann_particles(lx: f64, ly: f64, n: usize, d: f64, seed: u64) -> Result<ParticleState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left_share = RIEMANN_LEFT.0 / (RIEMANN_LEFT.0 + RIEMANN_RIGHT.0);
    let mut positions = Vec::with_capacity(n);
    let mut angles = Vec::with_capacity(n);
    for _ in 0..n {
        let left = rng.random::<f64>() < left_share;
        let (offset, theta) = if left {
            (0.0, RIEMANN_LEFT.1)
        } else {
            (0.5 * lx, RIEMANN_RIGHT.1)
        };
        positions.push([offset + 0.5 * lx * rng.random::<f64>(), ly * rng.random::<f64>()]);
        angles.push(sample_von_mises(&mut rng, theta, 1.0 / d));
    }
    ParticleState::new(lx, ly, positions, angles)
}

/// Taylor-Green data as particles: uniform positions, VMF angles around
/// the local `Ω₀`.
pub fn taylor_green_particles(lx: f64, ly: f64, n: usize, d: f64, seed: u64) -> Result<ParticleState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(n);
    let mut angles = Vec::with_capacity(n);
    for _ in 0..n {
        let (x, y) = (lx * rng.random::<f64>(), ly * rng.random::<f64>());
        let (_, omega, _) = taylor_green_initial_data(x, y);
        positions.push([x, y]);
        angles.push(sample_von_mises(&mut rng, omega[1].atan2(omega[0]), 1.0 / d));
    }
    ParticleState::new(lx, ly, positions, angles)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MicroMacroSpec {
    pub lx: f64,
    pub ly: f64,
    pub n_particles: usize,
    pub epsilons: Vec<f64>,
    pub realizations: usize,
    pub t_final: f64,
    /// Spacing of the comparison grid.
    pub deposit_dx: f64,
    /// Number of 2× refinements of the macroscopic run above the comparison grid.
    pub reference_refinements: u32,
    pub sohr_dt: f64,
    pub seed: u64,
    pub physics: Physics,
    /// Particle time step; `None` selects `min(0.01, 0.1 ε)`.
    pub ibm_dt: Option<f64>,
}

impl MicroMacroSpec {
    /// Desk-scale Riemann comparison on a `10 × 1` strip with `10⁴` particles,
    /// the particle density of `10⁵` particles on the `10 × 10` box.
    pub fn riemann_desk() -> Self {
        Self {
            lx: 10.0,
            ly: 1.0,
            n_particles: 10_000,
            epsilons: vec![1.0, 0.5, 0.1, 0.05],
            realizations: 20,
            t_final: 1.0,
            deposit_dx: 0.25,
            reference_refinements: 2,
            sohr_dt: 0.01,
            seed: 1,
            physics: Physics::new(0.5, 1.0, 0.1, 1.0, 0.0625, 0.25),
            ibm_dt: None,
        }
    }

    /// The paper's scale: `10⁵` particles on the full box.
    pub fn riemann_full() -> Self {
        Self {
            ly: 10.0,
            n_particles: 100_000,
            ..Self::riemann_desk()
        }
    }

    pub fn mass(&self) -> f64 {
        0.5 * (RIEMANN_LEFT.0 + RIEMANN_RIGHT.0) * self.lx * self.ly
    }

    pub fn deposit_grid(&self) -> Result<GridSpec> {
        GridSpec::with_spacing(self.lx, self.ly, self.deposit_dx, self.deposit_dx, Boundary::Periodic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicroMacroRow {
    pub epsilon: f64,
    pub realizations: usize,
    pub err_rho: f64,
    pub err_theta: f64,
}

pub const MICRO_MACRO_HEADER: &str = "epsilon,realizations,err_rho,err_theta";

#[derive(Debug, Clone, PartialEq)]
pub struct MicroMacroTable {
    pub rows: Vec<MicroMacroRow>,
    /// Macroscopic solution restricted to the comparison grid.
    pub reference: FieldState,
    /// Ensemble average at the full realization count, per `ε`.
    pub averages: Vec<(f64, FieldState)>,
    pub degenerate: usize,
}

impl MicroMacroTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(MICRO_MACRO_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{:.16e},{},{:.16e},{:.16e}\n",
                r.epsilon, r.realizations, r.err_rho, r.err_theta
            ));
        }
        s
    }

    /// Row at the largest realization count for `epsilon`.
    pub fn final_row(&self, epsilon: f64) -> Option<&MicroMacroRow> {
        self.rows
            .iter()
            .filter(|r| r.epsilon == epsilon)
            .max_by_key(|r| r.realizations)
    }
}

/// Macroscopic Riemann solution on the comparison grid refined `refinements`
/// times, restricted back onto it.
pub fn riemann_reference(
    grid: GridSpec,
    refinements: u32,
    params: &HydroParams,
    dt: f64,
    t_final: f64,
) -> Result<FieldState> {
    let mut fine = grid;
    for _ in 0..refinements {
        fine = fine.refined();
    }
    let (initial, _) = Preset::Riemann.field(fine);
    let out = run(&initial, &RunSpec::new(*params, t_final, TimeStep::Fixed(dt)))?;
    let mut f = out.final_state;
    for _ in 0..refinements {
        f = f.restrict()?;
    }
    Ok(f)
}

pub fn micro_macro_compare(spec: &MicroMacroSpec) -> Result<MicroMacroTable> {
    if spec.epsilons.is_empty() || spec.realizations == 0 {
        return Err(Error::Config("need at least one epsilon and one realization".into()));
    }
    let grid = spec.deposit_grid()?;
    let hydro = spec.physics.hydro()?;
    let reference = riemann_reference(grid, spec.reference_refinements, &hydro, spec.sohr_dt, spec.t_final)?;
    let mass = spec.mass();
    let phys = spec.physics;
    let (lx, ly, n) = (spec.lx, spec.ly, spec.n_particles);

    let mut rows = Vec::new();
    let mut averages = Vec::new();
    let mut degenerate = 0;
    for &eps in &spec.epsilons {
        let mut params = phys.ibm(n, eps, mass, spec.seed);
        if let Some(dt) = spec.ibm_dt {
            params.dt = dt;
        }
        let ens: EnsembleRun = ensemble_run(
            |seed| riemann_particles(lx, ly, n, phys.d, seed),
            &params,
            &grid,
            spec.t_final,
            spec.realizations,
        )?;
        degenerate += ens.degenerate;
        let prefix: Vec<Result<MicroMacroRow>> = (1..=spec.realizations)
            .into_par_iter()
            .map(|m| {
                let avg = ens.prefix_average(m)?;
                Ok(MicroMacroRow {
                    epsilon: eps,
                    realizations: m,
                    err_rho: l1_relative_error(&avg.mean, &reference, Component::Rho)?,
                    err_theta: l1_relative_error(&avg.mean, &reference, Component::Theta)?,
                })
            })
            .collect();
        for r in prefix {
            rows.push(r?);
        }
        averages.push((eps, ens.average.mean));
    }
    Ok(MicroMacroTable {
        rows,
        reference,
        averages,
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorGreenSpec {
    pub l: f64,
    pub n_particles: usize,
    pub epsilon: f64,
    pub realizations: usize,
    pub t_final: f64,
    pub sohr_dx: f64,
    pub sohr_dt: f64,
    /// Factor-two coarsenings of the macroscopic grid used for the comparison.
    pub coarsenings: u32,
    pub seed: u64,
    pub physics: Physics,
    pub ibm_dt: Option<f64>,
}

impl TaylorGreenSpec {
    pub fn desk() -> Self {
        Self {
            l: 10.0,
            n_particles: 10_000,
            epsilon: 0.05,
            realizations: 10,
            t_final: 0.6,
            sohr_dx: 0.2,
            sohr_dt: 0.01,
            coarsenings: 1,
            seed: 1,
            physics: Physics::new(0.5, 1.0, 0.1, 1.0, 0.04, 0.2),
            ibm_dt: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorGreenComparison {
    pub sohr: FieldState,
    pub ibm: FieldState,
    /// Pearson correlation of the two density fields on the comparison grid.
    pub density_correlation: f64,
    pub err_rho: f64,
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

pub fn taylor_green_compare(spec: &TaylorGreenSpec) -> Result<TaylorGreenComparison> {
    let grid = GridSpec::with_spacing(spec.l, spec.l, spec.sohr_dx, spec.sohr_dx, Boundary::Periodic)?;
    let hydro = spec.physics.hydro()?;
    let (initial, _) = Preset::TaylorGreen.field(grid);
    let mut sohr = run(&initial, &RunSpec::new(hydro, spec.t_final, TimeStep::Fixed(spec.sohr_dt)))?.final_state;
    for _ in 0..spec.coarsenings {
        sohr = sohr.restrict()?;
    }
    let mass = TAYLOR_GREEN_DENSITY * spec.l * spec.l;
    let mut params = spec.physics.ibm(spec.n_particles, spec.epsilon, mass, spec.seed);
    if let Some(dt) = spec.ibm_dt {
        params.dt = dt;
    }
    let (l, n, d) = (spec.l, spec.n_particles, spec.physics.d);
    let ens = ensemble_run(
        |seed| taylor_green_particles(l, l, n, d, seed),
        &params,
        &sohr.grid,
        spec.t_final,
        spec.realizations,
    )?;
    let ibm = ens.average.mean;
    Ok(TaylorGreenComparison {
        density_correlation: pearson(&ibm.rho, &sohr.rho),
        err_rho: l1_relative_error(&ibm, &sohr, Component::Rho)?,
        sohr,
        ibm,
    })
}

/// Deposit of a single sampled Riemann configuration, for inspection.
pub fn riemann_initial_deposit(spec: &MicroMacroSpec, seed: u64) -> Result<FieldState> {
    let s = riemann_particles(spec.lx, spec.ly, spec.n_particles, spec.physics.d, seed)?;
    deposit_fields(&s, &spec.deposit_grid()?, spec.mass())
}
