//! Experiment descriptions with the reference defaults of each preset.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::particle::IbmParams;
use crate::sohr::{Boundary, GridSpec, HydroParams, ModelMode, RunSpec, TimeStep};

use super::convergence::ConvergenceSpec;
use super::initial::Preset;
use super::micro_macro::{MicroMacroSpec, Physics, TaylorGreenSpec};
use super::repulsion::FourVortexSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Convergence,
    Riemann,
    TaylorGreen,
    FourVortex,
    DlmpCompare,
    MicroMacro,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Convergence,
        ExperimentKind::Riemann,
        ExperimentKind::TaylorGreen,
        ExperimentKind::FourVortex,
        ExperimentKind::DlmpCompare,
        ExperimentKind::MicroMacro,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Riemann => "riemann",
            ExperimentKind::TaylorGreen => "taylor-green",
            ExperimentKind::FourVortex => "four-vortex",
            ExperimentKind::DlmpCompare => "dlmp-compare",
            ExperimentKind::MicroMacro => "micro-macro",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Initial data used by the preset.
    pub fn initial_data(self) -> Preset {
        match self {
            ExperimentKind::Convergence => Preset::Vortex,
            ExperimentKind::Riemann | ExperimentKind::MicroMacro => Preset::Riemann,
            ExperimentKind::TaylorGreen => Preset::TaylorGreen,
            ExperimentKind::FourVortex | ExperimentKind::DlmpCompare => Preset::FourVortex,
        }
    }
}

/// Particle-side settings of a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct IbmSettings {
    pub n: usize,
    pub epsilons: Vec<f64>,
    pub r: f64,
    pub big_r: f64,
    /// `None` selects `min(0.01, 0.1 ε)` per `ε`.
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: ExperimentKind,
    pub grid: GridSpec,
    pub hydro: HydroParams,
    pub ibm: Option<IbmSettings>,
    pub t_final: f64,
    pub dt: TimeStep,
    pub eta: f64,
    pub snapshot_times: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    /// Grids of a convergence study.
    pub levels: usize,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn preset(kind: ExperimentKind) -> Result<Self> {
        let square = |dx: f64, bc| GridSpec::with_spacing(10.0, 10.0, dx, dx, bc);
        let riemann_ibm = IbmSettings {
            n: 10_000,
            epsilons: vec![1.0, 0.5, 0.1, 0.05],
            r: 0.0625,
            big_r: 0.25,
            dt: None,
        };
        let mut hydro = HydroParams::reference()?;
        let (grid, t_final, dt, ibm, realizations) = match kind {
            ExperimentKind::Convergence => (square(0.25, Boundary::FixedDirichlet)?, 1.0, 0.001, None, 1),
            ExperimentKind::Riemann => {
                hydro.k0 = riemann_ibm.big_r * riemann_ibm.big_r / 8.0;
                (square(0.25, Boundary::Periodic)?, 1.0, 0.01, None, 1)
            }
            ExperimentKind::MicroMacro => {
                hydro.k0 = riemann_ibm.big_r * riemann_ibm.big_r / 8.0;
                let strip = GridSpec::with_spacing(10.0, 1.0, 0.25, 0.25, Boundary::Periodic)?;
                (strip, 1.0, 0.01, Some(riemann_ibm), 20)
            }
            ExperimentKind::TaylorGreen => {
                let ibm = IbmSettings {
                    n: 10_000,
                    epsilons: vec![0.05],
                    r: 0.04,
                    big_r: 0.2,
                    dt: None,
                };
                hydro.k0 = ibm.big_r * ibm.big_r / 8.0;
                (square(0.2, Boundary::Periodic)?, 0.6, 0.01, Some(ibm), 10)
            }
            ExperimentKind::FourVortex | ExperimentKind::DlmpCompare => {
                hydro = HydroParams::with_physics(1.0, 1.0, 0.0, 0.05, 5.0)?;
                if kind == ExperimentKind::DlmpCompare {
                    hydro.mode = ModelMode::Dlmp;
                }
                let grid = GridSpec::new(66, 66, 10.0, 10.0, Boundary::Periodic)?;
                (grid, 1.5, 0.001, None, 1)
            }
        };
        Ok(Self {
            preset: kind,
            grid,
            hydro,
            ibm,
            t_final,
            dt: TimeStep::Fixed(dt),
            eta: 0.0,
            snapshot_times: vec![t_final],
            realizations,
            seed: 1,
            levels: 4,
            output_dir: PathBuf::from("out").join(kind.as_str()),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.hydro.validate()?;
        self.run_spec().validate()?;
        let need = match self.preset {
            ExperimentKind::Convergence => Boundary::FixedDirichlet,
            _ => Boundary::Periodic,
        };
        if self.grid.bc != need {
            return Err(Error::Config(format!(
                "preset {} requires {} boundary conditions, got {}",
                self.preset.as_str(),
                need.as_str(),
                self.grid.bc.as_str()
            )));
        }
        if self.preset == ExperimentKind::Convergence && self.levels < 3 {
            return Err(Error::Config(format!(
                "convergence needs at least 3 levels, got {}",
                self.levels
            )));
        }
        if self.realizations == 0 {
            return Err(Error::Config("realizations must be at least 1".into()));
        }
        if matches!(self.preset, ExperimentKind::MicroMacro | ExperimentKind::TaylorGreen) {
            let ibm = self.ibm.as_ref().ok_or_else(|| {
                Error::Config(format!("preset {} needs an [ibm] section", self.preset.as_str()))
            })?;
            if ibm.epsilons.is_empty() || ibm.n == 0 {
                return Err(Error::Config("[ibm] needs n >= 1 and at least one epsilon".into()));
            }
        }
        Ok(())
    }

    fn fixed_dt(&self) -> Result<f64> {
        match self.dt {
            TimeStep::Fixed(dt) => Ok(dt),
            TimeStep::Adaptive => Err(Error::Config(format!(
                "preset {} needs a fixed time step",
                self.preset.as_str()
            ))),
        }
    }

    fn ibm_settings(&self) -> Result<&IbmSettings> {
        self.ibm
            .as_ref()
            .ok_or_else(|| Error::Config(format!("preset {} needs an [ibm] section", self.preset.as_str())))
    }

    /// Particle parameters at one `ε`, sharing `μ`, `α`, `d` with the
    /// macroscopic model.
    pub fn ibm_params(&self, epsilon: f64, mass: f64) -> Result<IbmParams> {
        let s = self.ibm_settings()?;
        let physics = self.physics()?;
        let mut p = physics.ibm(s.n, epsilon, mass, self.seed);
        if let Some(dt) = s.dt {
            p.dt = dt;
        }
        Ok(p)
    }

    fn physics(&self) -> Result<Physics> {
        let s = self.ibm_settings()?;
        let h = &self.hydro;
        Ok(Physics {
            k0: h.k0,
            ..Physics::new(h.mu, h.alpha, h.d, h.f0, s.r, s.big_r)
        })
    }

    pub fn convergence_spec(&self) -> Result<ConvergenceSpec> {
        Ok(ConvergenceSpec {
            lx: self.grid.lx,
            ly: self.grid.ly,
            base_dx: self.grid.dx(),
            levels: self.levels,
            dt: self.fixed_dt()?,
            t_final: self.t_final,
            params: self.hydro,
        })
    }

    pub fn micro_macro_spec(&self) -> Result<MicroMacroSpec> {
        let s = self.ibm_settings()?;
        if let Some(dt) = s.dt {
            if s.epsilons.iter().any(|e| dt > 0.1 * e * (1.0 + 1e-12)) {
                return Err(Error::Config(format!("ibm.dt = {dt} too large for the smallest epsilon")));
            }
        }
        Ok(MicroMacroSpec {
            lx: self.grid.lx,
            ly: self.grid.ly,
            n_particles: s.n,
            epsilons: s.epsilons.clone(),
            realizations: self.realizations,
            t_final: self.t_final,
            deposit_dx: self.grid.dx(),
            reference_refinements: 2,
            sohr_dt: self.fixed_dt()?,
            seed: self.seed,
            physics: self.physics()?,
            ibm_dt: s.dt,
        })
    }

    pub fn taylor_green_spec(&self) -> Result<TaylorGreenSpec> {
        let s = self.ibm_settings()?;
        let epsilon = *s
            .epsilons
            .first()
            .ok_or_else(|| Error::Config("[ibm] epsilons is empty".into()))?;
        if self.grid.lx != self.grid.ly || self.grid.nx != self.grid.ny {
            return Err(Error::Config("the Taylor-Green preset needs a square grid".into()));
        }
        Ok(TaylorGreenSpec {
            l: self.grid.lx,
            n_particles: s.n,
            epsilon,
            realizations: self.realizations,
            t_final: self.t_final,
            sohr_dx: self.grid.dx(),
            sohr_dt: self.fixed_dt()?,
            coarsenings: 1,
            seed: self.seed,
            physics: self.physics()?,
            ibm_dt: s.dt,
        })
    }

    pub fn four_vortex_spec(&self) -> Result<FourVortexSpec> {
        if self.grid.lx != self.grid.ly || self.grid.nx != self.grid.ny {
            return Err(Error::Config("the four-vortex preset needs a square grid".into()));
        }
        let h = &self.hydro;
        Ok(FourVortexSpec {
            l: self.grid.lx,
            n: self.grid.nx,
            dt: self.fixed_dt()?,
            t_final: self.t_final,
            mu: h.mu,
            alpha: h.alpha,
            d: h.d,
            k0: h.k0,
        })
    }

    pub fn run_spec(&self) -> RunSpec {
        let mut spec = RunSpec::new(self.hydro, self.t_final, self.dt);
        spec.snapshot_times = self.snapshot_times.clone();
        spec.eta = self.eta;
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for k in ExperimentKind::ALL {
            let c = ExperimentConfig::preset(k).unwrap();
            c.validate().unwrap();
            assert_eq!(ExperimentKind::parse(k.as_str()), Some(k));
        }
    }

    #[test]
    fn riemann_defaults() {
        let c = ExperimentConfig::preset(ExperimentKind::Riemann).unwrap();
        assert_eq!(c.dt, TimeStep::Fixed(0.01));
        assert!((c.grid.dx() - 0.25).abs() < 1e-15 && (c.grid.dy() - 0.25).abs() < 1e-15);
        assert_eq!(c.grid.bc, Boundary::Periodic);
    }

    #[test]
    fn boundary_mismatch_is_explained() {
        let mut c = ExperimentConfig::preset(ExperimentKind::Convergence).unwrap();
        c.grid.bc = Boundary::Periodic;
        let msg = c.validate().unwrap_err().to_string();
        assert!(msg.contains("convergence") && msg.contains("dirichlet"), "{msg}");
    }
}
