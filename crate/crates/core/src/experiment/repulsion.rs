//! Four-vortex runs: effect of the repulsion strength, and the DLMP model.

use rayon::prelude::*;

use crate::error::Result;
use crate::gci::{kernel_moment_k0, KernelSpec};
use crate::sohr::{run, Boundary, FieldState, GridSpec, HydroParams, ModelMode, RunSpec, TimeStep};

use super::initial::Preset;
use super::norms::{l1_relative_error, Component};

#[derive(Debug, Clone, PartialEq)]
pub struct FourVortexSpec {
    pub l: f64,
    /// Cells per side; 66 cells (Δx ≈ 0.152) put the quarter lines on cell edges.
    pub n: usize,
    pub dt: f64,
    pub t_final: f64,
    pub mu: f64,
    pub alpha: f64,
    pub d: f64,
    pub k0: f64,
}

impl Default for FourVortexSpec {
    fn default() -> Self {
        Self {
            l: 10.0,
            n: 66,
            dt: 0.001,
            t_final: 1.5,
            mu: 1.0,
            alpha: 0.0,
            d: 0.05,
            k0: kernel_moment_k0(&KernelSpec::indicator_ball(1.0).normalized(2), 2),
        }
    }
}

impl FourVortexSpec {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.n, self.n, self.l, self.l, Boundary::Periodic)
    }

    pub fn params(&self, f0: f64, mode: ModelMode) -> Result<HydroParams> {
        let mut p = HydroParams::with_physics(1.0, self.mu, self.alpha, self.d, f0)?;
        p.k0 = self.k0;
        p.mode = mode;
        Ok(p)
    }

    /// Final state on `grid` with time step `dt`.
    pub fn solve_on(&self, grid: GridSpec, dt: f64, params: &HydroParams) -> Result<FieldState> {
        let (initial, _) = Preset::FourVortex.field(grid);
        Ok(run(&initial, &RunSpec::new(*params, self.t_final, TimeStep::Fixed(dt)))?.final_state)
    }

    pub fn solve(&self, params: &HydroParams) -> Result<FieldState> {
        self.solve_on(self.grid()?, self.dt, params)
    }

    /// Relative L1 density distance between the solution and the restriction
    /// of the solution on the refined grid (spacing halved, `Δt` quartered).
    pub fn refinement_error(&self, coarse: &FieldState, params: &HydroParams) -> Result<f64> {
        let fine = self.solve_on(self.grid()?.refined(), 0.25 * self.dt, params)?;
        l1_relative_error(coarse, &fine.restrict()?, Component::Rho)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepulsionComparison {
    pub strong_f0: f64,
    pub weak_f0: f64,
    pub strong: FieldState,
    pub weak: FieldState,
    pub soh: FieldState,
    /// Relative L1 density distance of the weak-repulsion run from SOH.
    pub weak_vs_soh: f64,
}

impl RepulsionComparison {
    pub fn max_rho_strong(&self) -> f64 {
        self.strong.max_rho()
    }

    pub fn max_rho_weak(&self) -> f64 {
        self.weak.max_rho()
    }
}

pub fn repulsion_compare(spec: &FourVortexSpec, strong_f0: f64, weak_f0: f64) -> Result<RepulsionComparison> {
    let params = [
        spec.params(strong_f0, ModelMode::Sohr)?,
        spec.params(weak_f0, ModelMode::Sohr)?,
        spec.params(0.0, ModelMode::Soh)?,
    ];
    let runs = params
        .par_iter()
        .map(|p| spec.solve(p))
        .collect::<Result<Vec<_>>>()?;
    let [strong, weak, soh]: [FieldState; 3] = runs.try_into().expect("three runs");
    Ok(RepulsionComparison {
        strong_f0,
        weak_f0,
        weak_vs_soh: l1_relative_error(&weak, &soh, Component::Rho)?,
        strong,
        weak,
        soh,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DlmpComparison {
    pub f0: f64,
    pub sohr: FieldState,
    pub dlmp: FieldState,
    /// Relative L1 density distance, DLMP against SOHR.
    pub difference: f64,
    pub sohr_refinement_error: f64,
    pub dlmp_refinement_error: f64,
}

impl DlmpComparison {
    /// Ratio of the model difference to the larger refinement error.
    pub fn separation(&self) -> f64 {
        self.difference / self.sohr_refinement_error.max(self.dlmp_refinement_error)
    }
}

pub fn dlmp_compare(spec: &FourVortexSpec, f0: f64) -> Result<DlmpComparison> {
    let sohr_p = spec.params(f0, ModelMode::Sohr)?;
    let dlmp_p = spec.params(f0, ModelMode::Dlmp)?;
    let results = [sohr_p, dlmp_p]
        .par_iter()
        .map(|p| {
            let coarse = spec.solve(p)?;
            let err = spec.refinement_error(&coarse, p)?;
            Ok((coarse, err))
        })
        .collect::<Result<Vec<_>>>()?;
    let [(sohr, sohr_err), (dlmp, dlmp_err)]: [(FieldState, f64); 2] =
        results.try_into().expect("two runs");
    Ok(DlmpComparison {
        f0,
        difference: l1_relative_error(&dlmp, &sohr, Component::Rho)?,
        sohr,
        dlmp,
        sohr_refinement_error: sohr_err,
        dlmp_refinement_error: dlmp_err,
    })
}
