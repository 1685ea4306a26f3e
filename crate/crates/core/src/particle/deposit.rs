//! Binning of particles onto grids and ensemble averaging.

use crate::error::{Error, Result};
use crate::sohr::{FieldState, GridSpec};

use rayon::prelude::*;

use super::dynamics::{ibm_run, CounterNoise};
use super::state::{IbmParams, ParticleState};

/// `ρ_ij = mass · count_ij / (N dx dy)`; `Ω_ij` is the normalized mean
/// orientation of the cell's particles. Empty cells are flagged missing.
pub fn deposit_fields(state: &ParticleState, grid: &GridSpec, mass: f64) -> Result<FieldState> {
    if (grid.lx - state.lx).abs() > 1e-12 * state.lx || (grid.ly - state.ly).abs() > 1e-12 * state.ly {
        return Err(Error::Domain(format!(
            "grid {} x {} does not cover the particle box {} x {}",
            grid.lx, grid.ly, state.lx, state.ly
        )));
    }
    let mut field = FieldState::zeros(*grid);
    field.time = state.time;
    let mut count = vec![0usize; grid.cells()];
    let mut sum = vec![[0.0f64; 2]; grid.cells()];
    for (k, p) in state.positions.iter().enumerate() {
        let (i, j) = grid.locate(p[0], p[1]);
        let c = grid.index(i, j);
        count[c] += 1;
        let o = state.orientation(k);
        sum[c][0] += o[0];
        sum[c][1] += o[1];
    }
    let unit = mass / (state.len() as f64 * grid.dx() * grid.dy());
    for c in 0..grid.cells() {
        let rho = unit * count[c] as f64;
        field.rho[c] = rho;
        let norm = sum[c][0].hypot(sum[c][1]);
        if count[c] == 0 || norm == 0.0 {
            field.missing[c] = true;
        } else {
            field.mom[c] = [rho * sum[c][0] / norm, rho * sum[c][1] / norm];
        }
    }
    Ok(field)
}

/// Average of several deposited realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleAverage {
    /// Mean density, and the direction of the mean momentum at unit norm.
    pub mean: FieldState,
    /// Per-cell sample variance of the density (zero for one realization).
    pub rho_variance: Vec<f64>,
    pub realizations: usize,
}

pub fn ensemble_average(fields: &[FieldState]) -> Result<EnsembleAverage> {
    let first = fields
        .first()
        .ok_or_else(|| Error::Domain("ensemble average of zero realizations".into()))?;
    if let Some(f) = fields.iter().find(|f| !f.grid.same_mesh(&first.grid)) {
        return Err(Error::Domain(format!(
            "realizations on different grids: {:?} vs {:?}",
            first.grid, f.grid
        )));
    }
    let cells = first.grid.cells();
    if fields.len() == 1 {
        return Ok(EnsembleAverage {
            mean: first.clone(),
            rho_variance: vec![0.0; cells],
            realizations: 1,
        });
    }
    let m = fields.len() as f64;
    let mut mean = FieldState::zeros(first.grid);
    mean.time = first.time;
    let mut variance = vec![0.0; cells];
    for c in 0..cells {
        let rho = fields.iter().map(|f| f.rho[c]).sum::<f64>() / m;
        let mx = fields.iter().map(|f| f.mom[c][0]).sum::<f64>() / m;
        let my = fields.iter().map(|f| f.mom[c][1]).sum::<f64>() / m;
        variance[c] = fields.iter().map(|f| (f.rho[c] - rho).powi(2)).sum::<f64>() / (m - 1.0);
        mean.rho[c] = rho;
        let norm = mx.hypot(my);
        if rho > 0.0 && norm > 0.0 {
            mean.mom[c] = [rho * mx / norm, rho * my / norm];
        } else {
            mean.missing[c] = true;
        }
    }
    Ok(EnsembleAverage {
        mean,
        rho_variance: variance,
        realizations: fields.len(),
    })
}

/// Independent realizations of one particle experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    /// Deposit of each realization at the final time, in seed order.
    pub fields: Vec<FieldState>,
    pub average: EnsembleAverage,
    pub degenerate: usize,
}

impl EnsembleRun {
    /// Average over the first `m` realizations.
    pub fn prefix_average(&self, m: usize) -> Result<EnsembleAverage> {
        ensemble_average(&self.fields[..m.min(self.fields.len())])
    }
}

/// Realization `r` uses seed `params.seed + r` for both its initial data
/// (`init(seed)`) and its noise.
pub fn ensemble_run<F>(
    init: F,
    params: &IbmParams,
    grid: &GridSpec,
    t_final: f64,
    realizations: usize,
) -> Result<EnsembleRun>
where
    F: Fn(u64) -> Result<ParticleState> + Sync,
{
    if realizations == 0 {
        return Err(Error::Config("realization count must be at least 1".into()));
    }
    params.validate()?;
    let runs: Vec<Result<(FieldState, usize)>> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| {
            let seed = params.seed.wrapping_add(r);
            let mut p = *params;
            p.seed = seed;
            let start = init(seed)?;
            let (end, rep) = ibm_run(&start, &p, &CounterNoise { seed }, t_final)?;
            Ok((deposit_fields(&end, grid, p.mass)?, rep.degenerate))
        })
        .collect();
    let mut fields = Vec::with_capacity(realizations);
    let mut degenerate = 0;
    for r in runs {
        let (f, deg) = r?;
        fields.push(f);
        degenerate += deg;
    }
    let average = ensemble_average(&fields)?;
    Ok(EnsembleRun {
        fields,
        average,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sohr::Boundary;

    fn grid() -> GridSpec {
        GridSpec::new(4, 4, 2.0, 2.0, Boundary::Periodic).unwrap()
    }

    #[test]
    fn single_cell_deposit() {
        let s = ParticleState::new(2.0, 2.0, vec![[0.1, 0.2]; 5], vec![0.3; 5]).unwrap();
        let f = deposit_fields(&s, &grid(), 2.0).unwrap();
        assert!((f.rho[0] - 2.0 / 0.25).abs() < 1e-12);
        assert!(f.rho[1..].iter().all(|r| *r == 0.0));
        assert!(!f.missing[0] && f.missing[1..].iter().all(|m| *m));
        let o = f.omega(0).unwrap();
        assert!((o[0] - 0.3f64.cos()).abs() < 1e-15 && (o[1] - 0.3f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn ensemble_of_identical_fields() {
        let s = ParticleState::new(2.0, 2.0, vec![[0.1, 0.2], [1.5, 1.5], [1.2, 0.4]], vec![0.3, 1.0, -2.0]).unwrap();
        let f = deposit_fields(&s, &grid(), 1.0).unwrap();
        let one = ensemble_average(std::slice::from_ref(&f)).unwrap();
        assert_eq!(one.mean, f);
        let many = ensemble_average(&vec![f.clone(); 4]).unwrap();
        for c in 0..f.rho.len() {
            assert_eq!(many.mean.rho[c], f.rho[c]);
            assert_eq!(many.mean.missing[c], f.missing[c]);
            assert!((many.mean.mom[c][0] - f.mom[c][0]).abs() < 1e-15);
            assert!((many.mean.mom[c][1] - f.mom[c][1]).abs() < 1e-15);
            assert_eq!(many.rho_variance[c], 0.0);
        }
        assert!(ensemble_average(&[]).is_err());
    }

    #[test]
    fn noiseless_realizations_coincide() {
        let mut p = IbmParams::new(3, 0.5, 1.0, 5);
        p.d = 0.0;
        let init = |_seed: u64| {
            ParticleState::new(2.0, 2.0, vec![[0.1, 0.2], [1.5, 1.5], [1.2, 0.4]], vec![0.3, 1.0, -2.0])
        };
        let run = ensemble_run(init, &p, &grid(), 0.2, 3).unwrap();
        assert_eq!(run.fields[0], run.fields[2]);
        assert_eq!(run.average.mean.rho, run.fields[0].rho);
    }
}
