//! Fixtures shared by the benchmarks.

use sohrlab_core::experiment::{riemann_particles, ExperimentConfig, ExperimentKind};
use sohrlab_core::sohr::GridSpec;
use sohrlab_core::{FieldState, HydroParams, IbmParams, ParticleState, Result};

/// Four-vortex field on an `n × n` periodic grid with its parameters.
pub fn four_vortex(n: usize) -> Result<(FieldState, HydroParams)> {
    let c = ExperimentConfig::preset(ExperimentKind::FourVortex)?;
    let grid = GridSpec::new(n, n, c.grid.lx, c.grid.ly, c.grid.bc)?;
    let (field, _) = c.preset.initial_data().field(grid);
    Ok((field, c.hydro))
}

/// Riemann particles on the `10 × 10` box with the micro-macro constants.
pub fn riemann_cloud(n: usize, epsilon: f64) -> Result<(ParticleState, IbmParams)> {
    let c = ExperimentConfig::preset(ExperimentKind::MicroMacro)?;
    let state = riemann_particles(10.0, 10.0, n, c.hydro.d, 7)?;
    let mut params = c.ibm_params(epsilon, 0.01 * 100.0)?;
    params.n = n;
    Ok((state, params))
}
