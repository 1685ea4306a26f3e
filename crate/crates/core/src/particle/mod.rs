//! The scaled individual-based model in two dimensions.

pub mod cells;
mod deposit;
mod dynamics;
mod sampling;
mod state;

pub use cells::{min_image, CellList};
pub use deposit::{deposit_fields, ensemble_average, ensemble_run, EnsembleAverage, EnsembleRun};
pub use dynamics::{
    ibm_run, ibm_step, mean_orientation, mean_orientations, potential_direct, repulsion_gradient,
    repulsion_gradient_direct, CounterNoise, FixedNoise, IbmStepReport, Noise, DEGENERATE_FLUX,
};
pub use sampling::sample_von_mises;
pub use state::{IbmParams, ParticleState};
