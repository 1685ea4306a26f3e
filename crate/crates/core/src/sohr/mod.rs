//! Finite-volume relaxation solver for the macroscopic model.
//!
//! A step is the conservative update of `(ρ, ρΩ)` followed by the exact
//! relaxation of `|Ω|` towards one.

pub mod field;
pub mod flux;
pub mod grid;
pub mod params;
pub mod run;
pub mod step;

pub use field::FieldState;
pub use flux::{numerical_flux, physical_flux, physical_fluxes, Axis, FluxReport, Spectrum, State};
pub use grid::{Boundary, GridSpec};
pub use params::{FluxScheme, HydroParams, ModelMode};
pub use run::{run, run_with, RunOutput, RunSpec, RunStats, TimeStep};
pub use step::{cfl_dt, conservative_step, max_wave_speed, relaxation_step, RelaxReport, StepReport};
