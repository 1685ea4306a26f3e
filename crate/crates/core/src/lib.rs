//! Simulation laboratory for self-propelled particles with alignment and
//! repulsion.
//!
//! The crate couples three levels of description:
//!
//! * [`gci`]: the coefficients of the hydrodynamic limit (VMF moments, the
//!   generalized collision invariant, kernel moments);
//! * [`particle`]: the scaled individual-based model and its deposition onto
//!   grids;
//! * [`sohr`]: a finite-volume relaxation solver for the macroscopic
//!   equations, with SOH and DLMP variants.
//!
//! [`experiment`] encodes the reference experiments and [`io`] the file
//! formats shared with external tooling.

pub mod error;
pub mod experiment;
pub mod gci;
pub mod io;
pub mod particle;
pub mod quadrature;
pub mod sohr;

pub use error::{Error, Result};
pub use gci::{Coefficients, GciTable, KernelSpec};
pub use particle::{IbmParams, ParticleState};
pub use sohr::{FieldState, GridSpec, HydroParams, ModelMode};
