//! The reference experiments: initial data, error norms and comparisons.

mod config;
mod convergence;
mod expansion;
mod initial;
mod micro_macro;
mod norms;
mod repulsion;

pub use config::{ExperimentConfig, ExperimentKind, IbmSettings};
pub use convergence::{convergence_study, ConvergenceSpec, ErrorLevel, ErrorReport, ERROR_REPORT_HEADER};
pub use expansion::{convolution, expansion_check, ExpansionRow, TestField};
pub use initial::{
    four_vortex_initial_data, riemann_initial_data, taylor_green_initial_data, taylor_green_raw,
    vortex_initial_data, Preset, RIEMANN_LEFT, RIEMANN_RIGHT, TAYLOR_GREEN_DENSITY,
};
pub use micro_macro::{
    micro_macro_compare, pearson, riemann_initial_deposit, riemann_particles, riemann_reference,
    taylor_green_compare, taylor_green_particles, MicroMacroRow, MicroMacroSpec, MicroMacroTable, Physics,
    TaylorGreenComparison, TaylorGreenSpec, MICRO_MACRO_HEADER,
};
pub use norms::{l1_absolute, l1_relative, l1_relative_error, Component, L1Error};
pub use repulsion::{dlmp_compare, repulsion_compare, DlmpComparison, FourVortexSpec, RepulsionComparison};
