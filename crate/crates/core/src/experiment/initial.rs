//! Initial data of the reference experiments.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::sohr::{FieldState, GridSpec};

/// Vortex centered in the box: `ρ = 1` and the angle field around
/// `(x1, y1) = (x - Lx/2, y - Ly/2)`.
pub fn vortex_initial_data(x: f64, y: f64, lx: f64, ly: f64) -> (f64, f64) {
    (1.0, vortex_angle(x - 0.5 * lx, y - 0.5 * ly))
}

fn vortex_angle(x1: f64, y1: f64) -> f64 {
    if x1 != 0.0 {
        (y1 / x1).atan() + FRAC_PI_2 * x1.signum()
    } else if y1 > 0.0 {
        PI
    } else {
        0.0
    }
}

/// Four copies of the vortex, one per quarter of the box.
pub fn four_vortex_initial_data(x: f64, y: f64, lx: f64, ly: f64) -> (f64, f64) {
    let (hx, hy) = (0.5 * lx, 0.5 * ly);
    let cx = if x < hx { 0.5 * hx } else { 1.5 * hx };
    let cy = if y < hy { 0.5 * hy } else { 1.5 * hy };
    (1.0, vortex_angle(x - cx, y - cy))
}

pub const RIEMANN_LEFT: (f64, f64) = (0.0067, 0.7);
pub const RIEMANN_RIGHT: (f64, f64) = (0.0133, 2.3);

/// Two constant states split at `x = Lx/2`.
pub fn riemann_initial_data(x: f64, lx: f64) -> (f64, f64) {
    if x < 0.5 * lx {
        RIEMANN_LEFT
    } else {
        RIEMANN_RIGHT
    }
}

pub const TAYLOR_GREEN_DENSITY: f64 = 0.01;

/// Unnormalized three-mode orientation field `Ω̃₀`.
pub fn taylor_green_raw(x: f64, y: f64) -> [f64; 2] {
    let mut w = [0.0, 0.0];
    for k in [PI / 5.0, 3.0 * PI / 10.0, PI / 2.0] {
        let (sx, cx) = (k * x).sin_cos();
        let (sy, cy) = (k * y).sin_cos();
        w[0] += sx * cy / 3.0;
        w[1] -= cx * sy / 3.0;
    }
    w
}

/// `(ρ, Ω, degenerate)`; where `|Ω̃₀| < 1e-12` the direction defaults to `+x`.
pub fn taylor_green_initial_data(x: f64, y: f64) -> (f64, [f64; 2], bool) {
    let w = taylor_green_raw(x, y);
    let n = w[0].hypot(w[1]);
    if n < 1e-12 {
        (TAYLOR_GREEN_DENSITY, [1.0, 0.0], true)
    } else {
        (TAYLOR_GREEN_DENSITY, [w[0] / n, w[1] / n], false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Vortex,
    Riemann,
    TaylorGreen,
    FourVortex,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Vortex => "vortex",
            Preset::Riemann => "riemann",
            Preset::TaylorGreen => "taylor-green",
            Preset::FourVortex => "four-vortex",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vortex" => Some(Preset::Vortex),
            "riemann" => Some(Preset::Riemann),
            "taylor-green" => Some(Preset::TaylorGreen),
            "four-vortex" => Some(Preset::FourVortex),
            _ => None,
        }
    }

    /// Cell-centered initial field; returns it with the number of cells
    /// whose orientation had to be defaulted.
    pub fn field(self, grid: GridSpec) -> (FieldState, usize) {
        let (lx, ly) = (grid.lx, grid.ly);
        let mut defaulted = 0;
        let field = match self {
            Preset::Vortex => FieldState::from_angle_fn(grid, |x, y| vortex_initial_data(x, y, lx, ly)),
            Preset::FourVortex => {
                FieldState::from_angle_fn(grid, |x, y| four_vortex_initial_data(x, y, lx, ly))
            }
            Preset::Riemann => FieldState::from_angle_fn(grid, |x, _| riemann_initial_data(x, lx)),
            Preset::TaylorGreen => FieldState::from_fn(grid, |x, y| {
                let (rho, omega, flag) = taylor_green_initial_data(x, y);
                defaulted += flag as usize;
                (rho, omega)
            }),
        };
        (field, defaulted)
    }
}
