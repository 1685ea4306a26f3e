//! Discrete L1 distances between fields on the same mesh.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sohr::FieldState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Rho,
    CosTheta,
    /// Angle of `Ω`, differences wrapped into `(-π, π]`.
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Error {
    pub value: f64,
    /// Cells skipped because either field flags them missing.
    pub excluded: usize,
}

fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

fn component(f: &FieldState, k: usize, c: Component) -> Option<f64> {
    if f.missing[k] {
        return None;
    }
    match c {
        Component::Rho => Some(f.rho[k]),
        Component::CosTheta => f.cos_theta(k),
        Component::Theta => f.theta(k),
    }
}

fn sums(a: &FieldState, b: &FieldState, c: Component) -> Result<(f64, f64, usize)> {
    if !a.grid.same_mesh(&b.grid) {
        return Err(Error::Domain(format!(
            "fields live on different grids: {} x {} vs {} x {}",
            a.grid.nx, a.grid.ny, b.grid.nx, b.grid.ny
        )));
    }
    let (mut diff, mut norm, mut excluded) = (0.0, 0.0, 0);
    for k in 0..a.rho.len() {
        match (component(a, k, c), component(b, k, c)) {
            (Some(x), Some(y)) => {
                diff += if c == Component::Theta {
                    wrap_angle(x - y).abs()
                } else {
                    (x - y).abs()
                };
                norm += y.abs();
            }
            _ => excluded += 1,
        }
    }
    Ok((diff, norm, excluded))
}

/// `Σ|a - b| / Σ|b|` over cells defined in both fields; `b` is the reference.
pub fn l1_relative(a: &FieldState, b: &FieldState, c: Component) -> Result<L1Error> {
    let (diff, norm, excluded) = sums(a, b, c)?;
    if norm == 0.0 {
        return Err(Error::Numeric("reference field has zero L1 norm".into()));
    }
    Ok(L1Error {
        value: diff / norm,
        excluded,
    })
}

pub fn l1_relative_error(a: &FieldState, b: &FieldState, c: Component) -> Result<f64> {
    Ok(l1_relative(a, b, c)?.value)
}

/// `Σ|a - b| dx dy` over cells defined in both fields.
pub fn l1_absolute(a: &FieldState, b: &FieldState, c: Component) -> Result<L1Error> {
    let (diff, _, excluded) = sums(a, b, c)?;
    Ok(L1Error {
        value: diff * a.grid.dx() * a.grid.dy(),
        excluded,
    })
}
