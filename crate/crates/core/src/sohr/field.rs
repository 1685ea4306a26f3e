use crate::error::{Error, Result};

use super::grid::GridSpec;

/// Cell averages of density `ρ` and momentum `ρΩ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid: GridSpec,
    pub rho: Vec<f64>,
    pub mom: Vec<[f64; 2]>,
    pub time: f64,
    /// Cells whose orientation is undefined (no particles, or zero momentum).
    pub missing: Vec<bool>,
}

impl FieldState {
    pub fn zeros(grid: GridSpec) -> Self {
        let n = grid.cells();
        Self {
            grid,
            rho: vec![0.0; n],
            mom: vec![[0.0; 2]; n],
            time: 0.0,
            missing: vec![false; n],
        }
    }

    /// Builds a field from `(ρ, Ω)` evaluated at cell centers.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> (f64, [f64; 2])) -> Self {
        let mut s = Self::zeros(grid);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let (x, y) = grid.center(i, j);
                let (rho, omega) = f(x, y);
                let k = grid.index(i, j);
                s.rho[k] = rho;
                s.mom[k] = [rho * omega[0], rho * omega[1]];
            }
        }
        s
    }

    /// Builds a field from `(ρ, θ)` with `Ω = (cos θ, sin θ)`.
    pub fn from_angle_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> Self {
        Self::from_fn(grid, |x, y| {
            let (rho, theta) = f(x, y);
            (rho, [theta.cos(), theta.sin()])
        })
    }

    /// `Ω = ρΩ / ρ`; `None` for empty or flagged cells.
    pub fn omega(&self, k: usize) -> Option<[f64; 2]> {
        if self.missing[k] || !(self.rho[k] > 0.0) {
            return None;
        }
        Some([self.mom[k][0] / self.rho[k], self.mom[k][1] / self.rho[k]])
    }

    /// `cos θ` of the unit orientation, `None` where undefined.
    pub fn cos_theta(&self, k: usize) -> Option<f64> {
        let m = self.mom[k];
        let norm = m[0].hypot(m[1]);
        if self.missing[k] || !(norm > 0.0) {
            None
        } else {
            Some(m[0] / norm)
        }
    }

    pub fn theta(&self, k: usize) -> Option<f64> {
        let m = self.mom[k];
        if self.missing[k] || !(m[0].hypot(m[1]) > 0.0) {
            None
        } else {
            Some(m[1].atan2(m[0]))
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.grid.dx() * self.grid.dy()
    }

    pub fn max_rho(&self) -> f64 {
        self.rho.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `| |Ω| - 1 |` over cells with positive density.
    pub fn unit_norm_defect(&self) -> f64 {
        self.rho
            .iter()
            .zip(&self.mom)
            .filter(|(r, _)| **r > 0.0)
            .map(|(r, m)| (m[0].hypot(m[1]) / r - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Conservative 2×2 block average onto the grid with twice the spacing.
    pub fn restrict(&self) -> Result<FieldState> {
        let g = self.grid;
        if g.nx % 2 != 0 || g.ny % 2 != 0 || g.nx < 8 || g.ny < 8 {
            return Err(Error::Config(format!(
                "cannot coarsen a {} x {} grid by two",
                g.nx, g.ny
            )));
        }
        let coarse = GridSpec::new(g.nx / 2, g.ny / 2, g.lx, g.ly, g.bc)?;
        let mut out = FieldState::zeros(coarse);
        out.time = self.time;
        for j in 0..coarse.ny {
            for i in 0..coarse.nx {
                let k = coarse.index(i, j);
                let mut missing = false;
                for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let f = g.index(2 * i + di, 2 * j + dj);
                    out.rho[k] += 0.25 * self.rho[f];
                    out.mom[k][0] += 0.25 * self.mom[f][0];
                    out.mom[k][1] += 0.25 * self.mom[f][1];
                    missing |= self.missing[f];
                }
                out.missing[k] = missing;
            }
        }
        Ok(out)
    }

    /// Copy shifted by whole cells on a periodic grid.
    pub fn shifted(&self, si: usize, sj: usize) -> FieldState {
        let g = self.grid;
        let mut out = self.clone();
        for j in 0..g.ny {
            for i in 0..g.nx {
                let src = g.index(i, j);
                let dst = g.index((i + si) % g.nx, (j + sj) % g.ny);
                out.rho[dst] = self.rho[src];
                out.mom[dst] = self.mom[src];
                out.missing[dst] = self.missing[src];
            }
        }
        out
    }
}
