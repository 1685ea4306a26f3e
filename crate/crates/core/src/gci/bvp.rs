//! Generalized collision invariant: the boundary-value problem for `g(θ)`.
//!
//! On the interior grid `θ_i = iπ/(N+1)` the operator
//!
//! ```text
//! -sin^{2-n}θ e^{-cos θ/d} (sin^{n-2}θ e^{cos θ/d} g')' + (n-2) g / sin²θ = sin θ
//! ```
//!
//! is discretized with second-order central differences in conservative form
//! with `g(0) = g(π) = 0`. Only weight ratios between neighbouring half-points
//! enter the stencil, so the exponential weight never overflows.

use crate::error::{Error, Result};
use crate::quadrature::simpson;

use super::vmf::check_noise;

/// Smallest accepted interior grid.
pub const MIN_GRID: usize = 64;
/// Interior grid used when tabulating coefficients.
pub const TABULATION_GRID: usize = 4095;

const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Discretized GCI profile and the VMF moments built from it.
#[derive(Debug, Clone, PartialEq)]
pub struct GciTable {
    pub d: f64,
    pub n: usize,
    /// Interior sample points, strictly increasing in `(0, π)`.
    pub theta: Vec<f64>,
    pub g: Vec<f64>,
    /// `h(cos θ) = g(θ) / sin θ` on the same points.
    pub h: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
    /// `⟨sin²θ h⟩` under the VMF equilibrium.
    pub moment_sin2: f64,
    /// `⟨sin²θ cos θ h⟩` under the VMF equilibrium.
    pub moment_sin2_cos: f64,
}

struct Stencil {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
}

fn assemble(d: f64, n: usize, theta: &[f64], step: f64) -> Stencil {
    let m = theta.len();
    let inv_h2 = 1.0 / (step * step);
    let radial = n as i32 - 2;
    let mut s = Stencil {
        lower: vec![0.0; m],
        diag: vec![0.0; m],
        upper: vec![0.0; m],
        rhs: vec![0.0; m],
    };
    for (i, &t) in theta.iter().enumerate() {
        let (st, ct) = t.sin_cos();
        let ratio = |half: f64| {
            let (sh, ch) = half.sin_cos();
            ((ch - ct) / d).exp() * (sh / st).powi(radial)
        };
        let r_minus = ratio(t - 0.5 * step);
        let r_plus = ratio(t + 0.5 * step);
        s.lower[i] = -r_minus * inv_h2;
        s.upper[i] = -r_plus * inv_h2;
        s.diag[i] = (r_minus + r_plus) * inv_h2 + (n as f64 - 2.0) / (st * st);
        s.rhs[i] = st;
    }
    s
}

/// Thomas algorithm; the GCI matrix is an M-matrix so no pivoting is needed.
fn solve_tridiagonal(s: &Stencil) -> Result<Vec<f64>> {
    let m = s.diag.len();
    let mut c_prime = vec![0.0; m];
    let mut x = vec![0.0; m];
    let mut denom = s.diag[0];
    if denom.abs() < f64::MIN_POSITIVE {
        return Err(Error::Numeric("singular GCI system at the first row".into()));
    }
    c_prime[0] = s.upper[0] / denom;
    x[0] = s.rhs[0] / denom;
    for i in 1..m {
        denom = s.diag[i] - s.lower[i] * c_prime[i - 1];
        if !(denom.abs() > f64::MIN_POSITIVE) {
            return Err(Error::Numeric(format!(
                "singular GCI system at row {i} (pivot {denom:e})"
            )));
        }
        c_prime[i] = s.upper[i] / denom;
        x[i] = (s.rhs[i] - s.lower[i] * x[i - 1]) / denom;
    }
    for i in (0..m - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}

fn max_residual(s: &Stencil, g: &[f64]) -> f64 {
    let m = g.len();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        let mut r = s.diag[i] * g[i] - s.rhs[i];
        if i > 0 {
            r += s.lower[i] * g[i - 1];
        }
        if i + 1 < m {
            r += s.upper[i] * g[i + 1];
        }
        // scale by the diagonal so that the measure is grid independent
        worst = worst.max(r.abs() / s.diag[i]);
    }
    worst
}

/// VMF moments `(⟨sin²θ h⟩, ⟨sin²θ cos θ h⟩)` by Simpson on the table grid.
pub(crate) fn weighted_moments(d: f64, n: usize, theta: &[f64], h: &[f64]) -> (f64, f64) {
    let m = theta.len();
    let step = std::f64::consts::PI / (m + 1) as f64;
    let radial = n as i32 - 2;
    let mut weight = Vec::with_capacity(m + 2);
    let mut sin2 = Vec::with_capacity(m + 2);
    let mut sin2_cos = Vec::with_capacity(m + 2);
    let endpoint_weight = |t: f64| ((t.cos() - 1.0) / d).exp() * t.sin().powi(radial);
    // h stays bounded at both poles while sin^n vanishes there
    weight.push(endpoint_weight(0.0));
    sin2.push(0.0);
    sin2_cos.push(0.0);
    for (&t, &hv) in theta.iter().zip(h) {
        let (st, ct) = t.sin_cos();
        let w = ((ct - 1.0) / d).exp() * st.powi(radial);
        weight.push(w);
        sin2.push(w * st * st * hv);
        sin2_cos.push(w * st * st * ct * hv);
    }
    weight.push(if n == 2 { (-2.0 / d).exp() } else { 0.0 });
    sin2.push(0.0);
    sin2_cos.push(0.0);
    let z = simpson(&weight, step);
    (simpson(&sin2, step) / z, simpson(&sin2_cos, step) / z)
}

/// Solves the GCI boundary-value problem on `grid_size` interior points.
pub fn solve_gci(d: f64, n: usize, grid_size: usize) -> Result<GciTable> {
    check_noise(d, n)?;
    if grid_size < MIN_GRID {
        return Err(Error::Domain(format!(
            "GCI grid needs at least {MIN_GRID} interior points, got {grid_size}"
        )));
    }
    let step = std::f64::consts::PI / (grid_size + 1) as f64;
    let theta: Vec<f64> = (1..=grid_size).map(|i| i as f64 * step).collect();
    let stencil = assemble(d, n, &theta, step);
    let g = solve_tridiagonal(&stencil)?;

    let residual = max_residual(&stencil, &g);
    if !(residual < RESIDUAL_TOLERANCE) {
        return Err(Error::Numeric(format!(
            "GCI system ill-conditioned for d = {d}, n = {n}: scaled residual {residual:e}"
        )));
    }
    if let Some(i) = g.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Numeric(format!(
            "GCI profile lost positivity at theta = {} (g = {:e}, d = {d}, n = {n})",
            theta[i], g[i]
        )));
    }

    let h: Vec<f64> = g.iter().zip(&theta).map(|(gv, t)| gv / t.sin()).collect();
    let (moment_sin2, moment_sin2_cos) = weighted_moments(d, n, &theta, &h);
    let c1 = super::vmf::c1(d, n)?;
    Ok(GciTable {
        d,
        n,
        theta,
        g,
        h,
        c1,
        c2: moment_sin2_cos / moment_sin2,
        moment_sin2,
        moment_sin2_cos,
    })
}

/// GCI convection coefficient `⟨sin²θ cos θ h⟩ / ⟨sin²θ h⟩`, recomputed from `table.h`.
pub fn c2(table: &GciTable) -> Result<f64> {
    let (den_moment, num_moment) = weighted_moments(table.d, table.n, &table.theta, &table.h);
    if !(den_moment.abs() >= 1e-14) {
        return Err(Error::Numeric(format!(
            "c2 denominator {den_moment:e} is numerically zero"
        )));
    }
    Ok(num_moment / den_moment)
}

impl GciTable {
    pub fn grid_size(&self) -> usize {
        self.theta.len()
    }

    /// `(h(1), h(-1))` by one-sided quadratic extrapolation to `θ = 0` and `θ = π`.
    pub fn h_endpoints(&self) -> (f64, f64) {
        let h = &self.h;
        let m = h.len();
        (
            3.0 * h[0] - 3.0 * h[1] + h[2],
            3.0 * h[m - 1] - 3.0 * h[m - 2] + h[m - 3],
        )
    }

    /// `(g(0⁺), g(π⁻))` extrapolated the same way; both tend to zero.
    pub fn g_endpoints(&self) -> (f64, f64) {
        let g = &self.g;
        let m = g.len();
        (
            3.0 * g[0] - 3.0 * g[1] + g[2],
            3.0 * g[m - 1] - 3.0 * g[m - 2] + g[m - 3],
        )
    }

    /// Scaled residual of the discrete operator applied to the stored `g`.
    pub fn residual(&self) -> f64 {
        let step = std::f64::consts::PI / (self.theta.len() + 1) as f64;
        let stencil = assemble(self.d, self.n, &self.theta, step);
        max_residual(&stencil, &self.g)
    }
}
