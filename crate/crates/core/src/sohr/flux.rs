//! Interface fluxes of the conservative relaxation system.
//!
//! Conserved variables are `Q = (ρ, ρΩ₁, ρΩ₂)`. Fluxes are written for the
//! x-direction; the y-direction is obtained by swapping the two momentum
//! components on input and output.

use crate::error::{Error, Result};

use super::params::{FluxScheme, HydroParams};

pub type State = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[inline]
fn swap(q: State) -> State {
    [q[0], q[2], q[1]]
}

#[inline]
fn oriented(q: State, axis: Axis) -> State {
    match axis {
        Axis::X => q,
        Axis::Y => swap(q),
    }
}

/// x-flux `F(Q, Q_x)`; `grad` is the normal derivative of `Q`.
///
/// The momentum rows carry `ρ V₁ Ω`, the normal flux of `ρ V ⊗ Ω`, so they
/// only involve normal derivatives.
#[inline]
pub fn flux_x(q: State, grad: State, p: &HydroParams) -> State {
    let [rho, m1, m2] = q;
    let rep = p.repulsion();
    let gamma = p.gamma();
    let v1 = p.c2 * p.v0 * m1 / rho - rep * grad[0];
    [
        p.c1 * p.v0 * m1 - rep * rho * grad[0],
        m1 * v1 + p.pressure(rho) - gamma * grad[1],
        m2 * v1 - gamma * grad[2],
    ]
}

/// Physical flux along `axis`.
pub fn physical_flux(q: State, grad: State, p: &HydroParams, axis: Axis) -> Result<State> {
    if !(q[0] > 0.0) {
        return Err(Error::Numeric(format!("flux evaluated at density {:e}", q[0])));
    }
    Ok(oriented(flux_x(oriented(q, axis), oriented(grad, axis), p), axis))
}

/// `(F, G)` for a state and its x- and y-gradients.
pub fn physical_fluxes(
    q: State,
    grad_x: State,
    grad_y: State,
    p: &HydroParams,
) -> Result<(State, State)> {
    Ok((
        physical_flux(q, grad_x, p, Axis::X)?,
        physical_flux(q, grad_y, p, Axis::Y)?,
    ))
}

pub type Matrix = [[f64; 3]; 3];

/// `∂F/∂Q` at fixed gradient (first-order part), x-orientation.
pub fn jacobian_x(q: State, grad: State, p: &HydroParams) -> Matrix {
    let [rho, m1, m2] = q;
    let u = m1 / rho;
    let w = m2 / rho;
    let s = -p.repulsion() * grad[0];
    let a = p.c2 * p.v0;
    [
        [s, p.c1 * p.v0, 0.0],
        [p.pressure_derivative(rho) - a * u * u, 2.0 * a * u + s, 0.0],
        [-a * u * w, a * w, a * u + s],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spectrum {
    /// Three real eigenvalues in increasing order.
    Real([f64; 3]),
    /// One real eigenvalue and a complex pair.
    Complex { max_modulus: f64 },
}

impl Spectrum {
    pub fn radius(&self) -> f64 {
        match *self {
            Spectrum::Real(l) => l[0].abs().max(l[2].abs()),
            Spectrum::Complex { max_modulus } => max_modulus,
        }
    }
}

/// Eigenvalues of a real 3×3 matrix from its characteristic cubic.
pub fn spectrum(a: &Matrix) -> Spectrum {
    let tr = a[0][0] + a[1][1] + a[2][2];
    let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2]
        - a[0][2] * a[2][0]
        + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    // λ³ + b λ² + c λ + e with b = -tr, c = minors, e = -det
    let b = -tr;
    let shift = b / 3.0;
    let pp = minors - b * b / 3.0;
    let qq = 2.0 * b * b * b / 27.0 - b * minors / 3.0 - det;
    let disc = 4.0 * pp * pp * pp + 27.0 * qq * qq;
    if disc <= 0.0 {
        if pp == 0.0 {
            return Spectrum::Real([-shift; 3]);
        }
        let r = 2.0 * (-pp / 3.0).sqrt();
        let arg = (3.0 * qq / (pp * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        let mut l = [
            r * phi.cos() - shift,
            r * (phi - tau).cos() - shift,
            r * (phi - 2.0 * tau).cos() - shift,
        ];
        l.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        Spectrum::Real(l)
    } else {
        let sq = (qq * qq / 4.0 + pp * pp * pp / 27.0).sqrt();
        let t = (-qq / 2.0 + sq).cbrt() + (-qq / 2.0 - sq).cbrt();
        let real = t - shift;
        // deflate: remaining quadratic λ² + (b + real) λ + (c + real (b + real))
        let pair_mod2 = minors + real * (b + real);
        Spectrum::Complex {
            max_modulus: real.abs().max(pair_mod2.abs().sqrt()),
        }
    }
}

#[inline]
fn matvec(a: &Matrix, v: State) -> State {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

#[inline]
fn shifted_matvec(a: &Matrix, shift: f64, v: State) -> State {
    let av = matvec(a, v);
    [av[0] - shift * v[0], av[1] - shift * v[1], av[2] - shift * v[2]]
}

/// `P₂(A) v`, with `P₂` the Lagrange interpolant of `|λ|` on the real spectrum `l`.
pub fn abs_polynomial_apply(a: &Matrix, l: [f64; 3], v: State) -> State {
    let mut out = [0.0; 3];
    for k in 0..3 {
        let (i, j) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let w = shifted_matvec(a, l[i], shifted_matvec(a, l[j], v));
        let c = l[k].abs() / ((l[k] - l[i]) * (l[k] - l[j]));
        for r in 0..3 {
            out[r] += c * w[r];
        }
    }
    out
}

/// Relative eigenvalue separation below which the polynomial is abandoned.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FluxReport {
    pub lambda_max: f64,
    /// The interface fell back from the polynomial to the Rusanov viscosity.
    pub fallback: bool,
    pub complex_spectrum: bool,
}

/// Numerical flux at the interface between `ql` (left) and `qr` (right).
///
/// `gl`, `gr` are the gradients attached to the two cells. The upwinding
/// term is `½ P₂(A(Q̄, Ḡ)) (Q_R - Q_L)` at the arithmetic mean state.
pub fn numerical_flux(
    ql: State,
    qr: State,
    gl: State,
    gr: State,
    p: &HydroParams,
    axis: Axis,
) -> Result<(State, FluxReport)> {
    let (l, r, gl, gr) = (
        oriented(ql, axis),
        oriented(qr, axis),
        oriented(gl, axis),
        oriented(gr, axis),
    );
    if !(l[0] > 0.0 && r[0] > 0.0) {
        return Err(Error::Numeric(format!(
            "interface densities {:e}, {:e} are not positive",
            l[0], r[0]
        )));
    }
    let (f, report) = flux_x_numerical(l, r, gl, gr, p);
    Ok((oriented(f, axis), report))
}

#[inline]
pub(crate) fn flux_x_numerical(
    l: State,
    r: State,
    gl: State,
    gr: State,
    p: &HydroParams,
) -> (State, FluxReport) {
    let fl = flux_x(l, gl, p);
    let fr = flux_x(r, gr, p);
    let mean = [0.5 * (l[0] + r[0]), 0.5 * (l[1] + r[1]), 0.5 * (l[2] + r[2])];
    let gmean = [
        0.5 * (gl[0] + gr[0]),
        0.5 * (gl[1] + gr[1]),
        0.5 * (gl[2] + gr[2]),
    ];
    let jump = [r[0] - l[0], r[1] - l[1], r[2] - l[2]];
    let a = jacobian_x(mean, gmean, p);
    let spec = spectrum(&a);
    let radius = spec.radius();
    let mut report = FluxReport {
        lambda_max: radius,
        fallback: false,
        complex_spectrum: matches!(spec, Spectrum::Complex { .. }),
    };
    let viscous = match (p.flux, spec) {
        (FluxScheme::Polynomial, Spectrum::Real(ls))
            if (ls[1] - ls[0]).min(ls[2] - ls[1]) > CLUSTER_TOLERANCE * radius.max(f64::MIN_POSITIVE) =>
        {
            abs_polynomial_apply(&a, ls, jump)
        }
        _ => {
            report.fallback = p.flux == FluxScheme::Polynomial;
            [radius * jump[0], radius * jump[1], radius * jump[2]]
        }
    };
    (
        [
            0.5 * (fl[0] + fr[0]) - 0.5 * viscous[0],
            0.5 * (fl[1] + fr[1]) - 0.5 * viscous[1],
            0.5 * (fl[2] + fr[2]) - 0.5 * viscous[2],
        ],
        report,
    )
}
