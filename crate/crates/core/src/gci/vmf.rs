//! Von Mises-Fisher equilibria on the sphere `S^{n-1}`.
//!
//! All quantities are evaluated with the exponent shifted by `-1/d`, so that
//! `exp((cos θ - 1)/d) <= 1` and small noise intensities do not overflow.

use crate::error::{Error, Result};
use crate::quadrature::{simpson, sphere_area};

const UNIT_TOLERANCE: f64 = 1e-12;
const MIN_PANELS: usize = 4096;
const MAX_PANELS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub struct VmfParams {
    d: f64,
    n: usize,
    axis: Vec<f64>,
}

impl VmfParams {
    pub fn new(d: f64, n: usize, axis: Vec<f64>) -> Result<Self> {
        check_noise(d, n)?;
        if axis.len() != n {
            return Err(Error::Domain(format!(
                "mean direction has {} components, expected {n}",
                axis.len()
            )));
        }
        check_unit(&axis, "mean direction")?;
        Ok(Self { d, n, axis })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }
}

pub(crate) fn check_noise(d: f64, n: usize) -> Result<()> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("noise intensity d must be positive, got {d}")));
    }
    if n < 2 {
        return Err(Error::Domain(format!("dimension n must be at least 2, got {n}")));
    }
    Ok(())
}

fn check_unit(v: &[f64], what: &str) -> Result<()> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::Domain(format!("{what} must be a unit vector, |v| = {norm}")));
    }
    Ok(())
}

/// Number of Simpson panels on `[0, π]` resolving the VMF peak of width `sqrt(d)`.
pub(crate) fn angular_panels(d: f64) -> usize {
    let wanted = (std::f64::consts::PI * 24.0 / d.sqrt()).ceil() as usize;
    let p = wanted.clamp(MIN_PANELS, MAX_PANELS);
    p + p % 2
}

/// `⟨f(cos θ)⟩` and the polar integral `∫ e^{(cos θ - 1)/d} sin^{n-2} θ dθ`.
fn polar_integrals(f: impl Fn(f64) -> f64, d: f64, n: usize) -> (f64, f64) {
    let panels = angular_panels(d);
    let h = std::f64::consts::PI / panels as f64;
    let mut weight = Vec::with_capacity(panels + 1);
    let mut weighted = Vec::with_capacity(panels + 1);
    for i in 0..=panels {
        let theta = i as f64 * h;
        let c = theta.cos();
        let w = ((c - 1.0) / d).exp() * theta.sin().powi(n as i32 - 2);
        weight.push(w);
        weighted.push(w * f(c));
    }
    let z = simpson(&weight, h);
    (simpson(&weighted, h) / z, z)
}

/// `Z e^{-1/d}`: the VMF normalizer with the exponent shifted by `-1/d`.
pub fn vmf_shifted_normalizer(d: f64, n: usize) -> Result<f64> {
    check_noise(d, n)?;
    let (_, polar) = polar_integrals(|_| 1.0, d, n);
    Ok(sphere_area(n - 2) * polar)
}

/// Density of the VMF distribution `Z^{-1} exp(ω·Ω/d)` at `omega`.
pub fn vmf_pdf(omega: &[f64], params: &VmfParams) -> Result<f64> {
    if omega.len() != params.n {
        return Err(Error::Domain(format!(
            "orientation has {} components, expected {}",
            omega.len(),
            params.n
        )));
    }
    check_unit(omega, "orientation")?;
    let dot: f64 = omega.iter().zip(&params.axis).map(|(a, b)| a * b).sum();
    let z = vmf_shifted_normalizer(params.d, params.n)?;
    Ok(((dot - 1.0) / params.d).exp() / z)
}

/// VMF average `⟨f⟩` of a function of `cos θ = ω·Ω`.
pub fn vmf_average(f: impl Fn(f64) -> f64, d: f64, n: usize) -> Result<f64> {
    check_noise(d, n)?;
    Ok(polar_integrals(f, d, n).0)
}

/// Order parameter `c1(d) = ⟨cos θ⟩`.
pub fn c1(d: f64, n: usize) -> Result<f64> {
    vmf_average(|c| c, d, n)
}
