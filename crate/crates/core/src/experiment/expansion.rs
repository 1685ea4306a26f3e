//! Small-range expansion of the alignment convolution.

use std::f64::consts::PI;

use crate::gci::{kernel_moment_k0, KernelSpec};

/// Test field with its Laplacian in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestField {
    Constant(f64),
    /// `x² + xy + y²/2`.
    Quadratic,
    /// `sin(x) cos(2y)`.
    Sine,
}

impl TestField {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        match self {
            TestField::Constant(c) => *c,
            TestField::Quadratic => x * x + x * y + 0.5 * y * y,
            TestField::Sine => x.sin() * (2.0 * y).cos(),
        }
    }

    pub fn laplacian(&self, x: f64, y: f64) -> f64 {
        match self {
            TestField::Constant(_) => 0.0,
            TestField::Quadratic => 3.0,
            TestField::Sine => -5.0 * self.value(x, y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionRow {
    pub epsilon: f64,
    /// Sup over the sample points of `|K_ε * J - J - ε k0 ΔJ|`.
    pub remainder: f64,
}

const RADIAL: usize = 512;
const ANGULAR: usize = 256;

/// `(1/(√ε R)²) ∫ K(|x - y|/(√ε R)) J(y) dy` in polar coordinates around `x`:
/// Simpson in the radius, the trapezoid rule in the angle.
pub fn convolution(field: TestField, kernel: &KernelSpec, epsilon: f64, x: f64, y: f64) -> f64 {
    let scale = epsilon.sqrt() * kernel.range;
    let support = kernel.support();
    let h = support / RADIAL as f64;
    let radial: Vec<f64> = (0..=RADIAL)
        .map(|i| {
            let s = i as f64 * h;
            let ring: f64 = (0..ANGULAR)
                .map(|a| {
                    let phi = 2.0 * PI * a as f64 / ANGULAR as f64;
                    field.value(x + scale * s * phi.cos(), y + scale * s * phi.sin())
                })
                .sum::<f64>()
                * (2.0 * PI / ANGULAR as f64);
            kernel.profile(s) * s * ring
        })
        .collect();
    crate::quadrature::simpson(&radial, h)
}

/// Remainders of the second-order expansion over `eps_list`, measured on an
/// `8 × 8` lattice of points in `[0, 2π)²`.
pub fn expansion_check(field: TestField, kernel: &KernelSpec, eps_list: &[f64]) -> Vec<ExpansionRow> {
    let k0 = kernel_moment_k0(kernel, 2);
    let pts: Vec<(f64, f64)> = (0..64)
        .map(|k| (2.0 * PI * (k % 8) as f64 / 8.0 + 0.1, 2.0 * PI * (k / 8) as f64 / 8.0 + 0.2))
        .collect();
    eps_list
        .iter()
        .map(|&eps| {
            let remainder = pts
                .iter()
                .map(|&(x, y)| {
                    let exact = convolution(field, kernel, eps, x, y);
                    (exact - field.value(x, y) - eps * k0 * field.laplacian(x, y)).abs()
                })
                .fold(0.0, f64::max);
            ExpansionRow { epsilon: eps, remainder }
        })
        .collect()
}
