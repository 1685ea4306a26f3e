//! Radial interaction kernels and their moments.

use std::fmt;

use crate::quadrature::{simpson_fn, sphere_area};

const RADIAL_PANELS: usize = 4096;

#[derive(Clone, Copy)]
pub enum KernelKind {
    /// Indicator of the unit ball.
    IndicatorBall,
    /// `(|x| - 1)²` on the unit ball.
    QuadraticWell,
    /// User radial profile on `[0, support]`.
    CustomRadial { profile: fn(f64) -> f64, support: f64 },
}

impl fmt::Debug for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelKind::IndicatorBall => f.write_str("IndicatorBall"),
            KernelKind::QuadraticWell => f.write_str("QuadraticWell"),
            KernelKind::CustomRadial { support, .. } => {
                write!(f, "CustomRadial {{ support: {support} }}")
            }
        }
    }
}

/// A radial kernel `x ↦ amplitude · profile(|x|)` with interaction range `range`.
///
/// The profile is expressed in units of the range; `range` only enters the
/// second moment `k0`.
#[derive(Debug, Clone, Copy)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub range: f64,
    pub amplitude: f64,
}

impl KernelSpec {
    pub fn indicator_ball(range: f64) -> Self {
        Self {
            kind: KernelKind::IndicatorBall,
            range,
            amplitude: 1.0,
        }
    }

    pub fn quadratic_well(range: f64) -> Self {
        Self {
            kind: KernelKind::QuadraticWell,
            range,
            amplitude: 1.0,
        }
    }

    pub fn custom(profile: fn(f64) -> f64, support: f64, range: f64) -> Self {
        Self {
            kind: KernelKind::CustomRadial { profile, support },
            range,
            amplitude: 1.0,
        }
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.amplitude *= factor;
        self
    }

    /// Rescales the amplitude so that the kernel integrates to one over `R^n`.
    pub fn normalized(self, n: usize) -> Self {
        let mass = self.total_integral(n);
        self.scaled(1.0 / mass)
    }

    pub fn support(&self) -> f64 {
        match self.kind {
            KernelKind::IndicatorBall | KernelKind::QuadraticWell => 1.0,
            KernelKind::CustomRadial { support, .. } => support,
        }
    }

    /// Profile value at radius `s` (in units of the range).
    pub fn profile(&self, s: f64) -> f64 {
        let base = match self.kind {
            KernelKind::IndicatorBall => {
                if s <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            KernelKind::QuadraticWell => {
                if s <= 1.0 {
                    (s - 1.0) * (s - 1.0)
                } else {
                    0.0
                }
            }
            KernelKind::CustomRadial { profile, support } => {
                if s <= support {
                    profile(s)
                } else {
                    0.0
                }
            }
        };
        self.amplitude * base
    }

    /// Radial derivative of the profile, used for repulsion forces.
    pub fn profile_derivative(&self, s: f64) -> f64 {
        match self.kind {
            KernelKind::IndicatorBall => 0.0,
            KernelKind::QuadraticWell => {
                if s <= 1.0 {
                    2.0 * self.amplitude * (s - 1.0)
                } else {
                    0.0
                }
            }
            KernelKind::CustomRadial { profile, support } => {
                if s >= support {
                    return 0.0;
                }
                // the radial profile extends evenly through the origin
                let e = 1e-6 * support;
                let hi = (s + e).min(support);
                let lo = s - e;
                self.amplitude * (profile(hi) - profile(lo.abs())) / (hi - lo)
            }
        }
    }

    /// Whether `x ↦ profile(|x|)` has a vanishing radial slope at the origin.
    pub fn is_flat_at_origin(&self) -> bool {
        self.profile_derivative(0.0).abs() < 1e-8 * self.amplitude.abs().max(1.0)
    }

    fn radial_integral(&self, n: usize, power: i32) -> f64 {
        let support = self.support();
        sphere_area(n - 1)
            * simpson_fn(
                |s| self.profile(s) * s.powi(power),
                0.0,
                support,
                RADIAL_PANELS,
            )
    }

    pub fn total_integral(&self, n: usize) -> f64 {
        self.radial_integral(n, n as i32 - 1)
    }
}

/// Alignment kernel second moment `k0 = (R²/2n) ∫ K(|x|) |x|² dx`.
pub fn kernel_moment_k0(kernel: &KernelSpec, n: usize) -> f64 {
    kernel.range * kernel.range / (2.0 * n as f64) * kernel.radial_integral(n, n as i32 + 1)
}

/// Repulsion potential mass `Φ0 = ∫ φ(|x|) dx`.
pub fn potential_mass_phi0(potential: &KernelSpec, n: usize) -> f64 {
    potential.total_integral(n)
}
