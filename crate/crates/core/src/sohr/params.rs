use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gci::{self, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelMode {
    /// Alignment with repulsion.
    Sohr,
    /// Alignment only; repulsion mass forced to zero.
    Soh,
    /// Alignment with repulsion folded into an enlarged linear pressure.
    Dlmp,
}

impl ModelMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelMode::Sohr => "sohr",
            ModelMode::Soh => "soh",
            ModelMode::Dlmp => "dlmp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sohr" => Some(ModelMode::Sohr),
            "soh" => Some(ModelMode::Soh),
            "dlmp" => Some(ModelMode::Dlmp),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxScheme {
    /// Degree-2 matrix polynomial interpolating `|λ|` on the Jacobian spectrum.
    Polynomial,
    Rusanov,
}

impl FluxScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            FluxScheme::Polynomial => "poly",
            FluxScheme::Rusanov => "rusanov",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "poly" | "polynomial" => Some(FluxScheme::Polynomial),
            "rusanov" => Some(FluxScheme::Rusanov),
            _ => None,
        }
    }
}

/// Physical constants and scheme controls of the macroscopic model (n = 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydroParams {
    pub v0: f64,
    pub mu: f64,
    pub alpha: f64,
    pub d: f64,
    /// `∫ φ(|x|) dx` of the bare repulsion potential.
    pub phi_mass: f64,
    /// Repulsion scaling, `Φ0 = F0 · phi_mass`.
    pub f0: f64,
    pub k0: f64,
    pub c1: f64,
    pub c2: f64,
    pub mode: ModelMode,
    pub flux: FluxScheme,
    pub cfl_hyp: f64,
    pub cfl_diff: f64,
    pub dt_max: f64,
}

impl HydroParams {
    /// `v0 = 1, μ = 1/2, α = 1, d = 0.1, F0 = 1` with the quadratic well and
    /// the normalized unit-ball alignment kernel.
    pub fn reference() -> Result<Self> {
        Self::with_physics(1.0, 0.5, 1.0, 0.1, 1.0)
    }

    pub fn with_physics(v0: f64, mu: f64, alpha: f64, d: f64, f0: f64) -> Result<Self> {
        let alignment = KernelSpec::indicator_ball(1.0).normalized(2);
        let k0 = gci::kernel_moment_k0(&alignment, 2);
        let mut p = Self {
            v0,
            mu,
            alpha,
            d,
            phi_mass: PI / 6.0,
            f0,
            k0,
            c1: 0.0,
            c2: 0.0,
            mode: ModelMode::Sohr,
            flux: FluxScheme::Polynomial,
            cfl_hyp: 0.45,
            cfl_diff: 0.45,
            dt_max: 0.1,
        };
        p.refresh_coefficients()?;
        Ok(p)
    }

    /// Recomputes `c1`, `c2` for the current `d`.
    pub fn refresh_coefficients(&mut self) -> Result<()> {
        let table = gci::solve_gci(self.d, 2, gci::TABULATION_GRID)?;
        self.c1 = table.c1;
        self.c2 = table.c2;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("v0", self.v0),
            ("d", self.d),
            ("c1", self.c1),
            ("c2", self.c2),
            ("cfl_hyp", self.cfl_hyp),
            ("cfl_diff", self.cfl_diff),
            ("dt_max", self.dt_max),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        let nonneg = [
            ("mu", self.mu),
            ("alpha", self.alpha),
            ("phi_mass", self.phi_mass),
            ("f0", self.f0),
            ("k0", self.k0),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// Effective `Φ0` entering the transport velocities.
    pub fn phi0(&self) -> f64 {
        match self.mode {
            ModelMode::Sohr => self.f0 * self.phi_mass,
            ModelMode::Soh | ModelMode::Dlmp => 0.0,
        }
    }

    /// `μΦ0`, the porous-medium diffusivity per unit density.
    pub fn repulsion(&self) -> f64 {
        self.mu * self.phi0()
    }

    /// `(n - 1) d + c2` for `n = 2`.
    pub fn gci_factor(&self) -> f64 {
        self.d + self.c2
    }

    pub fn gamma(&self) -> f64 {
        self.k0 * self.gci_factor()
    }

    fn linear_pressure_coefficient(&self) -> f64 {
        match self.mode {
            ModelMode::Dlmp => {
                self.v0 * self.d * (1.0 + self.gci_factor() / self.c1 * self.f0)
            }
            _ => self.v0 * self.d,
        }
    }

    fn quadratic_pressure_coefficient(&self) -> f64 {
        self.alpha * self.repulsion() * self.gci_factor()
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        self.linear_pressure_coefficient() * rho
            + self.quadratic_pressure_coefficient() * 0.5 * rho * rho
    }

    pub fn pressure_derivative(&self, rho: f64) -> f64 {
        self.linear_pressure_coefficient() + self.quadratic_pressure_coefficient() * rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let p = HydroParams::reference().unwrap();
        assert!((p.c1 - 0.9486).abs() < 5e-4);
        assert!((p.c2 - 0.8486).abs() < 5e-4);
        assert!((p.k0 - 0.125).abs() < 1e-12);
        assert!((p.phi0() - PI / 6.0).abs() < 1e-15);
        // p(1) = v0 d + α μ Φ0 (d + c2) / 2
        let expected = 0.1 + 1.0 * 0.5 * (PI / 6.0) * (0.1 + p.c2) * 0.5;
        assert!((p.pressure(1.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn soh_and_dlmp_drop_repulsion_terms() {
        let mut p = HydroParams::reference().unwrap();
        p.mode = ModelMode::Soh;
        assert_eq!(p.phi0(), 0.0);
        assert_eq!(p.pressure(2.0), 2.0 * p.v0 * p.d);
        p.mode = ModelMode::Dlmp;
        p.f0 = 5.0;
        assert_eq!(p.repulsion(), 0.0);
        let coeff = p.v0 * p.d * (1.0 + (p.d + p.c2) / p.c1 * 5.0);
        assert!((p.pressure_derivative(3.0) - coeff).abs() < 1e-15);
    }
}
