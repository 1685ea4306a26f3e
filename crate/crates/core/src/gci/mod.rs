//! Coefficients of the hydrodynamic limit.
//!
//! The order parameter `c1` comes from the VMF equilibrium, `c2` from the
//! generalized collision invariant, and `k0`, `Φ0` from the interaction
//! kernels. The `β` coefficients are the raw moments of the orientation
//! equation before division by `β1`.

mod bvp;
mod cache;
mod kernel;
mod vmf;

pub use bvp::{c2, solve_gci, GciTable, MIN_GRID, TABULATION_GRID};
pub use cache::{CacheRow, CoefficientCache, CACHE_HEADER};
pub use kernel::{kernel_moment_k0, potential_mass_phi0, KernelKind, KernelSpec};
pub use vmf::{c1, vmf_average, vmf_pdf, vmf_shifted_normalizer, VmfParams};

use crate::error::Result;

/// `β1 … β6` of the orientation equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Betas(pub [f64; 6]);

impl Betas {
    pub fn get(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    /// The five ratios `β_k / β1` for `k = 2..=6`.
    pub fn ratios(&self) -> [f64; 5] {
        let b1 = self.0[0];
        [
            self.0[1] / b1,
            self.0[2] / b1,
            self.0[3] / b1,
            self.0[4] / b1,
            self.0[5] / b1,
        ]
    }
}

pub fn beta_coefficients(table: &GciTable, alpha: f64, phi0: f64, k0: f64) -> Betas {
    let scale = 1.0 / (table.d * (table.n as f64 - 1.0));
    let s = table.moment_sin2;
    let sc = table.moment_sin2_cos;
    let mixed = s + scale * sc;
    Betas([
        scale * s,
        scale * sc,
        s / (table.n as f64 - 1.0),
        -phi0 * scale * s,
        alpha * phi0 * mixed,
        -k0 * mixed,
    ])
}

/// Everything the macroscopic solver needs from the microscopic model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub d: f64,
    pub n: usize,
    pub c1: f64,
    pub c2: f64,
    pub k0: f64,
    pub phi0: f64,
    pub betas: Betas,
}

impl Coefficients {
    pub fn compute(
        d: f64,
        n: usize,
        alpha: f64,
        alignment: &KernelSpec,
        potential: &KernelSpec,
    ) -> Result<Self> {
        let table = solve_gci(d, n, TABULATION_GRID)?;
        Ok(Self::from_table(&table, alpha, alignment, potential))
    }

    pub fn from_table(
        table: &GciTable,
        alpha: f64,
        alignment: &KernelSpec,
        potential: &KernelSpec,
    ) -> Self {
        let k0 = kernel_moment_k0(alignment, table.n);
        let phi0 = potential_mass_phi0(potential, table.n);
        Self {
            d: table.d,
            n: table.n,
            c1: table.c1,
            c2: table.c2,
            k0,
            phi0,
            betas: beta_coefficients(table, alpha, phi0, k0),
        }
    }

    pub fn csv_header() -> &'static str {
        "c1,c2,k0,phi0,beta1,beta2,beta3,beta4,beta5,beta6"
    }

    pub fn csv_row(&self) -> String {
        let mut fields = vec![self.c1, self.c2, self.k0, self.phi0];
        fields.extend_from_slice(&self.betas.0);
        fields
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}
