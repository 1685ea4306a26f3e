use crate::error::{Error, Result};

/// Particles in the periodic box `[0, lx) × [0, ly)` with angle orientations.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    pub lx: f64,
    pub ly: f64,
    pub positions: Vec<[f64; 2]>,
    pub angles: Vec<f64>,
    pub time: f64,
    /// Number of steps taken; part of the noise counter.
    pub step: u64,
}

#[inline]
pub(crate) fn wrap(v: f64, l: f64) -> f64 {
    let w = v.rem_euclid(l);
    // rem_euclid can return l itself for tiny negative inputs
    if w >= l {
        0.0
    } else {
        w
    }
}

impl ParticleState {
    pub fn new(lx: f64, ly: f64, positions: Vec<[f64; 2]>, angles: Vec<f64>) -> Result<Self> {
        if !(lx > 0.0 && ly > 0.0) {
            return Err(Error::Domain(format!("box {lx} x {ly} must have positive sides")));
        }
        if positions.len() != angles.len() {
            return Err(Error::Domain(format!(
                "{} positions but {} angles",
                positions.len(),
                angles.len()
            )));
        }
        if positions.is_empty() {
            return Err(Error::Domain("particle state needs at least one particle".into()));
        }
        let positions = positions
            .into_iter()
            .map(|[x, y]| [wrap(x, lx), wrap(y, ly)])
            .collect();
        Ok(Self {
            lx,
            ly,
            positions,
            angles,
            time: 0.0,
            step: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    #[inline]
    pub fn orientation(&self, k: usize) -> [f64; 2] {
        let (s, c) = self.angles[k].sin_cos();
        [c, s]
    }

    pub fn in_box(&self) -> bool {
        self.positions
            .iter()
            .all(|p| p[0] >= 0.0 && p[0] < self.lx && p[1] >= 0.0 && p[1] < self.ly)
    }
}

/// Parameters of the scaled particle model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbmParams {
    pub n: usize,
    pub epsilon: f64,
    /// Repulsion range factor; the potential acts over `ε r`.
    pub r: f64,
    /// Alignment range factor; the kernel acts over `√ε R`.
    pub big_r: f64,
    pub alpha: f64,
    pub d: f64,
    /// Mobility multiplying the repulsion force.
    pub mu: f64,
    /// Total mass carried by the particles; each has weight `mass / n`.
    pub mass: f64,
    pub dt: f64,
    pub seed: u64,
}

impl IbmParams {
    /// Defaults of the Riemann comparison (`r = 0.0625`, `R = 0.25`).
    pub fn new(n: usize, epsilon: f64, mass: f64, seed: u64) -> Self {
        Self {
            n,
            epsilon,
            r: 0.0625,
            big_r: 0.25,
            alpha: 1.0,
            d: 0.1,
            mu: 1.0,
            mass,
            dt: Self::default_dt(epsilon),
            seed,
        }
    }

    pub fn default_dt(epsilon: f64) -> f64 {
        0.01f64.min(0.1 * epsilon)
    }

    pub fn repulsion_range(&self) -> f64 {
        self.epsilon * self.r
    }

    pub fn alignment_range(&self) -> f64 {
        self.epsilon.sqrt() * self.big_r
    }

    pub fn weight(&self) -> f64 {
        self.mass / self.n as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("particle count must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        for (name, v) in [("r", self.r), ("R", self.big_r), ("mass", self.mass)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("alpha", self.alpha), ("d", self.d), ("mu", self.mu)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.dt > 0.1 * self.epsilon * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "dt = {} does not resolve the alignment time scale; need dt <= {}",
                self.dt,
                0.1 * self.epsilon
            )));
        }
        if self.repulsion_range() >= self.alignment_range() {
            return Err(Error::Config(format!(
                "repulsion range {} must be shorter than alignment range {}",
                self.repulsion_range(),
                self.alignment_range()
            )));
        }
        Ok(())
    }
}
