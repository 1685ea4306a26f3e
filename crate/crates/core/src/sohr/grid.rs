use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// A one-cell frame held at the initial data.
    FixedDirichlet,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::FixedDirichlet => "dirichlet",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "periodic" => Some(Boundary::Periodic),
            "dirichlet" | "fixed-dirichlet" => Some(Boundary::FixedDirichlet),
            _ => None,
        }
    }
}

/// Uniform cell-centered mesh on `[0, lx) × [0, ly)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub bc: Boundary,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, bc: Boundary) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::Config(format!(
                "grid needs at least 4 cells per axis, got {nx} x {ny}"
            )));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::Config(format!("box must have positive size, got {lx} x {ly}")));
        }
        Ok(Self { nx, ny, lx, ly, bc })
    }

    /// Grid with spacing as close as possible to `dx`, `dy` that tiles the box exactly.
    pub fn with_spacing(lx: f64, ly: f64, dx: f64, dy: f64, bc: Boundary) -> Result<Self> {
        if !(dx > 0.0 && dy > 0.0) {
            return Err(Error::Config(format!("spacings must be positive, got {dx}, {dy}")));
        }
        let nx = (lx / dx).round().max(1.0) as usize;
        let ny = (ly / dy).round().max(1.0) as usize;
        Self::new(nx, ny, lx, ly, bc)
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Row-major index: rows are constant `y`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        ((i as f64 + 0.5) * self.dx(), (j as f64 + 0.5) * self.dy())
    }

    /// Cell containing `(x, y)`, with positions assumed wrapped into the box.
    pub fn locate(&self, x: f64, y: f64) -> (usize, usize) {
        let i = ((x / self.dx()).floor() as isize).clamp(0, self.nx as isize - 1) as usize;
        let j = ((y / self.dy()).floor() as isize).clamp(0, self.ny as isize - 1) as usize;
        (i, j)
    }

    pub fn is_frame(&self, i: usize, j: usize) -> bool {
        self.bc == Boundary::FixedDirichlet
            && (i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny)
    }

    /// Grid with half the spacing on the same box.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx,
            ny: 2 * self.ny,
            ..*self
        }
    }

    pub fn same_mesh(&self, other: &GridSpec) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_rounds_to_tiling() {
        let g = GridSpec::with_spacing(10.0, 10.0, 0.25, 0.25, Boundary::Periodic).unwrap();
        assert_eq!((g.nx, g.ny), (40, 40));
        assert_eq!(g.dx() * g.nx as f64, 10.0);
        assert!(GridSpec::new(3, 10, 1.0, 1.0, Boundary::Periodic).is_err());
    }

    #[test]
    fn locate_and_index() {
        let g = GridSpec::new(4, 5, 2.0, 5.0, Boundary::Periodic).unwrap();
        assert_eq!(g.locate(0.6, 4.99), (1, 4));
        assert_eq!(g.index(1, 4), 17);
        assert_eq!(g.center(0, 0), (0.25, 0.5));
    }
}
