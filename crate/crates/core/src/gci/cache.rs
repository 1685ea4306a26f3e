//! Persistent `(d, n) → coefficients` table.
//!
//! `β1`, `β2`, `β3` depend on `(d, n)` only. `β4`, `β5` and `β6` are linear in
//! `Φ0`, `αΦ0` and `k0` respectively, so the file stores them for unit factors
//! and [`CacheRow::betas`] rescales on lookup.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::{solve_gci, Betas, GciTable};

pub const CACHE_HEADER: &str = "d,n,grid_size,c1,c2,beta1,beta2,beta3,beta4,beta5,beta6";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheRow {
    pub d: f64,
    pub n: usize,
    pub grid_size: usize,
    pub c1: f64,
    pub c2: f64,
    pub unit_betas: Betas,
}

impl CacheRow {
    pub fn from_table(table: &GciTable) -> Self {
        Self {
            d: table.d,
            n: table.n,
            grid_size: table.grid_size(),
            c1: table.c1,
            c2: table.c2,
            unit_betas: super::beta_coefficients(table, 1.0, 1.0, 1.0),
        }
    }

    pub fn betas(&self, alpha: f64, phi0: f64, k0: f64) -> Betas {
        let mut b = self.unit_betas.0;
        b[3] *= phi0;
        b[4] *= alpha * phi0;
        b[5] *= k0;
        Betas(b)
    }

    fn to_line(self) -> String {
        let mut s = format!(
            "{:.16e},{},{},{:.16e},{:.16e}",
            self.d, self.n, self.grid_size, self.c1, self.c2
        );
        for b in self.unit_betas.0 {
            s.push_str(&format!(",{b:.16e}"));
        }
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoefficientCache {
    rows: Vec<CacheRow>,
}

impl CoefficientCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads a cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::new()),
            Err(e) => return Err(Error::io(path, e)),
        };
        let parse_err = |line: usize, msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == CACHE_HEADER => {}
            Some((_, h)) => return Err(parse_err(1, format!("unexpected header `{h}`"))),
            None => return Ok(Self::new()),
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 11 {
                return Err(parse_err(idx + 1, format!("expected 11 fields, got {}", f.len())));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| parse_err(idx + 1, format!("bad number `{s}`: {e}")))
            };
            let int = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| parse_err(idx + 1, format!("bad integer `{s}`: {e}")))
            };
            let mut betas = [0.0; 6];
            for (k, b) in betas.iter_mut().enumerate() {
                *b = num(f[5 + k])?;
            }
            rows.push(CacheRow {
                d: num(f[0])?,
                n: int(f[1])?,
                grid_size: int(f[2])?,
                c1: num(f[3])?,
                c2: num(f[4])?,
                unit_betas: Betas(betas),
            });
        }
        Ok(Self { rows })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::from(CACHE_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn rows(&self) -> &[CacheRow] {
        &self.rows
    }

    pub fn lookup(&self, d: f64, n: usize, grid_size: usize) -> Option<&CacheRow> {
        self.rows
            .iter()
            .find(|r| r.d == d && r.n == n && r.grid_size == grid_size)
    }

    pub fn get_or_compute(&mut self, d: f64, n: usize, grid_size: usize) -> Result<CacheRow> {
        if let Some(r) = self.lookup(d, n, grid_size) {
            return Ok(*r);
        }
        let row = CacheRow::from_table(&solve_gci(d, n, grid_size)?);
        self.rows.push(row);
        Ok(row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_and_rescaling() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("coefficients.csv");
        let mut cache = CoefficientCache::load(&path).unwrap();
        assert!(cache.rows().is_empty());
        let row = cache.get_or_compute(0.1, 2, 255).unwrap();
        cache.get_or_compute(0.1, 2, 255).unwrap();
        assert_eq!(cache.rows().len(), 1);
        cache.save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(CACHE_HEADER));
        let reloaded = CoefficientCache::load(&path).unwrap();
        assert_eq!(reloaded, cache);

        let table = solve_gci(0.1, 2, 255).unwrap();
        let direct = super::super::beta_coefficients(&table, 0.7, 0.3, 0.2);
        let scaled = row.betas(0.7, 0.3, 0.2);
        for k in 0..6 {
            assert!((direct.0[k] - scaled.0[k]).abs() <= 1e-15 * direct.0[k].abs());
        }
    }

    #[test]
    fn rejects_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b\n").unwrap();
        assert!(CoefficientCache::load(&path).is_err());
    }
}
