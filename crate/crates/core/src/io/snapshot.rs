//! Field snapshots as CSV: `x,y,rho,omega_x,omega_y`, one row per cell,
//! `j` outer and `i` inner. Undefined orientations are written as `NaN`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sohr::{FieldState, GridSpec};

pub const SNAPSHOT_HEADER: &str = "x,y,rho,omega_x,omega_y";

pub fn snapshot_csv(state: &FieldState) -> String {
    let g = state.grid;
    let mut s = String::with_capacity(96 * g.cells() + 32);
    s.push_str(SNAPSHOT_HEADER);
    s.push('\n');
    for j in 0..g.ny {
        for i in 0..g.nx {
            let k = g.index(i, j);
            let (x, y) = g.center(i, j);
            let [ox, oy] = state.omega(k).unwrap_or([f64::NAN, f64::NAN]);
            writeln!(s, "{x:.16e},{y:.16e},{:.16e},{ox:.16e},{oy:.16e}", state.rho[k]).expect("string write");
        }
    }
    s
}

pub fn write_snapshot(state: &FieldState, path: &Path) -> Result<()> {
    super::write_text(path, &snapshot_csv(state))
}

/// Parses a snapshot on a known grid.
pub fn parse_snapshot(text: &str, grid: &GridSpec, path: &Path) -> Result<FieldState> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SNAPSHOT_HEADER => {}
        Some((_, h)) => return Err(err(1, format!("expected header `{SNAPSHOT_HEADER}`, found `{h}`"))),
        None => return Err(err(1, "empty snapshot file".into())),
    }
    let mut state = FieldState::zeros(*grid);
    let mut row = 0;
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        if row >= grid.cells() {
            return Err(err(lineno, format!("more rows than the {} cells of the grid", grid.cells())));
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(lineno, format!("row {row}: {e}")))?;
        if vals.len() != 5 {
            return Err(err(lineno, format!("row {row}: expected 5 columns, found {}", vals.len())));
        }
        let (i, j) = (row % grid.nx, row / grid.nx);
        let (x, y) = grid.center(i, j);
        let tol = 1e-9 * grid.dx().min(grid.dy());
        if (vals[0] - x).abs() > tol || (vals[1] - y).abs() > tol {
            return Err(err(
                lineno,
                format!("row {row}: cell center ({}, {}) does not match the grid ({x}, {y})", vals[0], vals[1]),
            ));
        }
        let k = grid.index(i, j);
        state.rho[k] = vals[2];
        if vals[3].is_nan() || vals[4].is_nan() {
            state.missing[k] = true;
        } else {
            state.mom[k] = [vals[2] * vals[3], vals[2] * vals[4]];
        }
        row += 1;
    }
    if row != grid.cells() {
        return Err(err(
            text.lines().count().max(1),
            format!("found {row} rows, the grid has {} cells", grid.cells()),
        ));
    }
    Ok(state)
}

pub fn read_snapshot(path: &Path, grid: &GridSpec) -> Result<FieldState> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&text, grid, path)
}

/// File name of the snapshot at time `t`.
pub fn snapshot_name(prefix: &str, t: f64) -> String {
    format!("{prefix}_t{t:09.4}.csv")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sohr::Boundary;

    #[test]
    fn round_trip_small_field() {
        let g = GridSpec::new(4, 4, 1.0, 2.0, Boundary::Periodic).unwrap();
        let mut s = FieldState::from_angle_fn(g, |x, y| (1.0 / 3.0 + x * y, x - 0.7 * y));
        s.rho[3] = 0.0;
        s.mom[3] = [0.0, 0.0];
        s.missing[3] = true;
        let text = snapshot_csv(&s);
        assert_eq!(text.lines().next().unwrap(), "x,y,rho,omega_x,omega_y");
        let back = parse_snapshot(&text, &g, Path::new("s.csv")).unwrap();
        for k in 0..g.cells() {
            assert_eq!(back.rho[k], s.rho[k]);
            assert_eq!(back.missing[k], s.missing[k]);
            for c in 0..2 {
                assert!((back.mom[k][c] - s.mom[k][c]).abs() <= 1e-15 * s.rho[k].max(1.0));
            }
        }
    }

    #[test]
    fn malformed_inputs() {
        let g = GridSpec::new(4, 4, 1.0, 1.0, Boundary::Periodic).unwrap();
        let s = FieldState::from_angle_fn(g, |_, _| (1.0, 0.0));
        let text = snapshot_csv(&s);
        let short: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(parse_snapshot(&short, &g, Path::new("s")).unwrap_err().to_string().contains("9 rows"));
        let bad = text.replacen("1.0000000000000000e0", "one", 1);
        let e = parse_snapshot(&bad, &g, Path::new("s")).unwrap_err().to_string();
        assert!(e.contains("s:2:") && e.contains("row 0"), "{e}");
        assert!(parse_snapshot("a,b\n", &g, Path::new("s")).is_err());
        let other = GridSpec::new(8, 4, 1.0, 1.0, Boundary::Periodic).unwrap();
        assert!(parse_snapshot(&text, &other, Path::new("s")).is_err());
    }
}
