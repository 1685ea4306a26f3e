//! Uniform cell lists on a periodic rectangle.

/// Bucketing of points into square-ish cells of side at least `radius`.
#[derive(Debug, Clone)]
pub struct CellList {
    ncx: usize,
    ncy: usize,
    cw: f64,
    ch: f64,
    start: Vec<usize>,
    items: Vec<usize>,
}

impl CellList {
    pub fn build(points: &[[f64; 2]], lx: f64, ly: f64, radius: f64) -> Self {
        let ncx = ((lx / radius).floor() as usize).max(1);
        let ncy = ((ly / radius).floor() as usize).max(1);
        let (cw, ch) = (lx / ncx as f64, ly / ncy as f64);
        let mut list = Self {
            ncx,
            ncy,
            cw,
            ch,
            start: vec![0; ncx * ncy + 1],
            items: vec![0; points.len()],
        };
        let cell_of: Vec<usize> = points.iter().map(|p| list.cell_of(*p)).collect();
        for &c in &cell_of {
            list.start[c + 1] += 1;
        }
        for c in 0..ncx * ncy {
            list.start[c + 1] += list.start[c];
        }
        let mut fill = list.start.clone();
        for (idx, &c) in cell_of.iter().enumerate() {
            list.items[fill[c]] = idx;
            fill[c] += 1;
        }
        list
    }

    fn cell_of(&self, p: [f64; 2]) -> usize {
        let cx = ((p[0] / self.cw) as usize).min(self.ncx - 1);
        let cy = ((p[1] / self.ch) as usize).min(self.ncy - 1);
        cy * self.ncx + cx
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.ncx, self.ncy)
    }

    /// Calls `f(j)` once for every point in the 3×3 block of cells around `p`.
    pub fn for_each_candidate(&self, p: [f64; 2], mut f: impl FnMut(usize)) {
        let c = self.cell_of(p);
        let (cx, cy) = (c % self.ncx, c / self.ncx);
        let xs = neighbor_indices(cx, self.ncx);
        let ys = neighbor_indices(cy, self.ncy);
        for &y in ys.as_slice() {
            for &x in xs.as_slice() {
                let cell = y * self.ncx + x;
                for &j in &self.items[self.start[cell]..self.start[cell + 1]] {
                    f(j);
                }
            }
        }
    }
}

struct Neighbors {
    idx: [usize; 3],
    len: usize,
}

impl Neighbors {
    fn as_slice(&self) -> &[usize] {
        &self.idx[..self.len]
    }
}

/// Distinct periodic neighbours of `c` among `n` cells (fewer than three when `n < 3`).
fn neighbor_indices(c: usize, n: usize) -> Neighbors {
    let mut out = Neighbors { idx: [0; 3], len: 0 };
    for off in [n - 1, 0, 1] {
        let v = (c + off) % n;
        if !out.as_slice().contains(&v) {
            out.idx[out.len] = v;
            out.len += 1;
        }
    }
    out
}

/// Minimum-image displacement `a - b` in a periodic box.
#[inline]
pub fn min_image(a: [f64; 2], b: [f64; 2], lx: f64, ly: f64) -> [f64; 2] {
    let mut dx = a[0] - b[0];
    let mut dy = a[1] - b[1];
    dx -= lx * (dx / lx).round();
    dy -= ly * (dy / ly).round();
    [dx, dy]
}
