//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use sohrlab_core::{HydroParams, IbmParams, ParticleState};

/// One-dimensional transcription of the splitting scheme on a periodic line.
///
/// The upwinding matrix is applied through an explicit eigendecomposition
/// of the block-triangular Jacobian rather than a matrix polynomial.
pub struct Line {
    pub dx: f64,
    pub rho: Vec<f64>,
    pub m1: Vec<f64>,
    pub m2: Vec<f64>,
}

fn pressure_slope(p: &HydroParams, rho: f64) -> f64 {
    let phi0 = p.f0 * p.phi_mass;
    p.v0 * p.d + p.alpha * p.mu * phi0 * (p.d + p.c2) * rho
}

fn pressure(p: &HydroParams, rho: f64) -> f64 {
    let phi0 = p.f0 * p.phi_mass;
    p.v0 * p.d * rho + 0.5 * p.alpha * p.mu * phi0 * (p.d + p.c2) * rho * rho
}

fn flux(p: &HydroParams, q: [f64; 3], g: [f64; 3]) -> [f64; 3] {
    let mu_phi0 = p.mu * p.f0 * p.phi_mass;
    let gamma = p.k0 * (p.d + p.c2);
    let speed = p.c2 * p.v0 * q[1] / q[0] - mu_phi0 * g[0];
    [
        p.c1 * p.v0 * q[1] - mu_phi0 * q[0] * g[0],
        q[1] * speed + pressure(p, q[0]) - gamma * g[1],
        q[2] * speed - gamma * g[2],
    ]
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `|A| v` for the Jacobian at `(q, g)`; Rusanov when the spectrum is
/// complex or nearly degenerate.
fn abs_jacobian(p: &HydroParams, q: [f64; 3], g: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    let mu_phi0 = p.mu * p.f0 * p.phi_mass;
    let s = -mu_phi0 * g[0];
    let a = p.c2 * p.v0;
    let (u, w) = (q[1] / q[0], q[2] / q[0]);
    let b12 = p.c1 * p.v0;
    let b21 = pressure_slope(p, q[0]) - a * u * u;
    let b22 = 2.0 * a * u + s;
    let tr = s + b22;
    let det = s * b22 - b12 * b21;
    let disc = tr * tr - 4.0 * det;
    let third = a * u + s;
    if disc < 0.0 {
        let r = third.abs().max(det.abs().sqrt());
        return [r * v[0], r * v[1], r * v[2]];
    }
    let root = disc.sqrt();
    let pair = [0.5 * (tr - root), 0.5 * (tr + root)];
    let mut all = [pair[0], pair[1], third];
    all.sort_by(f64::total_cmp);
    let radius = all[0].abs().max(all[2].abs());
    if (all[1] - all[0]).min(all[2] - all[1]) <= 1e-8 * radius {
        return [radius * v[0], radius * v[1], radius * v[2]];
    }
    // columns: eigenvectors for pair[0], pair[1], third
    let mut r = [[0.0; 3]; 3];
    for (c, &l) in pair.iter().enumerate() {
        let (x, y) = (b12, l - s);
        let z = (-a * u * w * x + a * w * y) / (l - third);
        r[0][c] = x;
        r[1][c] = y;
        r[2][c] = z;
    }
    r[2][2] = 1.0;
    let d = det3(r);
    let mut coef = [0.0; 3];
    for (c, slot) in coef.iter_mut().enumerate() {
        let mut m = r;
        for row in 0..3 {
            m[row][c] = v[row];
        }
        *slot = det3(m) / d;
    }
    let lambdas = [pair[0], pair[1], third];
    let mut out = [0.0; 3];
    for c in 0..3 {
        for row in 0..3 {
            out[row] += coef[c] * lambdas[c].abs() * r[row][c];
        }
    }
    out
}

impl Line {
    fn q(&self, i: usize) -> [f64; 3] {
        [self.rho[i], self.m1[i], self.m2[i]]
    }

    /// Conservative step followed by normalization of the momentum.
    pub fn step(&mut self, p: &HydroParams, dt: f64) {
        let n = self.rho.len();
        let grad: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                let (a, b) = (self.q(i), self.q((i + 1) % n));
                [(b[0] - a[0]) / self.dx, (b[1] - a[1]) / self.dx, (b[2] - a[2]) / self.dx]
            })
            .collect();
        let face: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                let k = (i + 1) % n;
                let (ql, qr) = (self.q(i), self.q(k));
                let (fl, fr) = (flux(p, ql, grad[i]), flux(p, qr, grad[k]));
                let mean = [0.5 * (ql[0] + qr[0]), 0.5 * (ql[1] + qr[1]), 0.5 * (ql[2] + qr[2])];
                let gm = [
                    0.5 * (grad[i][0] + grad[k][0]),
                    0.5 * (grad[i][1] + grad[k][1]),
                    0.5 * (grad[i][2] + grad[k][2]),
                ];
                let jump = [qr[0] - ql[0], qr[1] - ql[1], qr[2] - ql[2]];
                let visc = abs_jacobian(p, mean, gm, jump);
                [
                    0.5 * (fl[0] + fr[0]) - 0.5 * visc[0],
                    0.5 * (fl[1] + fr[1]) - 0.5 * visc[1],
                    0.5 * (fl[2] + fr[2]) - 0.5 * visc[2],
                ]
            })
            .collect();
        let c = dt / self.dx;
        for i in 0..n {
            let w = face[(i + n - 1) % n];
            let e = face[i];
            self.rho[i] -= c * (e[0] - w[0]);
            self.m1[i] -= c * (e[1] - w[1]);
            self.m2[i] -= c * (e[2] - w[2]);
            let norm = self.m1[i].hypot(self.m2[i]);
            self.m1[i] *= self.rho[i] / norm;
            self.m2[i] *= self.rho[i] / norm;
        }
    }
}

fn periodic_delta(a: [f64; 2], b: [f64; 2], lx: f64, ly: f64) -> [f64; 2] {
    let fold = |d: f64, l: f64| d - l * (d / l).round();
    [fold(a[0] - b[0], lx), fold(a[1] - b[1], ly)]
}

/// `∇Φ` at every particle by the double loop over pairs, with the quadratic
/// well `φ(s) = (1 - s)²` on `s ≤ 1`.
pub fn direct_gradient(s: &ParticleState, p: &IbmParams) -> Vec<[f64; 2]> {
    let h = p.epsilon * p.r;
    let w = p.mass / p.n as f64;
    let mut out = vec![[0.0; 2]; s.len()];
    for k in 0..s.len() {
        for i in 0..s.len() {
            let d = periodic_delta(s.positions[k], s.positions[i], s.lx, s.ly);
            let dist = d[0].hypot(d[1]);
            if dist == 0.0 || dist > h {
                continue;
            }
            let slope = 2.0 * (dist / h - 1.0);
            let f = w / (h * h) * slope / h / dist;
            out[k][0] += f * d[0];
            out[k][1] += f * d[1];
        }
    }
    out
}

/// Normalized `(1/N) Σ K ω_i` with `K = 1/π` on the ball of radius `√ε R`.
pub fn direct_alignment(s: &ParticleState, p: &IbmParams, k: usize) -> Option<[f64; 2]> {
    let radius = p.epsilon.sqrt() * p.big_r;
    let mut j = [0.0; 2];
    for i in 0..s.len() {
        let d = periodic_delta(s.positions[k], s.positions[i], s.lx, s.ly);
        if d[0].hypot(d[1]) <= radius {
            j[0] += s.angles[i].cos() / std::f64::consts::PI;
            j[1] += s.angles[i].sin() / std::f64::consts::PI;
        }
    }
    j[0] /= s.len() as f64;
    j[1] /= s.len() as f64;
    let n = j[0].hypot(j[1]);
    (n >= 1e-12).then(|| [j[0] / n, j[1] / n])
}

/// Euler-Maruyama step written out scalar by scalar.
pub fn scalar_ibm_step(s: &ParticleState, p: &IbmParams, xi: &[f64]) -> (Vec<[f64; 2]>, Vec<f64>) {
    let grad = direct_gradient(s, p);
    let mut pos = Vec::new();
    let mut ang = Vec::new();
    for k in 0..s.len() {
        let phi = s.angles[k];
        let (ux, uy) = (-p.mu * grad[k][0], -p.mu * grad[k][1]);
        let tame = 1.0 + p.dt * (ux * ux + uy * uy).sqrt() / (p.epsilon * p.r);
        let vx = phi.cos() + ux / tame;
        let vy = phi.sin() + uy / tame;
        let target = direct_alignment(s, p, k).unwrap_or([phi.cos(), phi.sin()]);
        let align = -phi.sin() * target[0] + phi.cos() * target[1];
        let repel = -phi.sin() * vx + phi.cos() * vy;
        let dphi = (align / p.epsilon + p.alpha * repel) * p.dt + (2.0 * p.d * p.dt / p.epsilon).sqrt() * xi[k];
        let x = (s.positions[k][0] + vx * p.dt).rem_euclid(s.lx);
        let y = (s.positions[k][1] + vy * p.dt).rem_euclid(s.ly);
        pos.push([x, y]);
        ang.push(phi + dphi);
    }
    (pos, ang)
}
