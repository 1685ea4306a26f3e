//! Fixed-rule quadratures on uniform grids.

/// Composite Simpson rule for samples `f` on a uniform grid of spacing `h`.
///
/// Works for any number of intervals: an odd interval count is closed with the
/// Simpson 3/8 rule on the last three intervals.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (f[0] + f[1]),
        3 => h / 3.0 * (f[0] + 4.0 * f[1] + f[2]),
        4 => 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]),
        _ => {
            let intervals = n - 1;
            let (even_end, tail) = if intervals % 2 == 0 {
                (n - 1, 0.0)
            } else {
                let k = n - 4;
                (
                    k,
                    3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]),
                )
            };
            let mut acc = f[0] + f[even_end];
            for (i, v) in f.iter().enumerate().take(even_end).skip(1) {
                acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            acc * h / 3.0 + tail
        }
    }
}

/// Integrates `f` over `[a, b]` with `intervals` Simpson panels.
pub fn simpson_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let intervals = intervals.max(2);
    let h = (b - a) / intervals as f64;
    let samples: Vec<f64> = (0..=intervals).map(|i| f(a + i as f64 * h)).collect();
    simpson(&samples, h)
}

/// Surface measure of the unit sphere `S^{k}` embedded in `R^{k+1}`.
pub fn sphere_area(k: usize) -> f64 {
    use std::f64::consts::PI;
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (k as f64 - 1.0) * sphere_area(k - 2),
    }
}
