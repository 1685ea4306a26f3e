use std::f64::consts::PI;

use sohrlab_core::gci::{
    c1, kernel_moment_k0, potential_mass_phi0, solve_gci, vmf_pdf, KernelSpec, VmfParams, TABULATION_GRID,
};

/// Periodic trapezoid rule on `[0, 2π)`.
fn circle_average(f: impl Fn(f64) -> f64, points: usize) -> f64 {
    let h = 2.0 * PI / points as f64;
    (0..points).map(|k| f(k as f64 * h)).sum::<f64>() * h
}

#[test]
fn vmf_density_at_the_axis() {
    let z = circle_average(|t| t.cos().exp(), 1_000_000);
    let expected = 1f64.exp() / z;
    let p = VmfParams::new(1.0, 2, vec![1.0, 0.0]).unwrap();
    let value = vmf_pdf(&[1.0, 0.0], &p).unwrap();
    assert!((value - expected).abs() < 1e-12, "{value} vs {expected}");
    assert!((value - 0.34171).abs() < 5e-6);
}

#[test]
fn order_parameter_from_quadrature_and_closed_form() {
    for d in [0.05, 0.1, 0.5, 1.0, 2.0] {
        let num = circle_average(|t| t.cos() * ((t.cos() - 1.0) / d).exp(), 1_000_000);
        let den = circle_average(|t| ((t.cos() - 1.0) / d).exp(), 1_000_000);
        let got = c1(d, 2).unwrap();
        assert!((got - num / den).abs() < 1e-10, "d = {d}: {got} vs {}", num / den);
        let coth = 1.0 / (1.0 / d).tanh();
        let got3 = c1(d, 3).unwrap();
        assert!((got3 - (coth - d)).abs() < 1e-10, "n = 3, d = {d}");
    }
    assert!((c1(1.0, 2).unwrap() - 0.44639).abs() < 5e-6);
}

/// `c2` for `n = 2` by shooting: `g'' = (sin θ / d) g' - sin θ` from `g(0) = 0`,
/// with the slope at 0 chosen so that `g(π) = 0`; the two VMF moments are
/// integrated along the trajectory.
fn c2_by_shooting(d: f64, steps: usize) -> f64 {
    let shoot = |slope: f64| -> [f64; 4] {
        // y = (g, g', ∫ sin θ g e^{(cos θ - 1)/d}, ∫ sin θ cos θ g e^{(cos θ - 1)/d})
        let rhs = |t: f64, y: [f64; 4]| {
            let (s, c) = t.sin_cos();
            let w = ((c - 1.0) / d).exp();
            [y[1], s / d * y[1] - s, s * y[0] * w, s * c * y[0] * w]
        };
        let h = PI / steps as f64;
        let mut y = [0.0, slope, 0.0, 0.0];
        for k in 0..steps {
            let t = k as f64 * h;
            let k1 = rhs(t, y);
            let k2 = rhs(t + 0.5 * h, std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]));
            let k3 = rhs(t + 0.5 * h, std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]));
            let k4 = rhs(t + h, std::array::from_fn(|i| y[i] + h * k3[i]));
            for i in 0..4 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        y
    };
    // the end value is affine in the slope; one secant step is exact
    let (a, b) = (shoot(0.0), shoot(1.0));
    let slope = -a[0] / (b[0] - a[0]);
    let y = shoot(slope);
    y[3] / y[2]
}

#[test]
fn c2_matches_shooting_oracle() {
    for d in [1.0, 0.5, 0.2] {
        let oracle = c2_by_shooting(d, 200_000);
        let got = solve_gci(d, 2, TABULATION_GRID).unwrap().c2;
        assert!((got - oracle).abs() < 1e-3, "d = {d}: {got} vs {oracle}");
    }
}

#[test]
fn gci_discretization_converges_at_second_order() {
    let c = |m: usize| solve_gci(1.0, 2, m).unwrap().c2;
    let (a, b, e) = (c(255), c(511), c(1023));
    let ratio = (a - b) / (b - e);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn kernel_moments() {
    let normalized = KernelSpec::indicator_ball(1.0).normalized(2);
    assert!((kernel_moment_k0(&normalized, 2) - 0.125).abs() < 1e-10);
    assert!((kernel_moment_k0(&KernelSpec::indicator_ball(1.0), 2) - PI / 8.0).abs() < 1e-10);
    assert!((kernel_moment_k0(&KernelSpec::indicator_ball(1.0), 3) - 2.0 * PI / 15.0).abs() < 1e-10);
    assert!((potential_mass_phi0(&KernelSpec::quadratic_well(1.0), 2) - PI / 6.0).abs() < 1e-10);
}
