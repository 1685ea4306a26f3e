mod common;

use sohrlab_core::experiment::{ExperimentConfig, ExperimentKind, Preset};
use sohrlab_core::sohr::{
    conservative_step, relaxation_step, run, run_with, Boundary, RunSpec, TimeStep,
};
use sohrlab_core::{FieldState, GridSpec, HydroParams, ModelMode};

fn riemann_strip(nx: usize, ny: usize) -> (FieldState, HydroParams) {
    let c = ExperimentConfig::preset(ExperimentKind::Riemann).unwrap();
    let grid = GridSpec::new(nx, ny, 10.0, 10.0 * ny as f64 / nx as f64, Boundary::Periodic).unwrap();
    (Preset::Riemann.field(grid).0, c.hydro)
}

#[test]
fn y_uniform_strip_matches_line_reference() {
    let (start, p) = riemann_strip(40, 4);
    let g = start.grid;
    let mut line = common::Line {
        dx: g.dx(),
        rho: (0..g.nx).map(|i| start.rho[g.index(i, 0)]).collect(),
        m1: (0..g.nx).map(|i| start.mom[g.index(i, 0)][0]).collect(),
        m2: (0..g.nx).map(|i| start.mom[g.index(i, 0)][1]).collect(),
    };
    let dt = 0.01;
    let mut spec = RunSpec::new(p, 0.4, TimeStep::Fixed(dt));
    spec.snapshot_times = vec![0.4];
    let mut worst: f64 = 0.0;
    let mut steps = 0;
    run_with(&start, &spec, |s, _| {
        line.step(&p, dt);
        steps += 1;
        for j in 0..g.ny {
            for i in 0..g.nx {
                let k = g.index(i, j);
                worst = worst
                    .max((s.rho[k] - line.rho[i]).abs())
                    .max((s.mom[k][0] - line.m1[i]).abs())
                    .max((s.mom[k][1] - line.m2[i]).abs());
            }
        }
        Ok(())
    })
    .unwrap();
    assert_eq!(steps, 40);
    assert!(worst <= 1e-12, "max deviation {worst:e}");
}

#[test]
fn soh_mode_is_sohr_without_repulsion() {
    let c = ExperimentConfig::preset(ExperimentKind::FourVortex).unwrap();
    let grid = GridSpec::new(20, 20, 10.0, 10.0, Boundary::Periodic).unwrap();
    let start = Preset::FourVortex.field(grid).0;
    let mut soh = c.hydro;
    soh.mode = ModelMode::Soh;
    let mut bare = c.hydro;
    bare.f0 = 0.0;
    let a = run(&start, &RunSpec::new(soh, 0.5, TimeStep::Fixed(0.01))).unwrap();
    let b = run(&start, &RunSpec::new(bare, 0.5, TimeStep::Fixed(0.01))).unwrap();
    assert_eq!(a.final_state, b.final_state);
    assert_eq!(a.stats.steps, 50);
}

#[test]
fn periodic_mass_and_unit_norm_over_a_thousand_steps() {
    let c = ExperimentConfig::preset(ExperimentKind::FourVortex).unwrap();
    let grid = GridSpec::new(20, 20, 10.0, 10.0, Boundary::Periodic).unwrap();
    let start = Preset::FourVortex.field(grid).0;
    let mass0 = start.total_mass();
    let mut worst_norm: f64 = 0.0;
    let spec = RunSpec::new(c.hydro, 5.0, TimeStep::Fixed(0.005));
    let out = run_with(&start, &spec, |s, _| {
        worst_norm = worst_norm.max(s.unit_norm_defect());
        Ok(())
    })
    .unwrap();
    assert_eq!(out.stats.steps, 1000);
    let drift = (out.final_state.total_mass() - mass0).abs() / mass0;
    assert!(drift <= 1e-12, "mass drift {drift:e}");
    assert!(worst_norm <= 1e-12, "unit norm defect {worst_norm:e}");
}

#[test]
fn constant_state_stays_put() {
    let p = HydroParams::reference().unwrap();
    let grid = GridSpec::new(12, 8, 3.0, 2.0, Boundary::Periodic).unwrap();
    let start = FieldState::from_angle_fn(grid, |_, _| (0.8, 2.1));
    let out = run(&start, &RunSpec::new(p, 10.0, TimeStep::Fixed(0.01))).unwrap();
    assert_eq!(out.stats.steps, 1000);
    for k in 0..grid.cells() {
        assert!((out.final_state.rho[k] - start.rho[k]).abs() <= 1e-12);
        assert!((out.final_state.mom[k][0] - start.mom[k][0]).abs() <= 1e-12);
        assert!((out.final_state.mom[k][1] - start.mom[k][1]).abs() <= 1e-12);
    }
}

/// `dΩ/dt = (1 - |Ω|²) Ω / η` by classical RK4.
fn rk4_relaxation(omega: [f64; 2], eta: f64, t: f64, steps: usize) -> [f64; 2] {
    let f = |o: [f64; 2]| {
        let s = (1.0 - (o[0] * o[0] + o[1] * o[1])) / eta;
        [s * o[0], s * o[1]]
    };
    let h = t / steps as f64;
    let mut o = omega;
    for _ in 0..steps {
        let k1 = f(o);
        let k2 = f([o[0] + 0.5 * h * k1[0], o[1] + 0.5 * h * k1[1]]);
        let k3 = f([o[0] + 0.5 * h * k2[0], o[1] + 0.5 * h * k2[1]]);
        let k4 = f([o[0] + h * k3[0], o[1] + h * k3[1]]);
        for c in 0..2 {
            o[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    o
}

#[test]
fn relaxation_matches_fine_ode_integration() {
    let grid = GridSpec::new(4, 4, 1.0, 1.0, Boundary::Periodic).unwrap();
    let angle: f64 = 0.7;
    for (m0, ratio) in [(0.25, 10.0), (0.25, 0.5), (2.0, 1.0), (0.9, 3.0)] {
        let amp = f64::sqrt(m0);
        let s = FieldState::from_fn(grid, |_, _| (1.7, [amp * angle.cos(), amp * angle.sin()]));
        let eta = 0.1;
        let (out, rep) = relaxation_step(&s, eta, ratio * eta, [1.0, 0.0]);
        assert_eq!(rep.zero_momentum, 0);
        let exact = rk4_relaxation([amp * angle.cos(), amp * angle.sin()], eta, ratio * eta, 200_000);
        let om = out.omega(0).unwrap();
        let err = (om[0] - exact[0]).abs().max((om[1] - exact[1]).abs());
        assert!(err <= 1e-10, "m0 = {m0}, dt/eta = {ratio}: {err:e}");
    }
}

#[test]
fn small_eta_approaches_normalization() {
    let (start, p) = riemann_strip(40, 40);
    let dt = 0.01;
    let mut exact = RunSpec::new(p, 1.0, TimeStep::Fixed(dt));
    exact.eta = 0.0;
    let mut relaxed = exact.clone();
    relaxed.eta = 1e-6;
    let a = run(&start, &exact).unwrap();
    let b = run(&start, &relaxed).unwrap();
    assert_eq!(a.stats.steps, 100);
    let gap = a
        .final_state
        .mom
        .iter()
        .zip(&b.final_state.mom)
        .map(|(x, y)| (x[0] - y[0]).abs().max((x[1] - y[1]).abs()))
        .fold(0.0, f64::max);
    assert!(gap <= 1e-6, "{gap:e}");
}

#[test]
fn dirichlet_frame_is_held() {
    let c = ExperimentConfig::preset(ExperimentKind::Convergence).unwrap();
    let grid = GridSpec::new(16, 16, 10.0, 10.0, Boundary::FixedDirichlet).unwrap();
    let start = Preset::Vortex.field(grid).0;
    let (out, _) = conservative_step(&start, 0.001, &c.hydro, Some(&start)).unwrap();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let k = grid.index(i, j);
            if grid.is_frame(i, j) {
                assert_eq!(out.rho[k], start.rho[k]);
                assert_eq!(out.mom[k], start.mom[k]);
            }
        }
    }
    assert!(conservative_step(&start, 0.001, &c.hydro, None).is_err());
}
