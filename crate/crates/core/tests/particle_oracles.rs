mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sohrlab_core::particle::{
    deposit_fields, ensemble_run, ibm_run, ibm_step, mean_orientations, repulsion_gradient, CounterNoise, FixedNoise,
};
use sohrlab_core::sohr::Boundary;
use sohrlab_core::{GridSpec, IbmParams, ParticleState};

fn cloud(n: usize, lx: f64, ly: f64, seed: u64) -> ParticleState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions = (0..n).map(|_| [rng.random::<f64>() * lx, rng.random::<f64>() * ly]).collect();
    let angles = (0..n).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
    ParticleState::new(lx, ly, positions, angles).unwrap()
}

#[test]
fn cell_list_forces_equal_direct_sums() {
    // the smallest box leaves fewer than three cells per side
    for (n, l, eps) in [(512, 0.6, 0.5), (512, 0.08, 1.0), (200, 0.1, 0.05), (64, 0.3, 1.0)] {
        let s = cloud(n, l, l, n as u64);
        let p = IbmParams::new(n, eps, 1.0, 1);
        let fast = repulsion_gradient(&s, &p);
        let slow = common::direct_gradient(&s, &p);
        let mut interacting = 0;
        for (a, b) in fast.iter().zip(&slow) {
            for c in 0..2 {
                assert!((a[c] - b[c]).abs() <= 1e-12 * (1.0 + b[c].abs()), "{a:?} vs {b:?}");
            }
            interacting += (b[0] != 0.0 || b[1] != 0.0) as usize;
        }
        assert!(interacting > n / 4, "only {interacting} particles interact");
    }
}

#[test]
fn cell_list_alignment_equals_direct_sums() {
    let n = 400;
    let s = cloud(n, 2.0, 1.0, 9);
    let p = IbmParams::new(n, 0.5, 1.0, 1);
    let fast = mean_orientations(&s, &p);
    for k in 0..n {
        let a = fast[k].unwrap();
        let b = common::direct_alignment(&s, &p, k).unwrap();
        assert!((a[0] - b[0]).abs() <= 1e-12 && (a[1] - b[1]).abs() <= 1e-12);
    }
}

#[test]
fn three_particle_step_matches_scalar_transcription() {
    let positions = vec![[1.0, 1.0], [1.02, 1.01], [0.99, 1.03]];
    let angles = vec![0.3, 1.2, -0.4];
    let s = ParticleState::new(2.0, 2.0, positions, angles).unwrap();
    let mut p = IbmParams::new(3, 0.5, 0.5, 4);
    p.r = 0.1;
    p.big_r = 0.1;
    p.mu = 0.7;
    p.alpha = 0.9;
    p.dt = 0.01;
    let xi = vec![0.4, -1.3, 0.8];
    let (next, rep) = ibm_step(&s, &p, &FixedNoise(xi.clone())).unwrap();
    assert_eq!(rep.degenerate, 0);
    let (pos, ang) = common::scalar_ibm_step(&s, &p, &xi);
    for k in 0..3 {
        assert!((next.positions[k][0] - pos[k][0]).abs() <= 1e-12);
        assert!((next.positions[k][1] - pos[k][1]).abs() <= 1e-12);
        assert!((next.angles[k] - ang[k]).abs() <= 1e-12);
    }
    // the pair forces are active in this configuration
    let g = common::direct_gradient(&s, &p);
    assert!(g.iter().all(|v| v[0].hypot(v[1]) > 0.0));
}

#[test]
fn uniform_deposit_obeys_binomial_statistics() {
    let n = 1_000_000;
    let s = cloud(n, 10.0, 10.0, 12);
    let grid = GridSpec::new(10, 10, 10.0, 10.0, Boundary::Periodic).unwrap();
    let mass = 1.0;
    let f = deposit_fields(&s, &grid, mass).unwrap();
    let cells = grid.cells() as f64;
    let p = 1.0 / cells;
    let sigma_count = (n as f64 * p * (1.0 - p)).sqrt();
    let per_particle = mass / n as f64 / (grid.dx() * grid.dy());
    let expected = mass / 100.0;
    for &rho in &f.rho {
        assert!((rho - expected).abs() <= 5.0 * sigma_count * per_particle, "{rho}");
    }
    assert!((f.total_mass() - mass).abs() < 1e-12);
}

#[test]
fn trajectories_are_reproducible_at_any_thread_count() {
    let n = 300;
    let s = cloud(n, 1.0, 1.0, 5);
    let p = IbmParams::new(n, 0.2, 1.0, 8);
    let noise = CounterNoise { seed: 8 };
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = serial.install(|| ibm_run(&s, &p, &noise, 0.1).unwrap());
    let b = wide.install(|| ibm_run(&s, &p, &noise, 0.1).unwrap());
    let c = ibm_run(&s, &p, &noise, 0.1).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.0.step, 10);
}

#[test]
fn ensemble_realizations_depend_only_on_their_seed() {
    let n = 200;
    let grid = GridSpec::new(4, 4, 1.0, 1.0, Boundary::Periodic).unwrap();
    let p = IbmParams::new(n, 0.5, 1.0, 3);
    let init = |seed: u64| Ok(cloud(n, 1.0, 1.0, seed));
    let three = ensemble_run(init, &p, &grid, 0.05, 3).unwrap();
    let five = ensemble_run(init, &p, &grid, 0.05, 5).unwrap();
    assert_eq!(three.fields[..], five.fields[..3]);
    assert_eq!(three.average, five.prefix_average(3).unwrap());
}
