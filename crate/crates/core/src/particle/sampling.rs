//! Initial particle configurations.

use std::f64::consts::PI;

use rand::Rng;

/// Von Mises angle with mean `mean` and concentration `kappa` (Best-Fisher).
///
/// On the circle this is the VMF law with `kappa = 1/d`.
pub fn sample_von_mises(rng: &mut impl Rng, mean: f64, kappa: f64) -> f64 {
    if kappa < 1e-8 {
        return mean + PI * (2.0 * rng.random::<f64>() - 1.0);
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let sign = if rng.random::<f64>() < 0.5 { -1.0 } else { 1.0 };
            return mean + sign * f.clamp(-1.0, 1.0).acos();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gci::c1;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mean_resultant_matches_order_parameter() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [0.1, 1.0] {
            let n = 200_000;
            let (mut sc, mut ss) = (0.0, 0.0);
            for _ in 0..n {
                let t = sample_von_mises(&mut rng, 0.4, 1.0 / d);
                sc += (t - 0.4).cos();
                ss += (t - 0.4).sin();
            }
            let expected = c1(d, 2).unwrap();
            assert!((sc / n as f64 - expected).abs() < 5e-3, "d = {d}");
            assert!((ss / n as f64).abs() < 5e-3);
        }
    }
}
