//! Property tests for structural invariants.

use proptest::prelude::*;
use sphere_profile_core::mc::ks_two_sample;
use sphere_profile_core::rng::{stream, StreamDomain};
use sphere_profile_core::sde::{simulate_z, simulate_z_lambda, SimConfig};
use sphere_profile_core::special::{drift_h, map_airy_a, stable_density, time_scale, p1, p1_prime};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// h(t, x) > 0 everywhere on a wide parameter box.
    #[test]
    fn drift_h_positive(t in 1e-3f64..500.0, x in -200.0f64..200.0) {
        prop_assert!(drift_h(t, x).unwrap() > 0.0);
    }

    /// The map-Airy kernel is strictly positive where representable.
    #[test]
    fn map_airy_positive(x in -8.0f64..60.0) {
        prop_assert!(map_airy_a(x) > 0.0);
    }

    /// p_t scaling routes exactly through p_1.
    #[test]
    fn stable_scaling_bit_exact(t in 1e-2f64..50.0, x in -30.0f64..30.0) {
        let d = stable_density(t, x).unwrap();
        let s = time_scale(t);
        prop_assert_eq!(d.p.to_bits(), (s * p1(s * x)).to_bits());
        prop_assert_eq!(d.p_prime.to_bits(), ((s * s) * p1_prime(s * x)).to_bits());
    }

    /// Trapezoidal running integral is exact and paths are reproducible.
    #[test]
    fn path_integral_is_exact_trapezoid(seed in 0u64..1000, w0 in -5.0f64..5.0) {
        let cfg = SimConfig { dt: 5e-3, ..SimConfig::with_seed(seed) };
        let p = simulate_z(w0, 0.5, &cfg, stream(seed, StreamDomain::ZPath, 1)).unwrap();
        let mut acc = 0.0f64;
        for k in 1..p.len() {
            acc += 0.5 * p.dt * (p.values[k - 1] + p.values[k]);
            prop_assert_eq!(acc.to_bits(), p.running_integral[k].to_bits());
        }
        let q = simulate_z(w0, 0.5, &cfg, stream(seed, StreamDomain::ZPath, 1)).unwrap();
        prop_assert_eq!(p.values, q.values);
    }

    /// Lambda stays positive and log Lambda + int Z vanishes to round-off.
    #[test]
    fn lambda_log_identity(seed in 0u64..1000, lam in 1e-3f64..100.0) {
        let cfg = SimConfig { dt: 5e-3, ..SimConfig::with_seed(seed) };
        let zl = simulate_z_lambda(0.0, lam, 0.5, &cfg, stream(seed, StreamDomain::ZPath, 2)).unwrap();
        for k in 0..zl.path.len() {
            prop_assert!(zl.lambda[k] > 0.0);
            let defect = zl.lambda[k].ln() + zl.path.running_integral[k] - lam.ln();
            prop_assert!(defect.abs() < 1e-10);
        }
    }

    /// KS statistic lies in [0, 1], is symmetric, and vanishes on equal samples.
    #[test]
    fn ks_statistic_shape(seed in 0u64..500) {
        let mut rng = stream(seed, StreamDomain::Calibration, 77);
        let a: Vec<f64> = (0..60).map(|_| rng.std_normal()).collect();
        let b: Vec<f64> = (0..45).map(|_| rng.std_normal()).collect();
        let ab = ks_two_sample(&a, &b).unwrap();
        let ba = ks_two_sample(&b, &a).unwrap();
        prop_assert!(ab.statistic >= 0.0 && ab.statistic <= 1.0);
        prop_assert_eq!(ab.statistic.to_bits(), ba.statistic.to_bits());
        prop_assert!(ab.p_value >= 0.0 && ab.p_value <= 1.0);
        let aa = ks_two_sample(&a, &a).unwrap();
        prop_assert_eq!(aa.statistic, 0.0);
    }
}
