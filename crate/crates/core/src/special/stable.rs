//! Marginal density of the spectrally positive 3/2-stable process,
//!
//!   p_t(x) = 6^{-1/3} t^{-2/3} A(6^{-1/3} t^{-2/3} x),
//!
//! together with its x-derivative.  All t-dependence routes through p_1 so
//! that the scaling relations
//!
//!   p_t(x) = t^{-2/3} p_1(t^{-2/3} x),   p'_t(x) = t^{-4/3} p'_1(t^{-2/3} x)
//!
//! hold bit-for-bit by construction, not merely to a tolerance.

use super::map_airy::{log_map_airy_a, map_airy_a, map_airy_a_prime};
use super::SpecialError;

/// 6^{-1/3}
pub(crate) const SIX_M13: f64 = 0.5503212081491045;
/// 6^{-2/3}
pub(crate) const SIX_M23: f64 = 0.3028534321386899;

/// Density value together with its derivative at the same point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPair {
    pub p: f64,
    pub p_prime: f64,
}

/// t^{-2/3}, the sole time-scaling used by this module.
pub fn time_scale(t: f64) -> f64 {
    let c = t.cbrt();
    1.0 / (c * c)
}

/// p_1(x) = 6^{-1/3} A(6^{-1/3} x).  Strictly positive; underflows to 0
/// below x ~ -15 (use [`log_p1`] there).
pub fn p1(x: f64) -> f64 {
    SIX_M13 * map_airy_a(SIX_M13 * x)
}

/// p_1'(x) = 6^{-2/3} A'(6^{-1/3} x).
pub fn p1_prime(x: f64) -> f64 {
    SIX_M23 * map_airy_a_prime(SIX_M13 * x)
}

/// ln p_1(x); finite far into the left tail.
pub fn log_p1(x: f64) -> Result<f64, SpecialError> {
    Ok(log_map_airy_a(SIX_M13 * x)? + SIX_M13.ln())
}

/// (p_t(x), p'_t(x)) for t > 0.
pub fn stable_density(t: f64, x: f64) -> Result<DensityPair, SpecialError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(SpecialError::NonPositiveTime { t });
    }
    let s = time_scale(t);
    Ok(DensityPair {
        p: s * p1(s * x),
        p_prime: (s * s) * p1_prime(s * x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::test_refs;

    #[test]
    fn matches_reference_table() {
        for &(x, want) in test_refs::P1 {
            let got = p1(x);
            assert!(((got - want) / want).abs() < 1e-12, "p1({x})");
        }
        for &(x, want) in test_refs::P1_PRIME {
            let got = p1_prime(x);
            assert!(((got - want) / want).abs() < 1e-12, "p1'({x})");
        }
    }

    #[test]
    fn value_at_zero() {
        // p_1(0) = 6^{-1/3} A(0)
        let d = stable_density(1.0, 0.0).unwrap();
        assert!((d.p - 0.2848676139753767).abs() < 1e-14);
        assert!((d.p_prime + 0.2150429292508904).abs() < 1e-14);
    }

    #[test]
    fn scaling_is_bit_exact() {
        for &t in &[0.5, 2.0, 10.0] {
            for &x in &[-1.0, 0.0, 3.0] {
                let s = time_scale(t);
                let d = stable_density(t, x).unwrap();
                assert_eq!(d.p, s * p1(s * x));
                assert_eq!(d.p_prime, (s * s) * p1_prime(s * x));
            }
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        // delta = 1e-5 central differences on [-6, 6], 1e-6 absolute
        let delta = 1e-5;
        let mut x = -6.0;
        while x <= 6.0 {
            let d = stable_density(1.0, x).unwrap();
            let fd = (p1(x + delta) - p1(x - delta)) / (2.0 * delta);
            assert!(
                (d.p_prime - fd).abs() < 1e-6,
                "p' fd mismatch at {x}: {} vs {fd}",
                d.p_prime
            );
            x += 0.125;
        }
    }

    #[test]
    fn rejects_nonpositive_time() {
        assert!(stable_density(0.0, 1.0).is_err());
        assert!(stable_density(-2.0, 1.0).is_err());
        assert!(stable_density(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn strictly_positive_on_wide_range() {
        let mut x = -40.0f64;
        while x <= 40.0 {
            assert!(log_p1(x).unwrap().is_finite(), "log p1({x})");
            x += 0.25;
        }
        // representable range: plain value positive
        let mut x = -14.0f64;
        while x <= 40.0 {
            assert!(p1(x) > 0.0, "p1({x})");
            x += 0.25;
        }
    }
}
