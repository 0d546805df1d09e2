//! The map-Airy density kernel
//!
//!   A(x) = -2 e^{2x^3/3} ( x Ai(x^2) + Ai'(x^2) ),
//!
//! its derivative (obtained once from the Airy equation Ai''(y) = y Ai(y)):
//!
//!   A'(x) = -2 e^{2x^3/3} ( (4x^3+1) Ai(x^2) + 4x^2 Ai'(x^2) ),
//!
//! the logarithmic-derivative ratio A'/A, and
//!
//!   kappa(x) = Ai(x^2) / ( x Ai(x^2) + Ai'(x^2) ).
//!
//! x Ai(x^2) + Ai'(x^2) is negative for every real x, so A > 0 everywhere
//! and kappa < 0 everywhere.
//!
//! Branches (cut at |x| = 3.0, Airy argument x^2 = 9):
//!  * |x| <= 3.0 — unscaled double-double Airy values; the explicit
//!    exp(2x^3/3) factor stays within f64 range (|exponent| <= 18).
//!  * x > 3.0 — scaled Airy values e^{zeta} Ai(x^2) with zeta = (2/3)x^3;
//!    the exponentials cancel exactly, leaving pure power-law behaviour
//!    A(x) ~ x^{-5/2}/(4 sqrt(pi)).
//!  * x < -3.0 — scaled values with the residual factor e^{-(4/3)|x|^3},
//!    kept in log space on demand (A underflows below x ~ -8.3).
//!
//! The combinations x Ai + Ai' and (4x^3+1) Ai + 4x^2 Ai' cancel severely
//! for x > 0 (amplification ~ 4x^3 resp. ~ 32x^6/5); they are formed in
//! double-double, which keeps >= 12 correct digits out to |x| ~ 400.

use super::airy::{airy_maclaurin_dd, SERIES_CUT};
use super::dd::Dd;
use super::SpecialError;

/// Branch cut on the map-Airy argument; squares onto the Airy series cut.
const COMBO_CUT: f64 = 3.0;

const _: () = assert!(COMBO_CUT * COMBO_CUT <= SERIES_CUT);

/// Largest |x| for which (4/3)|x|^3 is finite in f64.
const LOG_RANGE: f64 = 5.6e102;

pub(crate) fn dd_cbrt(x: f64) -> Dd {
    let c0 = x.cbrt();
    if c0 == 0.0 {
        return Dd::ZERO;
    }
    let c = Dd::from_f64(c0);
    let r = Dd::from_f64(x).sub(c.sqr().mul(c));
    c.add(r.div(c.sqr().mul_f64(3.0)))
}

/// Scaled Airy pair at z = x^2, with zeta = (2/3)|x|^3 formed from x itself
/// so that the scaling exponent matches 2x^3/3 exactly.
fn scaled_pair_at_sq(x_abs: Dd) -> (Dd, Dd) {
    debug_assert!(x_abs.hi > 2.9, "asymptotic branch needs zeta >= ~16");
    let zeta = x_abs.sqr().mul(x_abs).mul_f64(2.0).div_f64(3.0);
    let (su, sv) = asymp_sums(zeta);
    // z^{1/4} = sqrt(|x|)
    let q = dd_sqrt(x_abs);
    const HALF_INV_SQRT_PI: Dd = Dd { hi: 0.28209479177387814, lo: 3.83386490329147e-18 };
    let ai = HALF_INV_SQRT_PI.mul(su).div(q);
    let aip = HALF_INV_SQRT_PI.mul(sv).mul(q).neg();
    (ai, aip)
}

fn dd_sqrt(x: Dd) -> Dd {
    let s0 = x.hi.sqrt();
    if s0 == 0.0 {
        return Dd::ZERO;
    }
    let r = x.sub(Dd::from_f64(s0).sqr());
    Dd::from_f64(s0).add(r.div_f64(2.0 * s0))
}

fn asymp_sums(zeta: Dd) -> (Dd, Dd) {
    let inv_z = Dd::ONE.div(zeta);
    let mut uk = Dd::ONE;
    let mut pow = Dd::ONE;
    let mut su = Dd::ZERO;
    let mut sv = Dd::ZERO;
    let mut sign = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60u32 {
        let kf = k as f64;
        let tu = uk.mul(pow);
        let mag = tu.hi.abs();
        if mag >= prev {
            break;
        }
        prev = mag;
        let tv = tu.mul_f64(6.0 * kf + 1.0).div_f64(1.0 - 6.0 * kf);
        su = su.add(tu.mul_f64(sign));
        sv = sv.add(tv.mul_f64(sign));
        if mag < 1e-38 {
            break;
        }
        uk = uk
            .mul_f64((6.0 * kf + 1.0) * (6.0 * kf + 5.0))
            .div_f64(72.0 * (kf + 1.0));
        pow = pow.mul(inv_z);
        sign = -sign;
    }
    (su, sv)
}

/// (Ai(x^2), x Ai(x^2) + Ai'(x^2), (4x^3+1) Ai(x^2) + 4x^2 Ai'(x^2)),
/// all under a common (unspecified) positive scale factor.
///
/// The argument is taken in double-double: in the cancelling regimes the
/// combinations are as sensitive to the argument as to the Airy values
/// themselves (d/dx of the log-ratio grows like 8x), so an f64-rounded
/// argument alone would cost ~1e-12 of agreement between the drift forms.
fn combos(x: Dd) -> (Dd, Dd, Dd) {
    let (ai, aip) = if x.hi.abs() <= COMBO_CUT {
        airy_maclaurin_dd(x.hi * x.hi)
    } else {
        scaled_pair_at_sq(x.abs())
    };
    let x2 = x.sqr();
    let x3 = x2.mul(x);
    let s = x.mul(ai).add(aip);
    let g = x3.mul_f64(4.0).add_f64(1.0).mul(ai).add(x2.mul_f64(4.0).mul(aip));
    (ai, s, g)
}

/// The residual exponent of the shared scale: 0 for the series branch and
/// x > COMBO_CUT, -(4/3)|x|^3 for x < -COMBO_CUT.
fn residual_exponent(x: f64) -> f64 {
    if x.abs() <= COMBO_CUT {
        2.0 * x * x * x / 3.0
    } else if x > 0.0 {
        0.0
    } else {
        -4.0 * x.abs().powi(3) / 3.0
    }
}

/// Map-Airy kernel A(x).  Strictly positive; underflows to 0 below
/// x ~ -8.3 (use [`log_map_airy_a`] there).
pub fn map_airy_a(x: f64) -> f64 {
    let (_, s, _) = combos(Dd::from_f64(x));
    let v = s.mul_f64(-2.0).to_f64();
    v * residual_exponent(x).exp()
}

/// ln A(x).  Finite for |x| up to ~5.6e102; errors beyond.
pub fn log_map_airy_a(x: f64) -> Result<f64, SpecialError> {
    if !x.is_finite() || x.abs() > LOG_RANGE {
        return Err(SpecialError::RangeOverflow { what: "log A", x });
    }
    let (_, s, _) = combos(Dd::from_f64(x));
    Ok(s.mul_f64(-2.0).to_f64().ln() + residual_exponent(x))
}

/// Derivative A'(x).
pub fn map_airy_a_prime(x: f64) -> f64 {
    let (_, _, g) = combos(Dd::from_f64(x));
    let v = g.mul_f64(-2.0).to_f64();
    v * residual_exponent(x).exp()
}

/// A'(x)/A(x) in double-double; the scale factors cancel, so this is
/// finite and accurate over the whole working range.
pub(crate) fn ratio_dd(x: Dd) -> Dd {
    let (_, s, g) = combos(x);
    g.div(s)
}

/// kappa(x) = Ai(x^2) / (x Ai(x^2) + Ai'(x^2)) in double-double.
pub(crate) fn kappa_dd(x: Dd) -> Dd {
    let (ai, s, _) = combos(x);
    ai.div(s)
}

/// kappa(x); negative for every real x.
pub fn kappa(x: f64) -> f64 {
    kappa_dd(Dd::from_f64(x)).to_f64()
}

pub(crate) use dd_cbrt as cbrt_dd;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::test_refs;

    #[test]
    fn matches_reference_table() {
        for &(x, want) in test_refs::MAP_AIRY {
            let got = map_airy_a(x);
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "A({x}): got {got:e} want {want:e}"
            );
        }
        for &(x, want) in test_refs::MAP_AIRY_PRIME {
            let got = map_airy_a_prime(x);
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "A'({x}): got {got:e} want {want:e}"
            );
        }
        for &(x, want) in test_refs::LOG_MAP_AIRY {
            let got = log_map_airy_a(x).unwrap();
            let tol = 1e-12 * want.abs().max(1.0);
            assert!(
                (got - want).abs() < tol,
                "log A({x}): got {got:e} want {want:e}"
            );
        }
        for &(x, want) in test_refs::KAPPA {
            let got = kappa(x);
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "kappa({x}): got {got:e} want {want:e}"
            );
        }
    }

    #[test]
    fn a_at_zero_is_minus_two_aip0() {
        // A(0) = -2 Ai'(0)
        assert!((map_airy_a(0.0) - 0.5176388075856136).abs() < 1e-15);
        // A'(0) = -2 Ai(0)
        assert!((map_airy_a_prime(0.0) + 0.7100561077756344).abs() < 1e-15);
    }

    #[test]
    fn positive_everywhere() {
        let mut x = -8.2;
        while x <= 40.0 {
            assert!(map_airy_a(x) > 0.0, "A({x}) <= 0");
            x += 0.11;
        }
        // far left: value underflows but the log stays finite
        for &x in &[-10.0, -25.0, -40.0, -300.0] {
            let l = log_map_airy_a(x).unwrap();
            assert!(l.is_finite() && l < 0.0);
        }
        assert!(log_map_airy_a(1e103).is_err());
    }

    #[test]
    fn branch_overlap() {
        // both branches around the cut agree to ~1e-13 relative
        for &x in &[2.95_f64, 3.0, 3.05, -2.95, -3.0, -3.05] {
            let here = map_airy_a(x);
            let other = {
                // force the opposite branch by evaluating combos manually
                let (ai, aip) = if x.abs() <= COMBO_CUT {
                    scaled_pair_at_sq(Dd::from_f64(x.abs()))
                } else {
                    airy_maclaurin_dd(x * x)
                };
                let xd = Dd::from_f64(x);
                let s = xd.mul(ai).add(aip);
                let v = s.mul_f64(-2.0).to_f64();
                let ex = if x.abs() <= COMBO_CUT {
                    // opposite branch used scaled values
                    if x > 0.0 { 0.0 } else { -4.0 * x.abs().powi(3) / 3.0 }
                } else {
                    2.0 * x * x * x / 3.0
                };
                v * ex.exp()
            };
            assert!(
                ((here - other) / here).abs() < 1e-12,
                "branch overlap at {x}: {here:e} vs {other:e}"
            );
        }
    }

    /// Independent oracle for the far branches: explicit coefficient series
    ///   A(x)  = sqrt(x)/sqrt(pi) * sum_{k>=1} (-1)^{k+1} w_k zeta^{-k},  x >> 1,
    ///   A(x)  = sqrt(|x|)/sqrt(pi) e^{-4|x|^3/3} sum_k (-1)^k tau_k zeta^{-k}, x << -1,
    /// with w_k = 12k u_k/(6k-1), tau_k = 2 u_k/(1-6k), zeta = (2/3)|x|^3.
    #[test]
    fn far_branch_series_oracle() {
        let uk = |n: usize| -> Vec<f64> {
            let mut u = vec![1.0f64];
            for k in 0..n {
                let kf = k as f64;
                u.push(u[k] * (6.0 * kf + 1.0) * (6.0 * kf + 5.0) / (72.0 * (kf + 1.0)));
            }
            u
        };
        let u = uk(25);
        for &x in &[4.0_f64, 6.0, 12.0, 60.0] {
            let zeta = 2.0 * x.powi(3) / 3.0;
            let mut sum = 0.0;
            let mut sign = 1.0;
            for k in 1..20 {
                let w = 12.0 * k as f64 * u[k] / (6.0 * k as f64 - 1.0);
                let term = sign * w * zeta.powi(-(k as i32));
                sum += term;
                sign = -sign;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            let oracle = x.sqrt() / std::f64::consts::PI.sqrt() * sum;
            let got = map_airy_a(x);
            assert!(((got - oracle) / oracle).abs() < 1e-12, "right series at {x}");
        }
        for &x in &[-4.0_f64, -6.0, -8.0] {
            let ax = -x;
            let zeta = 2.0 * ax.powi(3) / 3.0;
            let mut sum = 0.0;
            let mut sign = 1.0;
            for k in 0..20 {
                let tau = 2.0 * u[k] / (1.0 - 6.0 * k as f64);
                sum += sign * tau * zeta.powi(-(k as i32));
                sign = -sign;
            }
            let oracle = ax.sqrt() / std::f64::consts::PI.sqrt() * (-4.0 * ax.powi(3) / 3.0).exp() * sum;
            let got = map_airy_a(x);
            assert!(((got - oracle) / oracle).abs() < 1e-11, "left series at {x}");
        }
    }
}
