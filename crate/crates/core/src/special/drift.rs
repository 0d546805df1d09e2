//! Drift functions of the sphere-area SDE system and of the auxiliary
//! diffusion:
//!
//!   h(t,x) = -8 t p'_t(-x/2) / p_t(-x/2) + (4/3) x^2 / t        (ratio form)
//!   h(t,x) = -8 * 6^{-1/3} t^{1/3} kappa(-6^{-1/3} t^{-2/3} x / 2)  (Airy form)
//!   b(z)   =  8 p'_1(z/2) / p_1(z/2) - (2/3) z^2
//!
//! h > 0 everywhere (x Ai(x^2) + Ai'(x^2) < 0 while Ai > 0); the two h
//! forms agree analytically and are kept as separate code paths so that
//! they cross-check each other.  Note the minus sign in the Airy-form
//! argument: with kappa(x) = Ai(x^2)/(x Ai(x^2) + Ai'(x^2)), matching the
//! ratio form requires kappa evaluated at -6^{-1/3} t^{-2/3} x/2, which is
//! confirmed here by direct comparison against the ratio form (and by
//! finite differences of p_t).
//!
//! The ratio form subtracts two nearly equal terms when |x| is large and
//! h is small (amplification ~ x^3 / (6 t^2)); the combination is carried
//! in double-double so the exported value keeps ~1e-15 relative accuracy
//! throughout |reduced argument| <= ~400.

use super::dd::Dd;
use super::map_airy::{cbrt_dd, kappa_dd, ratio_dd};
use super::SpecialError;

/// 6^{-1/3} in double-double.
const SIX_M13_DD: Dd = Dd { hi: 0.5503212081491045, lo: -9.851067964905209e-18 };
/// 2/3 in double-double.
const TWO_THIRDS_DD: Dd = Dd { hi: 0.6666666666666666, lo: 3.700743415417188e-17 };

/// b(z) = 8 p'_1(z/2)/p_1(z/2) - (2/3) z^2.
///
/// Behaves like +(2/3) z^2 as z -> -inf and -(2/3) z^2 as z -> +inf.
pub fn drift_b(z: f64) -> f64 {
    let u = SIX_M13_DD.mul_f64(0.5 * z);
    let r = ratio_dd(u); // A'(u)/A(u)
    let z2 = Dd::from_f64(z).sqr();
    r.mul(SIX_M13_DD)
        .mul_f64(8.0)
        .sub(z2.mul(TWO_THIRDS_DD))
        .to_f64()
}

/// Reduced argument shared by both h forms: 6^{-1/3} t^{-2/3} (-x/2),
/// together with t^{1/3} and t^{-2/3}, all in double-double.
fn h_parts(t: f64, x: f64) -> (Dd, Dd, Dd) {
    let c = cbrt_dd(t); // t^{1/3}
    let s = Dd::ONE.div(c.sqr()); // t^{-2/3}
    let v = SIX_M13_DD.mul(s).mul_f64(-0.5 * x);
    (v, c, s)
}

/// Drift h(t,x), ratio form (the exported definition).  Errors if t <= 0.
pub fn drift_h(t: f64, x: f64) -> Result<f64, SpecialError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(SpecialError::NonPositiveTime { t });
    }
    let (v, _, s) = h_parts(t, x);
    // -8 t * p'_t(-x/2)/p_t(-x/2) = -8 t * t^{-2/3} 6^{-1/3} A'(v)/A(v)
    let term1 = ratio_dd(v).mul(SIX_M13_DD).mul(s).mul_f64(t).mul_f64(-8.0);
    let term2 = Dd::from_f64(x).sqr().mul_f64(4.0).div_f64(3.0).div_f64(t);
    Ok(term1.add(term2).to_f64())
}

/// Drift h(t,x), Airy form; used as a cross-check of the ratio form.
pub fn drift_h_airy(t: f64, x: f64) -> Result<f64, SpecialError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(SpecialError::NonPositiveTime { t });
    }
    let (v, c, _) = h_parts(t, x);
    Ok(kappa_dd(v).mul(SIX_M13_DD).mul(c).mul_f64(-8.0).to_f64())
}

/// kappa(x) = Ai(x^2)/(x Ai(x^2) + Ai'(x^2)); see [`drift_h_airy`].
pub fn kappa(x: f64) -> f64 {
    super::map_airy::kappa(x)
}
