//! Airy functions Ai, Ai' on the real line.
//!
//! Evaluation strategy:
//!  * |x| <= 10.5 — Maclaurin series summed in double-double.  The plain-f64
//!    series loses ~zeta/ln(10) digits to cancellation (zeta = 2|x|^{3/2}/3),
//!    which is ~10 digits at the cut; double-double keeps >= 21 digits there.
//!  * x > 10.5 — asymptotic expansion of e^{zeta} Ai(x) in double-double,
//!    truncated at the smallest term (< 1e-19 relative at the cut).
//!  * x < -10.5 — oscillatory asymptotic expansion with the phase reduced in
//!    double-double.
//!
//! The branch cut is chosen so that both branches overlap with relative
//! agreement ~1e-15 in [10.4, 10.6] (tested), far inside the 1e-12 target.

use super::dd::Dd;

/// Series/asymptotic switch point for x > 0.  The Maclaurin branch is
/// conditioned like e^{2 zeta} (the sum is ~e^{+zeta} while Ai ~ e^{-zeta}),
/// so double-double keeps ~1e-16 only up to zeta ~ 18, i.e. x = 9; the
/// asymptotic branch is already at its ~4e-15 truncation floor there.
pub const SERIES_CUT: f64 = 9.0;
/// Series/oscillatory switch point for x < 0.  On this side the sum is
/// conditioned like e^{+zeta} only, so the series stays good further out.
pub const NEG_CUT: f64 = 10.5;

/// Ai(0) = 3^{-2/3}/Gamma(2/3), double-double.
pub const AI0: Dd = Dd { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
/// -Ai'(0) = 3^{-1/3}/Gamma(1/3), double-double.
pub const NEG_AIP0: Dd = Dd { hi: 0.2588194037928068, lo: -2.522243111610832e-17 };
/// 1/(2 sqrt(pi)), double-double.
const HALF_INV_SQRT_PI: Dd = Dd { hi: 0.28209479177387814, lo: 3.83386490329147e-18 };
/// 1/sqrt(pi), double-double.
const INV_SQRT_PI: Dd = Dd { hi: 0.5641895835477563, lo: 7.66772980658294e-18 };
/// pi/4, double-double.
const QUARTER_PI: Dd = Dd { hi: 0.7853981633974483, lo: 3.061616997868383e-17 };

fn dd_sqrt(x: Dd) -> Dd {
    let s0 = x.hi.sqrt();
    if s0 == 0.0 {
        return Dd::ZERO;
    }
    // one Newton step in dd doubles the accuracy of the f64 seed
    let r = x.sub(Dd::from_f64(s0).sqr());
    Dd::from_f64(s0).add(r.div_f64(2.0 * s0))
}

/// zeta(|x|) = (2/3) |x|^{3/2} in double-double.
fn zeta_dd(ax: f64) -> Dd {
    let z = Dd::from_f64(ax);
    z.mul(dd_sqrt(z)).mul_f64(2.0).div_f64(3.0)
}

/// Maclaurin evaluation of (Ai(x), Ai'(x)) in double-double,
/// -10.6 <= x <= 9.1.
///
/// Ai  = c1*f - c2*g with f = sum a_k x^{3k}, g = sum b_k x^{3k+1},
/// a_{k+1}/a_k = 1/((3k+2)(3k+3)), b_{k+1}/b_k = 1/((3k+3)(3k+4)).
pub fn airy_maclaurin_dd(x: f64) -> (Dd, Dd) {
    if x == 0.0 {
        return (AI0, NEG_AIP0.neg());
    }
    let xd = Dd::from_f64(x);
    let x3 = xd.sqr().mul(xd);

    let mut term_f = Dd::ONE; // a_k x^{3k}
    let mut term_g = xd; // b_k x^{3k+1}
    let mut f = Dd::ZERO;
    let mut fp_num = Dd::ZERO; // sum 3k a_k x^{3k}; f' = fp_num / x
    let mut g = Dd::ZERO;
    let mut gp_num = Dd::ZERO; // sum (3k+1) b_k x^{3k+1}; g' = gp_num / x
    let mut peak = 0.0_f64;

    for k in 0..160u32 {
        let kf = k as f64;
        f = f.add(term_f);
        g = g.add(term_g);
        fp_num = fp_num.add(term_f.mul_f64(3.0 * kf));
        gp_num = gp_num.add(term_g.mul_f64(3.0 * kf + 1.0));

        let mag = term_f.hi.abs().max(term_g.hi.abs());
        peak = peak.max(mag);
        if mag < 1e-40 * peak.max(1.0) {
            break;
        }

        let df = (3.0 * kf + 2.0) * (3.0 * kf + 3.0);
        let dg = (3.0 * kf + 3.0) * (3.0 * kf + 4.0);
        term_f = term_f.mul(x3).div_f64(df);
        term_g = term_g.mul(x3).div_f64(dg);
    }

    let fp = fp_num.div_f64(x);
    let gp = gp_num.div_f64(x);
    let ai = AI0.mul(f).sub(NEG_AIP0.mul(g));
    let aip = AI0.mul(fp).sub(NEG_AIP0.mul(gp));
    (ai, aip)
}

/// Asymptotic series sums for x > 0:
/// S_u = sum (-1)^k u_k zeta^{-k},  S_v = sum (-1)^k v_k zeta^{-k},
/// u_0 = 1, u_{k+1} = u_k (6k+1)(6k+5)/(72(k+1)), v_k = u_k (6k+1)/(1-6k).
/// Truncated at the smallest term.
fn asymp_sums_dd(zeta: Dd) -> (Dd, Dd) {
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
            break; // divergent tail reached
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

/// Scaled Airy pair for x >= 0: (e^{zeta} Ai(x), e^{zeta} Ai'(x)) in dd.
///
/// The scaling factor exp(zeta) enters through f64 exp() on the series
/// branch (relative error ~1e-16); the asymptotic branch is natively scaled.
pub fn airy_scaled_dd(x: f64) -> (Dd, Dd) {
    debug_assert!(x >= 0.0);
    if x <= SERIES_CUT {
        let (ai, aip) = airy_maclaurin_dd(x);
        let e = zeta_dd(x).to_f64().exp();
        (ai.mul_f64(e), aip.mul_f64(e))
    } else {
        let zeta = zeta_dd(x);
        let (su, sv) = asymp_sums_dd(zeta);
        let q = dd_sqrt(dd_sqrt(Dd::from_f64(x))); // x^{1/4}
        let ai = HALF_INV_SQRT_PI.mul(su).div(q);
        let aip = HALF_INV_SQRT_PI.mul(sv).mul(q).neg();
        (ai, aip)
    }
}

/// Oscillatory branch for x < -10.5 (f64 with dd-reduced phase).
fn airy_negative(x: f64) -> (f64, f64) {
    debug_assert!(x < -10.0);
    let ax = -x;
    let zeta = zeta_dd(ax);
    let theta = zeta.sub(QUARTER_PI);
    // sin/cos of hi with first-order lo correction
    let (s0, c0) = (theta.hi.sin(), theta.hi.cos());
    let sin_t = s0 + theta.lo * c0;
    let cos_t = c0 - theta.lo * s0;

    let zf = zeta.to_f64();
    let inv_z = 1.0 / zf;
    // even/odd splits of the u_k and v_k series
    let mut uk = 1.0_f64;
    let mut pow = 1.0_f64;
    let mut pu = 0.0; // sum (-1)^k u_{2k} zeta^{-2k}
    let mut qu = 0.0; // sum (-1)^k u_{2k+1} zeta^{-2k-1}
    let mut pv = 0.0;
    let mut qv = 0.0;
    let mut prev = f64::INFINITY;
    for j in 0..40u32 {
        let k = j as f64;
        let term = uk * pow;
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        let vterm = term * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        let half = (j / 2) as i32;
        let sgn = if half % 2 == 0 { 1.0 } else { -1.0 };
        if j % 2 == 0 {
            pu += sgn * term;
            pv += sgn * vterm;
        } else {
            qu += sgn * term;
            qv += sgn * vterm;
        }
        if term.abs() < 1e-20 {
            break;
        }
        uk *= (6.0 * k + 1.0) * (6.0 * k + 5.0) / (72.0 * (k + 1.0));
        pow *= inv_z;
    }

    let q = ax.sqrt().sqrt(); // |x|^{1/4}
    let ai = INV_SQRT_PI.to_f64() / q * (cos_t * pu + sin_t * qu);
    let aip = INV_SQRT_PI.to_f64() * q * (sin_t * pv - cos_t * qv);
    (ai, aip)
}

/// Airy function Ai(x).  Underflows to 0 for x >~ 106.
pub fn airy_ai(x: f64) -> f64 {
    if x < -NEG_CUT {
        airy_negative(x).0
    } else if x <= SERIES_CUT {
        airy_maclaurin_dd(x).0.to_f64()
    } else {
        let (ai_s, _) = airy_scaled_dd(x);
        ai_s.to_f64() * (-zeta_dd(x).to_f64()).exp()
    }
}

/// Derivative Ai'(x).
pub fn airy_ai_prime(x: f64) -> f64 {
    if x < -NEG_CUT {
        airy_negative(x).1
    } else if x <= SERIES_CUT {
        airy_maclaurin_dd(x).1.to_f64()
    } else {
        let (_, aip_s) = airy_scaled_dd(x);
        aip_s.to_f64() * (-zeta_dd(x).to_f64()).exp()
    }
}
