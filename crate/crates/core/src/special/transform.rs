//! Transform cross-checks of the stable density: the Fourier transform
//!
//!   int e^{iux} p_t(x) dx = exp(-c0 t |u|^{3/2} (1 + i sgn u)),  c0 = 1/sqrt(3),
//!
//! and the Laplace transform
//!
//!   int e^{-lam x} p_t(x) dx = exp(t sqrt(2/3) lam^{3/2}),  lam > 0.
//!
//! The density has a power-law right tail ~ x^{-5/2}, so the Fourier
//! integral is truncated where the remaining mass (an explicit bound,
//! int_Y^inf A ~ Y^{-3/2}/(6 sqrt(pi))) drops below a quarter of the
//! requested tolerance; the bound is reported alongside the result.

use super::quad::{integrate, QuadratureSpec};
use super::stable::{p1, time_scale, SIX_M13};
use super::SpecialError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPair {
    pub re: f64,
    pub im: f64,
}

impl ComplexPair {
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
    pub fn sub(self, o: ComplexPair) -> ComplexPair {
        ComplexPair { re: self.re - o.re, im: self.im - o.im }
    }
}

/// Outcome of a transform check: the quadrature value, the closed-form
/// target, their distance, and the neglected-tail bound.
#[derive(Debug, Clone, Copy)]
pub struct TransformCheck {
    pub numeric: ComplexPair,
    pub target: ComplexPair,
    pub abs_err: f64,
    pub tail_bound: f64,
}

/// Map-Airy right tail mass beyond Y: int_Y^inf A(y) dy ~ Y^{-3/2}/(6 sqrt(pi)).
fn a_tail_mass(y: f64) -> f64 {
    y.powf(-1.5) / (6.0 * std::f64::consts::PI.sqrt())
}

/// Left endpoint where p_t underflows to exactly 0 (map-Airy argument -9).
fn left_cut(t: f64) -> f64 {
    -9.0 / (SIX_M13 * time_scale(t)) - 1.0
}

/// Numerically verify the Fourier transform of p_t at frequency u.
pub fn fourier_check(t: f64, u: f64, spec: &QuadratureSpec) -> Result<TransformCheck, SpecialError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(SpecialError::NonPositiveTime { t });
    }
    let s = time_scale(t);
    let pt = move |x: f64| s * p1(s * x);

    // choose the right cutoff so the neglected mass is < abs_tol/4
    let budget = 0.25 * spec.abs_tol;
    let y_min = (1.0 / (6.0 * std::f64::consts::PI.sqrt() * budget)).powf(2.0 / 3.0);
    let right = y_min / (SIX_M13 * s) + 1.0;
    let left = left_cut(t);
    let tail_bound = a_tail_mass(SIX_M13 * s * right);

    let re = integrate(|x| (u * x).cos() * pt(x), left, right, spec)?;
    let im = integrate(|x| (u * x).sin() * pt(x), left, right, spec)?;

    let c0 = 1.0 / 3.0_f64.sqrt();
    let a = c0 * t * u.abs().powf(1.5);
    let phase = a * u.signum();
    let target = ComplexPair {
        re: (-a).exp() * phase.cos(),
        im: -(-a).exp() * phase.sin(),
    };
    let numeric = ComplexPair { re: re.value, im: im.value };
    Ok(TransformCheck {
        numeric,
        target,
        abs_err: numeric.sub(target).abs(),
        tail_bound,
    })
}

/// Numerically verify the Laplace transform of p_t at lam > 0.
pub fn laplace_check(t: f64, lam: f64, spec: &QuadratureSpec) -> Result<TransformCheck, SpecialError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(SpecialError::NonPositiveTime { t });
    }
    if !(lam > 0.0) {
        return Err(SpecialError::RangeOverflow { what: "laplace rate", x: lam });
    }
    let s = time_scale(t);
    let pt = move |x: f64| s * p1(s * x);
    let left = left_cut(t);
    // e^{-lam x} p_t(x) <= e^{-lam x}; cut where that is < 1e-17 * target
    let target_v = (t * (2.0f64 / 3.0).sqrt() * lam.powf(1.5)).exp();
    let right = ((target_v.ln() + 40.0) / lam).max(40.0 / lam);
    let tail_bound = (-lam * right).exp() * a_tail_mass(SIX_M13 * s * right).min(1.0);

    let v = integrate(|x| (-lam * x).exp() * pt(x), left, right, spec)?;
    let numeric = ComplexPair { re: v.value, im: 0.0 };
    let target = ComplexPair { re: target_v, im: 0.0 };
    Ok(TransformCheck {
        numeric,
        target,
        abs_err: (v.value - target_v).abs(),
        tail_bound,
    })
}
