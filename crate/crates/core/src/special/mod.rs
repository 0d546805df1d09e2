//! Closed-form analysis layer: Airy functions, the map-Airy kernel, the
//! spectrally positive 3/2-stable density p_t with derivative, the drifts
//! h(t,x) and b(z), the invariant density theta, and adaptive quadrature.
//!
//! Everything here is a pure function of its arguments; the one piece of
//! shared state (the normalizing constant of theta) is computed once and
//! cached behind a `OnceLock`.

pub mod airy;
pub mod dd;
pub mod drift;
pub mod map_airy;
pub mod quad;
pub mod stable;
pub mod theta;
pub mod transform;

#[cfg(test)]
pub mod test_refs;

pub use airy::{airy_ai, airy_ai_prime};
pub use drift::{drift_b, drift_h, drift_h_airy, kappa};
pub use map_airy::{log_map_airy_a, map_airy_a, map_airy_a_prime};
pub use quad::{integrate, integrate_real_line, QuadResult, QuadratureSpec};
pub use stable::{log_p1, p1, p1_prime, stable_density, time_scale, DensityPair};
pub use theta::{log_theta_unnorm, pi_mean, theta, theta_normalizer, theta_prime};
pub use transform::{fourier_check, laplace_check, ComplexPair, TransformCheck};

/// Errors surfaced by the analysis layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    #[error("time argument must be positive, got {t}")]
    NonPositiveTime { t: f64 },
    #[error("argument out of range for {what}: {x:e}")]
    RangeOverflow { what: &'static str, x: f64 },
    #[error("quadrature error {err:e} above tolerance {tol:e} after {subdivisions} subdivisions")]
    Tolerance {
        err: f64,
        tol: f64,
        subdivisions: usize,
    },
    #[error("integration limits invalid: [{a}, {b}]")]
    BadLimits { a: f64, b: f64 },
}
