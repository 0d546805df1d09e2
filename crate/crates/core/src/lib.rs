//! Simulation and verification toolkit for the sphere-area process of the
//! Brownian plane.
//!
//! The crate has three layers:
//!
//!  * [`special`] — deterministic closed forms: Airy functions, the
//!    map-Airy kernel, the 3/2-stable density p_t and its derivative, the
//!    drifts h(t,x) and b(z), the invariant density theta, quadrature, and
//!    Fourier/Laplace cross-checks.
//!  * [`rng`], [`sde`], [`stationary`], [`profile`] — reproducible
//!    counter-based randomness, the Euler-Maruyama engine for
//!    dZ = 4 dB + b(Z) dt and the (L, Ldot) system, samplers for the
//!    invariant law pi and the hitting law mu, and the stationary
//!    construction of the doubly-infinite process W* from which the
//!    sphere-area profile (L_x, Ldot_x) = (Lam*(tau*_x), -Lam*(tau*_x)^{2/3}
//!    W*(tau*_x)) is extracted.
//!  * [`mc`] — the Monte Carlo experiment harness: two-sample statistics,
//!    moment and scale-invariance experiments, the two-route equivalence
//!    test between the time-change construction and the SDE system, and
//!    machine/human report serialization.

pub mod mc;
pub mod profile;
pub mod rng;
pub mod sde;
pub mod special;
pub mod stationary;
