//! Time-stepping engine for the auxiliary diffusion
//!
//!   dZ_s = 4 dB_s + b(Z_s) ds,
//!
//! the coupled pair (Z, Lambda) with Lambda_s = lambda exp(-int_0^s Z),
//! integral hitting times H_b = inf{t : int_0^t Z = -b}, the additive
//! time change eta_s = inf{r : int_0^r Lambda^{1/3} >= s}, and the direct
//! system
//!
//!   dLdot = 4 sqrt(L) dB + h(L, Ldot) ds,    L_t = int_0^t Ldot.
//!
//! Scheme: Euler-Maruyama with uniform step.  The noise on Z is additive
//! and on Ldot the diffusion does not depend on the driven coordinate, so
//! the Milstein correction vanishes in both cases and `Scheme::Milstein`
//! is accepted as an alias.
//!
//! Running integrals are trapezoidal and maintained incrementally; the
//! identities `running_integral` vs trapezoid of values, and L vs
//! trapezoid of Ldot, are exact by construction (not approximations).

use crate::rng::StreamRng;
use crate::special::drift::drift_b;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Euler,
    /// Same trajectory as Euler here: additive noise on Z, and the
    /// sqrt(L) diffusion of the profile system does not depend on Ldot.
    MilsteinWhereApplicable,
}

/// Step size, master seed, horizon and scheme for one simulation run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub seed: u64,
    pub max_time: f64,
    pub scheme: Scheme,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-3,
            seed: 0,
            max_time: 1e4,
            scheme: Scheme::Euler,
        }
    }
}

impl SimConfig {
    pub fn with_seed(seed: u64) -> Self {
        SimConfig { seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), SdeError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(SdeError::BadConfig { what: "dt must be positive" });
        }
        if !(self.max_time >= self.dt) {
            return Err(SdeError::BadConfig { what: "max_time must be >= dt" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SdeError {
    #[error("invalid simulation config: {what}")]
    BadConfig { what: &'static str },
    #[error("horizon exceeded: integral level {target} not reached by t = {elapsed}")]
    HorizonExceeded { target: f64, elapsed: f64 },
    #[error("time change not covered: requested {requested}, path integral reaches {covered}")]
    EtaNotReached { requested: f64, covered: f64 },
    #[error("argument {what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
}

// ---------------------------------------------------------------------------
// Drift lookup table
// ---------------------------------------------------------------------------

/// Cubic-spline table of b(z) on [-64, 64].  The exact evaluation walks
/// double-double Airy series (~1 us); the inner Monte Carlo loops call the
/// drift ~1e9 times, so they go through this table instead.  Max error vs
/// the exact b is ~1e-11 (tested); outside the table the exact function is
/// used directly.
pub struct DriftTable {
    z0: f64,
    inv_h: f64,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

const TABLE_MIN: f64 = -64.0;
const TABLE_MAX: f64 = 64.0;
const TABLE_STEPS: usize = 1 << 15; // h = 128/32768 = 1/256
/// Hot-path cutoff: stay clear of the clamped boundary intervals.
const TABLE_SAFE: f64 = 60.0;

impl DriftTable {
    fn build() -> DriftTable {
        let n = TABLE_STEPS;
        let h = (TABLE_MAX - TABLE_MIN) / n as f64;
        let values: Vec<f64> = (0..=n).map(|i| drift_b(TABLE_MIN + i as f64 * h)).collect();

        // end slopes from central differences of the exact function
        let fd = |z: f64| (drift_b(z + 1e-5) - drift_b(z - 1e-5)) / 2e-5;
        let d0 = fd(TABLE_MIN);
        let dn = fd(TABLE_MAX);

        // C^2 cubic spline derivatives: d_{i-1} + 4 d_i + d_{i+1} = 3 (y_{i+1} - y_{i-1})/h
        // with clamped ends, solved by the Thomas algorithm.
        let mut sub = vec![1.0; n + 1];
        let mut diag = vec![4.0; n + 1];
        let mut sup = vec![1.0; n + 1];
        let mut rhs = vec![0.0; n + 1];
        diag[0] = 1.0;
        sup[0] = 0.0;
        rhs[0] = d0;
        diag[n] = 1.0;
        sub[n] = 0.0;
        rhs[n] = dn;
        for i in 1..n {
            rhs[i] = 3.0 * (values[i + 1] - values[i - 1]) / h;
        }
        for i in 1..=n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut derivs = vec![0.0; n + 1];
        derivs[n] = rhs[n] / diag[n];
        for i in (0..n).rev() {
            derivs[i] = (rhs[i] - sup[i] * derivs[i + 1]) / diag[i];
        }

        DriftTable {
            z0: TABLE_MIN,
            inv_h: 1.0 / h,
            values,
            derivs,
        }
    }

    /// b(z); table lookup inside [-60, 60], exact evaluation outside.
    #[inline]
    pub fn b(&self, z: f64) -> f64 {
        if z.abs() > TABLE_SAFE {
            return drift_b(z);
        }
        let p = (z - self.z0) * self.inv_h;
        let i = p as usize; // z > z0 + h always holds here
        let t = p - i as f64;
        let h = 1.0 / self.inv_h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.derivs[i] * h, self.derivs[i + 1] * h);
        // cubic Hermite basis
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }

    /// h(t, x) = t^{1/3} ((2/3) z^2 - b(z)) with z = -t^{-2/3} x; the
    /// conjugate form of the profile drift, served from the table.
    #[inline]
    pub fn h(&self, t: f64, x: f64) -> f64 {
        let c = t.cbrt();
        let z = -x / (c * c);
        c * (2.0 / 3.0 * z * z - self.b(z))
    }
}

/// Shared drift table (built once on first use, ~40 ms).
pub fn drift_table() -> &'static DriftTable {
    static TABLE: OnceLock<DriftTable> = OnceLock::new();
    TABLE.get_or_init(DriftTable::build)
}

// ---------------------------------------------------------------------------
// Z paths
// ---------------------------------------------------------------------------

/// A discretely sampled trajectory with its trapezoidal running integral.
#[derive(Debug, Clone, Serialize)]
pub struct Path {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
    pub running_integral: Vec<f64>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn time_at(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }
    /// Linear interpolation of the value at time t.
    pub fn value_at_time(&self, t: f64) -> f64 {
        let p = ((t - self.t0) / self.dt).clamp(0.0, (self.len() - 1) as f64);
        let i = (p as usize).min(self.len() - 2);
        let frac = p - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }
}

/// Streaming stepper for Z; owns its random stream.
pub struct ZStepper {
    pub z: f64,
    pub integral: f64,
    pub steps: u64,
    dt: f64,
    noise_scale: f64, // 4 sqrt(dt)
    rng: StreamRng,
    table: &'static DriftTable,
}

impl ZStepper {
    pub fn new(w0: f64, cfg: &SimConfig, rng: StreamRng) -> ZStepper {
        ZStepper {
            z: w0,
            integral: 0.0,
            steps: 0,
            dt: cfg.dt,
            noise_scale: 4.0 * cfg.dt.sqrt(),
            rng,
            table: drift_table(),
        }
    }

    #[inline]
    pub fn time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    /// One Euler-Maruyama step; returns the new (z, running integral).
    #[inline]
    pub fn advance(&mut self) -> (f64, f64) {
        let zn = self.z + self.table.b(self.z) * self.dt + self.noise_scale * self.rng.std_normal();
        self.integral += 0.5 * self.dt * (self.z + zn);
        self.z = zn;
        self.steps += 1;
        (self.z, self.integral)
    }
}

/// Number of steps covering horizon T (0 for T = 0).
fn step_count(t_horizon: f64, dt: f64) -> usize {
    if t_horizon <= 0.0 {
        0
    } else {
        (t_horizon / dt - 1e-9).ceil().max(1.0) as usize
    }
}

/// Euler-Maruyama path of Z from w0 over [0, T].
pub fn simulate_z(w0: f64, t_horizon: f64, cfg: &SimConfig, rng: StreamRng) -> Result<Path, SdeError> {
    cfg.validate()?;
    let n = step_count(t_horizon, cfg.dt);
    let mut stepper = ZStepper::new(w0, cfg, rng);
    let mut values = Vec::with_capacity(n + 1);
    let mut running = Vec::with_capacity(n + 1);
    values.push(w0);
    running.push(0.0);
    for _ in 0..n {
        let (z, i) = stepper.advance();
        values.push(z);
        running.push(i);
    }
    Ok(Path { t0: 0.0, dt: cfg.dt, values, running_integral: running })
}

/// Interpolated crossing of the running integral through a level.
#[derive(Debug, Clone, Copy)]
pub struct Hit {
    pub time: f64,
    pub z: f64,
    pub integral: f64,
    pub steps: u64,
}

/// H_b = inf{t >= 0 : int_0^t Z = -b} for b >= 0, with linear
/// interpolation of the running integral inside the crossing step
/// (O(dt^2) bias).  Simulates Z from w0 on the given stream.
pub fn hitting_time_hb(
    w0: f64,
    level_b: f64,
    cfg: &SimConfig,
    rng: StreamRng,
) -> Result<Hit, SdeError> {
    cfg.validate()?;
    if level_b < 0.0 {
        return Err(SdeError::NonPositive { what: "hitting level", value: level_b });
    }
    if level_b == 0.0 {
        // the infimum is attained at t = 0
        return Ok(Hit { time: 0.0, z: w0, integral: 0.0, steps: 0 });
    }
    let mut s = ZStepper::new(w0, cfg, rng);
    let target = -level_b;
    loop {
        let (z_prev, i_prev) = (s.z, s.integral);
        let (z, i) = s.advance();
        if i <= target {
            let frac = (target - i_prev) / (i - i_prev);
            return Ok(Hit {
                time: (s.steps - 1) as f64 * s.dt + frac * s.dt,
                z: z_prev + frac * (z - z_prev),
                integral: target,
                steps: s.steps,
            });
        }
        let _ = z;
        if s.time() > cfg.max_time {
            return Err(SdeError::HorizonExceeded { target, elapsed: s.time() });
        }
    }
}

// ---------------------------------------------------------------------------
// (Z, Lambda) and the time change
// ---------------------------------------------------------------------------

/// Z path with Lambda_s = lambda exp(-int_0^s Z): the log is linear in the
/// running integral, so positivity of Lambda is structural.
#[derive(Debug, Clone, Serialize)]
pub struct ZLambdaPath {
    pub path: Path,
    pub lambda: Vec<f64>,
    pub log_lambda: Vec<f64>,
}

pub fn simulate_z_lambda(
    w0: f64,
    lambda0: f64,
    t_horizon: f64,
    cfg: &SimConfig,
    rng: StreamRng,
) -> Result<ZLambdaPath, SdeError> {
    if !(lambda0 > 0.0) {
        return Err(SdeError::NonPositive { what: "lambda0", value: lambda0 });
    }
    let path = simulate_z(w0, t_horizon, cfg, rng)?;
    let log_l0 = lambda0.ln();
    let log_lambda: Vec<f64> = path.running_integral.iter().map(|i| log_l0 - i).collect();
    let lambda: Vec<f64> = log_lambda.iter().map(|l| l.exp()).collect();
    Ok(ZLambdaPath { path, lambda, log_lambda })
}

/// Position of the time change eta_s along a (Z, Lambda) path.
#[derive(Debug, Clone, Copy)]
pub struct EtaPoint {
    pub index: usize,
    pub frac: f64,
    pub time: f64,
    pub z: f64,
    pub lambda: f64,
}

/// Integral of Lambda^{1/3} over one step under log-linear interpolation
/// of Lambda: dt * e^{g0} (e^{dg} - 1)/dg with g = log(Lambda)/3.
#[inline]
pub(crate) fn seg_integral(dt: f64, g0: f64, g1: f64) -> f64 {
    let dg = g1 - g0;
    if dg.abs() < 1e-8 {
        dt * (0.5 * (g0 + g1)).exp() * (1.0 + dg * dg / 24.0)
    } else {
        dt * g0.exp() * dg.exp_m1() / dg
    }
}

/// eta_s = inf{r >= 0 : int_0^r Lambda_u^{1/3} du >= s}, resolved inside
/// one step by inverting the log-linear segment integral.
pub fn time_change_eta(zl: &ZLambdaPath, s: f64) -> Result<EtaPoint, SdeError> {
    if s < 0.0 {
        return Err(SdeError::NonPositive { what: "time-change target", value: s });
    }
    let dt = zl.path.dt;
    let point = |index: usize, frac: f64| {
        let z = zl.path.values[index]
            + if frac > 0.0 { frac * (zl.path.values[index + 1] - zl.path.values[index]) } else { 0.0 };
        let ll = zl.log_lambda[index]
            + if frac > 0.0 { frac * (zl.log_lambda[index + 1] - zl.log_lambda[index]) } else { 0.0 };
        EtaPoint { index, frac, time: (index as f64 + frac) * dt, z, lambda: ll.exp() }
    };
    if s == 0.0 {
        return Ok(point(0, 0.0));
    }
    let mut acc = 0.0;
    for k in 0..zl.path.len().saturating_sub(1) {
        let g0 = zl.log_lambda[k] / 3.0;
        let g1 = zl.log_lambda[k + 1] / 3.0;
        let seg = seg_integral(dt, g0, g1);
        if acc + seg >= s {
            let need = s - acc;
            // solve int_0^{frac*dt} e^{g0 + (dg/dt) tau} dtau = need
            let dg = g1 - g0;
            let frac = if dg.abs() < 1e-8 {
                (need / (dt * g0.exp())).clamp(0.0, 1.0)
            } else {
                ((need * dg / (dt * g0.exp())).ln_1p() / dg).clamp(0.0, 1.0)
            };
            return Ok(point(k, frac));
        }
        acc += seg;
    }
    Err(SdeError::EtaNotReached { requested: s, covered: acc })
}

// ---------------------------------------------------------------------------
// The (L, Ldot) system
// ---------------------------------------------------------------------------

/// One state of the sphere-area pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProfileState {
    pub l: f64,
    pub ldot: f64,
}

/// Output of the direct Euler scheme on (L, Ldot).
#[derive(Debug, Clone, Serialize)]
pub struct ProfileSystemPath {
    pub dt: f64,
    pub states: Vec<ProfileState>,
    /// Steps on which L was clamped at the positivity floor (diagnostic;
    /// the continuous process does not hit 0 from positive starts).
    pub floor_hits: u64,
    /// Accumulated drift integral int h(L, Ldot) ds along the path.
    pub drift_integral: f64,
}

/// Positivity floor for L in the discrete scheme.
pub const L_FLOOR: f64 = 1e-12;

/// Euler-Maruyama on Ldot (diffusion 4 sqrt(L), drift h) with L updated by
/// the exact trapezoid of Ldot, so L - L0 - trapz(Ldot) = 0 to the bit
/// whenever the floor never engages.
pub fn simulate_profile_system(
    l0: f64,
    ldot0: f64,
    t_horizon: f64,
    cfg: &SimConfig,
    mut rng: StreamRng,
) -> Result<ProfileSystemPath, SdeError> {
    cfg.validate()?;
    if !(l0 > 0.0) {
        return Err(SdeError::NonPositive { what: "initial area L0", value: l0 });
    }
    let table = drift_table();
    let n = step_count(t_horizon, cfg.dt);
    let dt = cfg.dt;
    let noise = 4.0 * dt.sqrt();
    let mut states = Vec::with_capacity(n + 1);
    let mut floor_hits = 0u64;
    let mut drift_integral = 0.0;
    let (mut l, mut ld) = (l0, ldot0);
    states.push(ProfileState { l, ldot: ld });
    for _ in 0..n {
        let hv = table.h(l, ld);
        drift_integral += hv * dt;
        let ld_next = ld + hv * dt + noise * l.sqrt() * rng.std_normal();
        let mut l_next = l + 0.5 * dt * (ld + ld_next);
        if l_next < L_FLOOR {
            l_next = L_FLOOR;
            floor_hits += 1;
        }
        l = l_next;
        ld = ld_next;
        states.push(ProfileState { l, ldot: ld });
    }
    Ok(ProfileSystemPath { dt, states, floor_hits, drift_integral })
}
