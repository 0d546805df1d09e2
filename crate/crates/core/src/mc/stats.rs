//! Two-sample statistics: Kolmogorov-Smirnov with the asymptotic p-value
//! and a chi-square goodness-of-fit helper.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("sample too small: {n} < {min}")]
    SampleSize { n: usize, min: usize },
    #[error("non-finite value in sample")]
    NonFinite,
    #[error("histogram mismatch: {observed} observed vs {expected} expected bins")]
    BinMismatch { observed: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n_effective: f64,
}

/// Kolmogorov tail function Q(lam) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lam^2).
pub fn kolmogorov_q(lam: f64) -> f64 {
    if lam < 0.24 {
        // Q > 1 - 1e-13 here; the alternating series converges too slowly
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100u32 {
        let term = (-2.0 * (k * k) as f64 * lam * lam).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sided two-sample Kolmogorov-Smirnov test with asymptotic p-value
/// (the finite-n corrected argument lam = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) D).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    const MIN: usize = 25;
    if a.len() < MIN {
        return Err(StatsError::SampleSize { n: a.len(), min: MIN });
    }
    if b.len() < MIN {
        return Err(StatsError::SampleSize { n: b.len(), min: MIN });
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);

    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let vx = xs[i];
        let vy = ys[j];
        let v = vx.min(vy);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let lam = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult { statistic: d, p_value: kolmogorov_q(lam), n_effective: ne })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub p_value: f64,
    pub dof: usize,
}

/// Pearson chi-square against expected bin masses (rescaled to the
/// observed total); dof = bins - 1.
pub fn chi_square_gof(observed: &[u64], expected_weights: &[f64]) -> Result<ChiSquareResult, StatsError> {
    if observed.len() != expected_weights.len() {
        return Err(StatsError::BinMismatch {
            observed: observed.len(),
            expected: expected_weights.len(),
        });
    }
    if observed.len() < 2 {
        return Err(StatsError::SampleSize { n: observed.len(), min: 2 });
    }
    let total: u64 = observed.iter().sum();
    let wsum: f64 = expected_weights.iter().sum();
    if !(wsum > 0.0) || total == 0 {
        return Err(StatsError::NonFinite);
    }
    let mut stat = 0.0;
    for (o, w) in observed.iter().zip(expected_weights) {
        let e = total as f64 * w / wsum;
        if e <= 0.0 {
            return Err(StatsError::NonFinite);
        }
        let diff = *o as f64 - e;
        stat += diff * diff / e;
    }
    let dof = observed.len() - 1;
    let p_value = statrs::function::gamma::gamma_ur(dof as f64 / 2.0, stat / 2.0);
    Ok(ChiSquareResult { statistic: stat, p_value, dof })
}

/// Mean and standard error of a sample.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Ratio mean(b)/mean(a) of paired samples with a delta-method standard
/// error that accounts for the pairwise covariance.
pub fn paired_ratio(num: &[f64], den: &[f64]) -> (f64, f64) {
    assert_eq!(num.len(), den.len());
    let n = num.len() as f64;
    let (mb, _) = mean_stderr(num);
    let (ma, _) = mean_stderr(den);
    let r = mb / ma;
    let mut var = 0.0;
    for (x, y) in num.iter().zip(den) {
        let d = (x - mb) - r * (y - ma);
        var += d * d;
    }
    var /= n - 1.0;
    (r, (var / n).sqrt() / ma.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, StreamDomain};

    #[test]
    fn identical_samples_give_zero_statistic() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn disjoint_supports_reject_hard() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 10.0).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(r.p_value < 1e-6);
    }

    #[test]
    fn small_samples_rejected() {
        let a = vec![1.0; 10];
        let b = vec![1.0; 100];
        assert!(matches!(ks_two_sample(&a, &b), Err(StatsError::SampleSize { .. })));
    }

    #[test]
    fn normal_batches_pass() {
        let draw = |idx: u64| -> Vec<f64> {
            let mut rng = stream(100, StreamDomain::Calibration, idx);
            (0..1000).map(|_| rng.std_normal()).collect()
        };
        let r = ks_two_sample(&draw(0), &draw(1)).unwrap();
        assert!(r.p_value > 0.001, "p = {}", r.p_value);
    }

    #[test]
    fn kolmogorov_q_reference_values() {
        // reference values computed with mpmath
        for &(lam, want) in crate::special::test_refs::KOLMOGOROV_Q {
            let got = kolmogorov_q(lam);
            assert!((got - want).abs() < 1e-12, "Q({lam}) = {got} vs {want}");
        }
    }

    /// Null calibration: rejection rate at level alpha stays inside the
    /// binomial 3-sigma band when both batches share the pipeline.
    #[test]
    fn null_rejection_rate_calibrated() {
        let reps = 200;
        let alpha = 0.05;
        let mut rejections = 0;
        for r in 0..reps {
            let mut ra = stream(7, StreamDomain::Calibration, 2 * r as u64 + 100);
            let mut rb = stream(7, StreamDomain::Calibration, 2 * r as u64 + 101);
            let a: Vec<f64> = (0..400).map(|_| ra.std_normal()).collect();
            let b: Vec<f64> = (0..400).map(|_| rb.std_normal()).collect();
            if ks_two_sample(&a, &b).unwrap().p_value < alpha {
                rejections += 1;
            }
        }
        let expect = reps as f64 * alpha;
        let band = 3.0 * (reps as f64 * alpha * (1.0 - alpha)).sqrt();
        assert!(
            (rejections as f64 - expect).abs() <= band,
            "{rejections} rejections vs {expect} +- {band}"
        );
    }

    #[test]
    fn chi_square_on_uniform_counts() {
        let obs = vec![95u64, 105, 99, 101, 100, 100, 98, 102];
        let w = vec![1.0; 8];
        let r = chi_square_gof(&obs, &w).unwrap();
        assert_eq!(r.dof, 7);
        assert!(r.p_value > 0.9, "p = {}", r.p_value);
        // grossly wrong expectation rejects
        let w_bad: Vec<f64> = (0..8).map(|i| (i + 1) as f64).collect();
        let r2 = chi_square_gof(&obs, &w_bad).unwrap();
        assert!(r2.p_value < 1e-10);
    }

    #[test]
    fn paired_ratio_tracks_correlation() {
        let mut rng = stream(11, StreamDomain::Calibration, 999);
        let den: Vec<f64> = (0..5000).map(|_| 1.0 + 0.1 * rng.std_normal()).collect();
        let num: Vec<f64> = den.iter().map(|d| 8.0 * d).collect();
        // perfectly correlated: ratio exactly 8 with ~zero stderr
        let (r, se) = paired_ratio(&num, &den);
        assert!((r - 8.0).abs() < 1e-12);
        assert!(se < 1e-12);
    }
}
