//! Monte Carlo experiment harness: two-sample statistics, reports, and
//! the distributional experiments that cross-validate the time-change
//! construction against the direct SDE system and the analytic layer.

pub mod experiments;
pub mod report;
pub mod stats;

pub use experiments::{
    ergodic_experiment, gamma_experiment, markov_kernel_experiment, moment_experiment,
    mu_coupling_experiment, reversal_experiment, scale_invariance_experiment,
    two_route_experiment, with_halved_dt, McError, P_GATE,
};
pub use report::{Estimate, ExperimentReport, StatKind, StatLine, Verdict};
pub use stats::{chi_square_gof, kolmogorov_q, ks_two_sample, mean_stderr, paired_ratio, KsResult, StatsError};
