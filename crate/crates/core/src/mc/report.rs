//! Experiment reports: estimates with standard errors, test statistics
//! with p-values, and pass/fail verdicts that cite their thresholds.
//!
//! The JSON form is canonical and excludes wall time, so identical seeds
//! produce byte-identical reports regardless of worker count; wall time
//! goes to the human-readable table only.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub label: String,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatKind {
    Ks,
    ChiSquare,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatLine {
    pub label: String,
    pub kind: StatKind,
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub label: String,
    pub pass: bool,
    /// Human-readable statement of the gate, e.g. "|x - 8/21| <= 3 se".
    pub threshold: String,
    pub observed: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub config: serde_json::Value,
    pub estimates: Vec<Estimate>,
    pub statistics: Vec<StatLine>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip)]
    pub wall_time: f64,
}

impl ExperimentReport {
    pub fn new(name: &str, config: serde_json::Value) -> ExperimentReport {
        ExperimentReport {
            name: name.to_owned(),
            config,
            estimates: Vec::new(),
            statistics: Vec::new(),
            verdicts: Vec::new(),
            wall_time: 0.0,
        }
    }

    pub fn estimate(&mut self, label: impl Into<String>, value: f64, stderr: f64) {
        self.estimates.push(Estimate { label: label.into(), value, stderr });
    }

    pub fn stat(&mut self, label: impl Into<String>, kind: StatKind, statistic: f64, p_value: f64) {
        self.statistics.push(StatLine { label: label.into(), kind, statistic, p_value });
    }

    pub fn verdict(&mut self, label: impl Into<String>, pass: bool, threshold: impl Into<String>, observed: f64) {
        self.verdicts.push(Verdict {
            label: label.into(),
            pass,
            threshold: threshold.into(),
            observed,
        });
    }

    /// A KS statistic line together with its p > alpha gate.
    pub fn ks_gate(&mut self, label: &str, ks: super::stats::KsResult, alpha: f64) {
        self.stat(label, StatKind::Ks, ks.statistic, ks.p_value);
        self.verdict(label, ks.p_value > alpha, format!("KS p-value > {alpha}"), ks.p_value);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Canonical machine form (deterministic field order, no wall time).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text table for humans; includes wall time.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("experiment: {}\n", self.name));
        out.push_str(&format!("config: {}\n", self.config));
        if !self.estimates.is_empty() {
            out.push_str("estimates:\n");
            for e in &self.estimates {
                out.push_str(&format!("  {:<44} {:>14.6e} +- {:.2e}\n", e.label, e.value, e.stderr));
            }
        }
        if !self.statistics.is_empty() {
            out.push_str("statistics:\n");
            for s in &self.statistics {
                out.push_str(&format!(
                    "  {:<44} {:>10.4} p={:.4}\n",
                    s.label, s.statistic, s.p_value
                ));
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("verdicts:\n");
            for v in &self.verdicts {
                out.push_str(&format!(
                    "  [{}] {:<40} ({}; observed {:.6e})\n",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.label,
                    v.threshold,
                    v.observed
                ));
            }
        }
        out.push_str(&format!(
            "overall: {}  (wall {:.2}s)\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.wall_time
        ));
        out
    }
}
