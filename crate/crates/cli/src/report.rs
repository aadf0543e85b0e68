//! The JSON check schema and its text rendering. One report per invocation;
//! byte-identical output for identical inputs, seeds, and tolerances (the
//! wall time field is the only exception).

use serde::{Deserialize, Serialize};
use sgl_core::spectra::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One verified claim: `status` is `fail` exactly when `metric` exceeded the
/// tolerance the check declares in `details`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Max violation or residual the check compared against its tolerance;
    /// informational rows carry their headline value instead.
    pub metric: f64,
    pub details: String,
    /// Stable identifier of the claim the check verifies.
    pub paper_anchor: String,
}

impl CheckResult {
    pub fn new(
        name: impl Into<String>,
        pass: bool,
        metric: f64,
        details: impl Into<String>,
        anchor: &str,
    ) -> Self {
        CheckResult {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            metric,
            details: details.into(),
            paper_anchor: format!("claim:{anchor}"),
        }
    }

    pub fn skipped(
        name: impl Into<String>,
        details: impl Into<String>,
        anchor: &str,
    ) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Skipped,
            metric: 0.0,
            details: details.into(),
            paper_anchor: format!("claim:{anchor}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eigen_rel: f64,
    pub cluster_rel: f64,
    pub psd_rel: f64,
    pub match_rel: f64,
}

impl From<&Tolerances> for ToleranceConfig {
    fn from(t: &Tolerances) -> Self {
        ToleranceConfig {
            eigen_rel: t.eigen_rel,
            cluster_rel: t.cluster_rel,
            psd_rel: t.psd_rel,
            match_rel: t.match_rel,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomSweep {
    pub n: usize,
    pub trials: usize,
    pub density: f64,
    pub seed: u64,
}

/// Everything that determined the run, echoed back for reproducibility.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub max_n: usize,
    pub tolerances: ToleranceConfig,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        (&Tolerances::default()).into()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(command: &str, config: RunConfig, checks: Vec<CheckResult>) -> Self {
        let summary = Summary {
            passed: checks.iter().filter(|c| c.status == Status::Pass).count(),
            failed: checks.iter().filter(|c| c.status == Status::Fail).count(),
            skipped: checks.iter().filter(|c| c.status == Status::Skipped).count(),
        };
        Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            checks,
            summary,
            wall_time_ms: 0,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if let Some(g) = &self.config.graph {
            out.push_str(&format!("graph: {g}\n"));
        }
        if let Some(r) = &self.config.random {
            out.push_str(&format!(
                "random sweep: n={} trials={} density={} seed={}\n",
                r.n, r.trials, r.density, r.seed
            ));
        }
        if let Some(c) = &self.config.chain {
            out.push_str(&format!("chain: {c}\n"));
        }
        out.push('\n');
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(4)
            .max(4);
        out.push_str(&format!(
            "{:<8}{:<name_w$}  {:<13}details\n",
            "status", "name", "metric"
        ));
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            out.push_str(&format!(
                "{:<8}{:<name_w$}  {:<13}{}\n",
                status,
                c.name,
                fmt_metric(c.metric),
                c.details
            ));
        }
        out.push_str(&format!(
            "\nsummary: {} passed, {} failed, {} skipped in {} ms\n",
            self.summary.passed, self.summary.failed, self.summary.skipped, self.wall_time_ms
        ));
        out
    }
}

pub fn fmt_metric(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let plain = format!("{v}");
    if v.abs() >= 1e-3 && v.abs() < 1e7 && plain.len() <= 12 {
        plain
    } else {
        format!("{v:.4e}")
    }
}
