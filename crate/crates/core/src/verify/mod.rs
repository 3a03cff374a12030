//! Claim-by-claim verification of the construction.

mod claims;
mod cluster;

pub use claims::{Context, CLAIM_IDS};
pub use cluster::{chart_distance, cluster_estimate, sphere_ring, ClusterEstimate, ClusterRow};

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),
    #[error("unknown tolerance key `{0}`")]
    UnknownTolerance(String),
    #[error("invalid value for `{key}`: {value}")]
    BadValue { key: String, value: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Partial,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Cmp {
    fn holds(self, v: f64, bound: f64) -> bool {
        match self {
            Cmp::Le => v <= bound,
            Cmp::Lt => v < bound,
            Cmp::Ge => v >= bound,
            Cmp::Gt => v > bound,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// An exact polynomial identity; the residual is the zero polynomial when it holds.
    Identity { residual: String, residual_terms: usize },
    /// A sampled quantity compared against a bound; non-finite values are stored as null.
    Numeric { value: Option<f64>, cmp: Cmp, bound: f64, samples: usize },
    /// An exactly computed object compared with its expected value.
    Exact { value: String, expected: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub required: bool,
    pub passed: bool,
    #[serde(flatten)]
    pub evidence: Evidence,
}

impl Witness {
    pub fn identity(label: impl Into<String>, residual: impl fmt::Display, terms: usize) -> Self {
        Self {
            label: label.into(),
            required: true,
            passed: terms == 0,
            evidence: Evidence::Identity { residual: residual.to_string(), residual_terms: terms },
        }
    }

    pub fn numeric(label: impl Into<String>, value: f64, cmp: Cmp, bound: f64, samples: usize) -> Self {
        Self {
            label: label.into(),
            required: true,
            passed: cmp.holds(value, bound),
            evidence: Evidence::Numeric { value: value.is_finite().then_some(value), cmp, bound, samples },
        }
    }

    pub fn exact(label: impl Into<String>, value: impl fmt::Display, expected: impl fmt::Display) -> Self {
        let (value, expected) = (value.to_string(), expected.to_string());
        Self {
            label: label.into(),
            required: true,
            passed: value == expected,
            evidence: Evidence::Exact { value, expected },
        }
    }

    /// A check whose failure downgrades the claim to partial instead of failing it.
    pub fn advisory(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim_id: String,
    pub verdict: Verdict,
    pub mode: Mode,
    pub anchor: String,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cluster: Option<ClusterEstimate>,
}

impl ClaimResult {
    pub fn new(claim_id: &str, mode: Mode, anchor: &str, witnesses: Vec<Witness>) -> Self {
        let verdict = if witnesses.iter().any(|w| w.required && !w.passed) {
            Verdict::Fail
        } else if witnesses.iter().any(|w| !w.passed) {
            Verdict::Partial
        } else {
            Verdict::Pass
        };
        Self { claim_id: claim_id.to_owned(), verdict, mode, anchor: anchor.to_owned(), witnesses, cluster: None }
    }
}

/// Tolerances, sample sizes and schedules of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub seed: u64,
    /// Numeric residual bound for identities checked on samples.
    pub residual: f64,
    /// Bound on the cluster distance at `cluster_radius`.
    pub cluster: f64,
    pub cluster_radius: f64,
    pub radii: Vec<f64>,
    pub phases: usize,
    pub tilts: usize,
    /// Hausdorff bound for the trace on the second exceptional curve.
    pub hausdorff: f64,
    pub window: f64,
    pub trace_spacing: f64,
    pub trace_radius: f64,
    /// Levi and remark samples.
    pub samples: usize,
    /// Distance kept from exceptional curves when sampling for the Levi form.
    pub levi_margin: f64,
    pub avoidance_attempts: usize,
    pub avoidance_radius: f64,
    pub line_samples: usize,
    pub image_samples: usize,
    pub image_seeds: usize,
    /// Allowed relative spread of the image bound across seeds.
    pub image_stability: f64,
    pub sphere_levi: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 7,
            residual: 1e-10,
            cluster: 1e-3,
            cluster_radius: 1e-4,
            radii: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            phases: 72,
            tilts: 9,
            hausdorff: 1e-2,
            window: 3.0,
            trace_spacing: 0.0075,
            trace_radius: 1e-6,
            samples: 10_000,
            levi_margin: 1e-3,
            avoidance_attempts: 100_000,
            avoidance_radius: 0.9,
            line_samples: 100_000,
            image_samples: 100_000,
            image_seeds: 3,
            image_stability: 0.01,
            sphere_levi: 1e-9,
        }
    }
}

/// Keys accepted by [`Config::set`].
pub const TOLERANCE_KEYS: &[&str] = &[
    "residual",
    "cluster",
    "cluster-radius",
    "hausdorff",
    "window",
    "trace-spacing",
    "trace-radius",
    "levi-margin",
    "avoidance-radius",
    "image-stability",
    "sphere-levi",
];

impl Config {
    /// Overrides one tolerance given as `KEY=VALUE`.
    pub fn set(&mut self, assignment: &str) -> Result<(), VerifyError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| VerifyError::BadValue { key: assignment.to_owned(), value: String::new() })?;
        let v: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v > 0.0)
            .ok_or_else(|| VerifyError::BadValue { key: key.to_owned(), value: value.to_owned() })?;
        let slot = match key {
            "residual" => &mut self.residual,
            "cluster" => &mut self.cluster,
            "cluster-radius" => &mut self.cluster_radius,
            "hausdorff" => &mut self.hausdorff,
            "window" => &mut self.window,
            "trace-spacing" => &mut self.trace_spacing,
            "trace-radius" => &mut self.trace_radius,
            "levi-margin" => &mut self.levi_margin,
            "avoidance-radius" => &mut self.avoidance_radius,
            "image-stability" => &mut self.image_stability,
            "sphere-levi" => &mut self.sphere_levi,
            _ => return Err(VerifyError::UnknownTolerance(key.to_owned())),
        };
        *slot = v;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: Config,
    pub conventions: Vec<String>,
    pub claims: Vec<ClaimResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verification report (seed {})", self.config.seed);
        for c in &self.conventions {
            let _ = writeln!(s, "  convention: {c}");
        }
        for claim in &self.claims {
            let verdict = match claim.verdict {
                Verdict::Pass => "PASS",
                Verdict::Partial => "PARTIAL",
                Verdict::Fail => "FAIL",
            };
            let mode = match claim.mode {
                Mode::Symbolic => "symbolic",
                Mode::Numeric => "numeric",
                Mode::Both => "symbolic+numeric",
            };
            let _ = writeln!(s, "\n{} {} [{}]", claim.claim_id, verdict, mode);
            let _ = writeln!(s, "  {}", claim.anchor);
            for w in &claim.witnesses {
                let mark = match (w.passed, w.required) {
                    (true, _) => "ok  ",
                    (false, true) => "FAIL",
                    (false, false) => "warn",
                };
                let detail = match &w.evidence {
                    Evidence::Identity { residual, residual_terms } => {
                        if *residual_terms == 0 {
                            "residual 0".to_owned()
                        } else {
                            format!("residual has {residual_terms} terms: {residual}")
                        }
                    }
                    Evidence::Numeric { value, cmp, bound, samples } => {
                        let v = value.map_or_else(|| "inf".to_owned(), |v| format!("{v:.6e}"));
                        format!("{v} {} {bound:e} (n = {samples})", cmp.symbol())
                    }
                    Evidence::Exact { value, expected } => {
                        if w.passed {
                            value.clone()
                        } else {
                            format!("{value} (expected {expected})")
                        }
                    }
                };
                let _ = writeln!(s, "  [{mark}] {}: {detail}", w.label);
            }
            if let Some(est) = &claim.cluster {
                let _ = writeln!(s, "  radius        max distance   samples");
                for r in &est.rows {
                    let d = r.max_distance.map_or_else(|| "inf".to_owned(), |v| format!("{v:.6e}"));
                    let _ = writeln!(s, "  {:<13e} {:<14} {}", r.radius, d, r.samples);
                }
                if let Some(rate) = est.decay_rate {
                    let _ = writeln!(s, "  fitted decay rate: {rate:.4}");
                }
            }
        }
        let count = |v: Verdict| self.claims.iter().filter(|c| c.verdict == v).count();
        let _ = writeln!(
            s,
            "\nsummary: {} claims, {} pass, {} partial, {} fail",
            self.claims.len(),
            count(Verdict::Pass),
            count(Verdict::Partial),
            count(Verdict::Fail)
        );
        s
    }
}

/// Runs every claim, or just `only`, in the fixed claim order.
pub fn run(config: &Config, only: Option<&str>) -> Result<Report, VerifyError> {
    if let Some(id) = only {
        if !CLAIM_IDS.contains(&id) {
            return Err(VerifyError::UnknownClaim(id.to_owned()));
        }
    }
    let ctx = Context::new(config.clone());
    let claims = CLAIM_IDS
        .iter()
        .filter(|id| only.is_none_or(|o| o == **id))
        .map(|id| ctx.claim(id))
        .collect();
    Ok(Report { config: config.clone(), conventions: claims::conventions(), claims })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        let ok = Witness::numeric("a", 1.0, Cmp::Le, 2.0, 1);
        let bad = Witness::numeric("b", 3.0, Cmp::Le, 2.0, 1);
        assert_eq!(ClaimResult::new("x", Mode::Numeric, "", vec![ok.clone()]).verdict, Verdict::Pass);
        assert_eq!(ClaimResult::new("x", Mode::Numeric, "", vec![ok.clone(), bad.clone().advisory()]).verdict, Verdict::Partial);
        assert_eq!(ClaimResult::new("x", Mode::Numeric, "", vec![ok, bad]).verdict, Verdict::Fail);
    }

    #[test]
    fn tolerance_overrides() {
        let mut c = Config::default();
        c.set("cluster=1e-12").unwrap();
        assert_eq!(c.cluster, 1e-12);
        assert_eq!(c.set("bogus=1"), Err(VerifyError::UnknownTolerance("bogus".into())));
        assert!(matches!(c.set("cluster=abc"), Err(VerifyError::BadValue { .. })));
        assert!(matches!(c.set("cluster"), Err(VerifyError::BadValue { .. })));
    }

    #[test]
    fn non_finite_numeric_round_trips() {
        let w = Witness::numeric("d", f64::INFINITY, Cmp::Le, 1.0, 0);
        let r = Report {
            config: Config::default(),
            conventions: vec![],
            claims: vec![ClaimResult::new("x", Mode::Numeric, "", vec![w])],
        };
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn unknown_claim_rejected() {
        assert_eq!(run(&Config::default(), Some("nope")).unwrap_err(), VerifyError::UnknownClaim("nope".into()));
    }
}
