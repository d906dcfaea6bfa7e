//! CVDT and CMIT structure estimators.
//!
//! Both learners share one scaffold: for every unordered pair, minimise a
//! pair statistic over conditioning sets `S ⊆ V \ {i, j}` with `|S| <= η`
//! and declare an edge when the minimum exceeds the threshold ξ. The
//! minimisation is done once per sample set in [`PairStatistics`]; any
//! number of thresholds can then be applied without touching the data.

mod engine;
mod pac;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ising::{exact_joint, ExactJoint, IsingModel};
use crate::samples::SampleSet;

pub use pac::{
    check_threshold_feasibility, pac_sample_size, pac_threshold, recoverable_edge_set, PacParams,
    ThresholdFeasibility, Verdict,
};

/// Exact statistics below this are treated as an exact zero.
pub(crate) const EXACT_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "CVDT", alias = "cvdt")]
    Cvdt,
    #[serde(rename = "CMIT", alias = "cmit")]
    Cmit,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Cvdt, Method::Cmit];

    pub fn label(self) -> &'static str {
        match self {
            Method::Cvdt => "CVDT",
            Method::Cmit => "CMIT",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cvdt" => Ok(Method::Cvdt),
            "cmit" => Ok(Method::Cmit),
            _ => Err(Error::InvalidParameter(format!("unknown method `{s}`"))),
        }
    }
}

/// How the two orientations of the asymmetric variation distance combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRule {
    /// Edge if either `min_S ν_{i|j;S}` or `min_S ν_{j|i;S}` exceeds ξ.
    #[default]
    OrderedOr,
    /// Edge if `min_S max(ν_{i|j;S}, ν_{j|i;S})` exceeds ξ.
    MaxOfBoth,
}

impl std::str::FromStr for PairRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "ordered_or" | "orderedor" => Ok(PairRule::OrderedOr),
            "max_of_both" | "maxofboth" => Ok(PairRule::MaxOfBoth),
            _ => Err(Error::InvalidParameter(format!("unknown pair rule `{s}`"))),
        }
    }
}

impl std::fmt::Display for PairRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairRule::OrderedOr => "ordered_or",
            PairRule::MaxOfBoth => "max_of_both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub eta: usize,
    pub xi: f64,
    pub method: Method,
    #[serde(default)]
    pub pair_rule: PairRule,
}

impl LearnerConfig {
    pub fn new(eta: usize, xi: f64, method: Method) -> Result<Self> {
        let cfg = LearnerConfig {
            eta,
            xi,
            method,
            pair_rule: PairRule::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_pair_rule(mut self, rule: PairRule) -> Self {
        self.pair_rule = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return Err(Error::InvalidParameter(format!("xi must be positive, got {}", self.xi)));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: LearnerConfig =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("learner config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A running minimum and the first conditioning set attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub value: f64,
    pub set: Vec<usize>,
}

impl Minimum {
    fn unset() -> Self {
        Minimum {
            value: f64::INFINITY,
            set: Vec::new(),
        }
    }

    #[inline]
    fn offer(&mut self, value: f64, set: &[usize]) {
        if value < self.value {
            self.value = value;
            self.set.clear();
            self.set.extend_from_slice(set);
        }
    }
}

/// Minimised statistics of one unordered pair `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    /// `min_S ν_{i|j;S}`
    pub forward: Minimum,
    /// `min_S ν_{j|i;S}`
    pub backward: Minimum,
    /// `min_S max(ν_{i|j;S}, ν_{j|i;S})`
    pub max_both: Minimum,
    /// `min_S I(X_i; X_j | X_S)`
    pub cmi: Minimum,
}

impl PairEntry {
    /// The pair statistic compared against ξ, with its conditioning set.
    pub fn statistic(&self, method: Method, rule: PairRule) -> &Minimum {
        match (method, rule) {
            (Method::Cmit, _) => &self.cmi,
            (Method::Cvdt, PairRule::MaxOfBoth) => &self.max_both,
            (Method::Cvdt, PairRule::OrderedOr) => {
                if self.backward.value > self.forward.value {
                    &self.backward
                } else {
                    &self.forward
                }
            }
        }
    }
}

/// Cached per-pair statistics for one sample set and one η.
#[derive(Debug, Clone, PartialEq)]
pub struct PairStatistics {
    p: usize,
    eta: usize,
    entries: Vec<PairEntry>,
}

impl PairStatistics {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    /// Entries for all pairs `i < j` in lexicographic order.
    pub fn entries(&self) -> &[PairEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&PairEntry> {
        let (a, b) = (i.min(j), i.max(j));
        if a == b || b >= self.p {
            return None;
        }
        // offset of row a in the lexicographic pair list
        let idx = a * (2 * self.p - a - 1) / 2 + (b - a - 1);
        self.entries.get(idx)
    }

    /// The graph of pairs whose statistic strictly exceeds `xi`.
    pub fn threshold(&self, xi: f64, method: Method, rule: PairRule) -> Graph {
        let mut g = Graph::empty(self.p);
        for e in &self.entries {
            if e.statistic(method, rule).value > xi {
                g.insert_edge(e.i, e.j);
            }
        }
        g
    }

    /// Writes `i,j,best_S,statistic` rows; `best_S` is space-separated.
    pub fn write_csv<W: Write>(&self, writer: W, method: Method, rule: PairRule) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let fail = |e: csv::Error| Error::Format(format!("writing statistics: {e}"));
        w.write_record(["i", "j", "best_S", "statistic"]).map_err(fail)?;
        for e in &self.entries {
            let m = e.statistic(method, rule);
            let set: Vec<String> = m.set.iter().map(usize::to_string).collect();
            w.write_record([
                e.i.to_string(),
                e.j.to_string(),
                set.join(" "),
                m.value.to_string(),
            ])
            .map_err(fail)?;
        }
        w.flush().map_err(|e| Error::Format(format!("writing statistics: {e}")))?;
        Ok(())
    }
}

fn require_method(config: &LearnerConfig, method: Method) -> Result<()> {
    config.validate()?;
    if config.method != method {
        return Err(Error::PreconditionViolation(format!(
            "config selects {}, not {method}",
            config.method
        )));
    }
    Ok(())
}

/// Runs the configured learner and returns the graph together with the
/// statistics it was thresholded from.
pub fn learn_with_statistics(samples: &SampleSet, config: &LearnerConfig) -> Result<(Graph, PairStatistics)> {
    config.validate()?;
    let stats = PairStatistics::from_samples(samples, config.eta);
    let g = stats.threshold(config.xi, config.method, config.pair_rule);
    Ok((g, stats))
}

pub fn learn(samples: &SampleSet, config: &LearnerConfig) -> Result<Graph> {
    learn_with_statistics(samples, config).map(|(g, _)| g)
}

/// Conditional variation distance thresholding.
pub fn cvdt(samples: &SampleSet, config: &LearnerConfig) -> Result<Graph> {
    require_method(config, Method::Cvdt)?;
    learn(samples, config)
}

/// Conditional mutual information thresholding.
pub fn cmit(samples: &SampleSet, config: &LearnerConfig) -> Result<Graph> {
    require_method(config, Method::Cmit)?;
    learn(samples, config)
}

/// The configured learner with population statistics in place of empirical ones.
pub fn learn_exact(joint: &ExactJoint, config: &LearnerConfig) -> Result<Graph> {
    config.validate()?;
    Ok(PairStatistics::from_exact(joint, config.eta).threshold(config.xi, config.method, config.pair_rule))
}

/// Exact pair statistics of a small model.
pub fn exact_pair_statistics(model: &IsingModel, eta: usize) -> Result<PairStatistics> {
    Ok(PairStatistics::from_exact(&exact_joint(model)?, eta))
}
