//! Confusion-matrix metrics, seed aggregation and the Wilcoxon signed-rank test.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

/// Largest effective sample size handled by the exact null distribution.
pub const EXACT_MAX_N: usize = 25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("nothing to evaluate")]
    Empty,
    #[error("label {0} is not 0 or 1")]
    BadLabel(u8),
    #[error("seed sets differ: {left:?} vs {right:?}")]
    SeedMismatch { left: Vec<u64>, right: Vec<u64> },
    #[error("duplicate seed {0} within one condition")]
    DuplicateSeed(u64),
    #[error("non-finite value in sample")]
    NonFinite,
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    Accuracy,
    Precision,
    Recall,
    F1,
    F2,
}

impl MetricName {
    pub const ALL: [MetricName; 5] = [
        MetricName::Accuracy,
        MetricName::Precision,
        MetricName::Recall,
        MetricName::F1,
        MetricName::F2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricName::Accuracy => "accuracy",
            MetricName::Precision => "precision",
            MetricName::Recall => "recall",
            MetricName::F1 => "f1",
            MetricName::F2 => "f2",
        }
    }

    pub fn of(self, m: &Metrics) -> f64 {
        match self {
            MetricName::Accuracy => m.accuracy,
            MetricName::Precision => m.precision,
            MetricName::Recall => m.recall,
            MetricName::F1 => m.f1,
            MetricName::F2 => m.f2,
        }
    }

    fn set(self, m: &mut Metrics, v: f64) {
        match self {
            MetricName::Accuracy => m.accuracy = v,
            MetricName::Precision => m.precision = v,
            MetricName::Recall => m.recall = v,
            MetricName::F1 => m.f1 = v,
            MetricName::F2 => m.f2 = v,
        }
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricName {
    type Err = EvalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| EvalError::UnknownMetric(s.to_string()))
    }
}

/// Where a report came from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Condition {
    pub dataset: String,
    pub template: Option<String>,
    pub provider: Option<String>,
    pub encoder: String,
    pub max_seq_len: usize,
    pub seed: u64,
    /// Method name; `single` for the trained classifier.
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    #[serde(flatten)]
    pub metrics: Metrics,
    #[serde(default)]
    pub condition: Condition,
}

impl EvalReport {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn with_condition(mut self, condition: Condition) -> Self {
        self.condition = condition;
        self
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `F_beta` with the 0/0 convention giving 0.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    ratio((1.0 + b2) * precision * recall, b2 * precision + recall)
}

pub fn metrics_from_counts(tp: usize, fp: usize, tn: usize, fn_: usize) -> Metrics {
    let (tp_f, fp_f, tn_f, fn_f) = (tp as f64, fp as f64, tn as f64, fn_ as f64);
    let precision = ratio(tp_f, tp_f + fp_f);
    let recall = ratio(tp_f, tp_f + fn_f);
    Metrics {
        accuracy: ratio(tp_f + tn_f, tp_f + fp_f + tn_f + fn_f),
        precision,
        recall,
        f1: f_beta(precision, recall, 1.0),
        f2: f_beta(precision, recall, 2.0),
    }
}

pub fn compute_metrics(predictions: &[u8], labels: &[u8]) -> Result<EvalReport, EvalError> {
    if predictions.len() != labels.len() {
        return Err(EvalError::LengthMismatch {
            left: predictions.len(),
            right: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(EvalError::Empty);
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p, l) {
            (1, 1) => tp += 1,
            (1, 0) => fp += 1,
            (0, 0) => tn += 1,
            (0, 1) => fn_ += 1,
            (bad, _) if bad > 1 => return Err(EvalError::BadLabel(bad)),
            (_, bad) => return Err(EvalError::BadLabel(bad)),
        }
    }
    Ok(EvalReport {
        tp,
        fp,
        tn,
        fn_,
        metrics: metrics_from_counts(tp, fp, tn, fn_),
        condition: Condition::default(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WilcoxonMethod {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    pub n_effective: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    pub t: f64,
    pub p_value: f64,
    pub method: WilcoxonMethod,
}

/// Non-zero differences with their average ranks (1-based) over `|d|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedRanks {
    pub diffs: Vec<f64>,
    pub ranks: Vec<f64>,
    /// Sizes of groups of tied absolute differences.
    pub tie_groups: Vec<usize>,
}

pub fn signed_ranks(a: &[f64], b: &[f64]) -> Result<SignedRanks, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(EvalError::Empty);
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(EvalError::NonFinite);
    }
    let diffs: Vec<f64> = diffs.into_iter().filter(|&d| d != 0.0).collect();
    let mut order: Vec<usize> = (0..diffs.len()).collect();
    order.sort_by(|&i, &j| diffs[i].abs().total_cmp(&diffs[j].abs()));
    let mut ranks = vec![0.0; diffs.len()];
    let mut tie_groups = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && diffs[order[end]].abs() == diffs[order[start]].abs() {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        tie_groups.push(end - start);
        start = end;
    }
    Ok(SignedRanks {
        diffs,
        ranks,
        tie_groups,
    })
}

/// Two-sided signed-rank test, exact up to [`EXACT_MAX_N`] effective pairs.
pub fn wilcoxon(a: &[f64], b: &[f64]) -> Result<WilcoxonResult, EvalError> {
    wilcoxon_with(a, b, None)
}

/// Like [`wilcoxon`], optionally forcing the null distribution used.
pub fn wilcoxon_with(a: &[f64], b: &[f64], force: Option<WilcoxonMethod>) -> Result<WilcoxonResult, EvalError> {
    let sr = signed_ranks(a, b)?;
    let n = sr.diffs.len();
    let w_plus: f64 = sr.diffs.iter().zip(&sr.ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let w_minus: f64 = sr.diffs.iter().zip(&sr.ranks).filter(|(d, _)| **d < 0.0).map(|(_, r)| r).sum();
    let t = w_plus.min(w_minus);
    if n == 0 {
        return Ok(WilcoxonResult {
            n_effective: 0,
            w_plus,
            w_minus,
            t,
            p_value: 1.0,
            method: WilcoxonMethod::Exact,
        });
    }
    let method = force.unwrap_or(if n <= EXACT_MAX_N {
        WilcoxonMethod::Exact
    } else {
        WilcoxonMethod::NormalApprox
    });
    let p_value = match method {
        WilcoxonMethod::Exact => exact_p(&sr.ranks, t),
        WilcoxonMethod::NormalApprox => normal_p(n, &sr.tie_groups, t),
    };
    Ok(WilcoxonResult {
        n_effective: n,
        w_plus,
        w_minus,
        t,
        p_value: p_value.clamp(0.0, 1.0),
        method,
    })
}

/// Fraction of the `2^n` sign assignments whose `min(W+, W-)` is at most `t`.
///
/// Average ranks are multiples of 1/2, so the null distribution of `2 W+` is
/// counted over integers. This yields the same count as enumerating every
/// sign vector.
fn exact_p(ranks: &[f64], t: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] != 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let t2 = (t * 2.0).round() as usize;
    let hits: f64 = counts
        .iter()
        .enumerate()
        .filter(|(s, _)| (*s).min(total - s) <= t2)
        .map(|(_, c)| c)
        .sum();
    hits / 2f64.powi(ranks.len() as i32)
}

fn normal_p(n: usize, tie_groups: &[usize], t: f64) -> f64 {
    let nf = n as f64;
    let mu = nf * (nf + 1.0) / 4.0;
    let tie: f64 = tie_groups.iter().map(|&g| (g as f64).powi(3) - g as f64).sum();
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = (t - mu + 0.5) / var.sqrt();
    let phi = Normal::new(0.0, 1.0).expect("standard normal").cdf(z);
    (2.0 * phi).min(1.0)
}

/// Mean and sample standard deviation of each metric across seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub seeds: Vec<u64>,
    pub mean: Metrics,
    pub sd: Metrics,
}

pub fn aggregate(reports: &[EvalReport]) -> Result<Summary, EvalError> {
    if reports.is_empty() {
        return Err(EvalError::Empty);
    }
    by_seed(reports)?;
    let n = reports.len() as f64;
    let mut mean = Metrics::default();
    let mut sd = Metrics::default();
    for m in MetricName::ALL {
        let vals: Vec<f64> = reports.iter().map(|r| m.of(&r.metrics)).collect();
        let mu = vals.iter().sum::<f64>() / n;
        let var = if reports.len() > 1 {
            vals.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        m.set(&mut mean, mu);
        m.set(&mut sd, var.sqrt());
    }
    Ok(Summary {
        n: reports.len(),
        seeds: reports.iter().map(|r| r.condition.seed).collect(),
        mean,
        sd,
    })
}

fn by_seed(reports: &[EvalReport]) -> Result<BTreeMap<u64, &EvalReport>, EvalError> {
    let mut map = BTreeMap::new();
    for r in reports {
        if map.insert(r.condition.seed, r).is_some() {
            return Err(EvalError::DuplicateSeed(r.condition.seed));
        }
    }
    Ok(map)
}

/// Metric values of two conditions aligned by seed (ascending).
pub fn paired(a: &[EvalReport], b: &[EvalReport], metric: MetricName) -> Result<(Vec<f64>, Vec<f64>), EvalError> {
    let ma = by_seed(a)?;
    let mb = by_seed(b)?;
    if !ma.keys().eq(mb.keys()) {
        return Err(EvalError::SeedMismatch {
            left: ma.keys().copied().collect(),
            right: mb.keys().copied().collect(),
        });
    }
    Ok(ma
        .iter()
        .zip(mb.values())
        .map(|((_, ra), rb)| (metric.of(&ra.metrics), metric.of(&rb.metrics)))
        .unzip())
}
