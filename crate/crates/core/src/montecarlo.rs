//! Replication harness for the limit theorems.
//!
//! For each sample size `n` and replication `k`, a count table is drawn from
//! `replication_stream(master_seed, n_index, k)` and turned into a
//! [`ReplicationRecord`]: estimate, `η_n`, `√n·η_n`, plug-in variance and
//! confidence interval. Replications run in parallel; records are collected
//! in `(n_index, rep_index)` order, so output does not depend on the number
//! of worker threads.
//!
//! Normality is assessed on `√n·η_n / σ` with the exact `σ` from
//! [`exact_sigma2`]; coverage uses the intervals built from the plug-in
//! `σ̂²`. Degenerate replications are reported and excluded from both.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{confidence_interval, exact_sigma2, plugin_sigma2, VarianceResult};
use crate::bounds::{bound_conditional_cell_p, bound_conditional_cell_q, BoundInputs};
use crate::error::{Error, Result};
use crate::estimator::{plug_in_estimate, Degeneracy};
use crate::model::{sample_batch, PopulationModel};
use crate::normal;
use crate::rng::{replication_stream, MAX_REPLICATIONS};

/// Kolmogorov critical constant at α = 0.01 (asymptotic).
pub const KOLMOGOROV_C99: f64 = 1.63;
/// Floor on the KS threshold used by the normality check.
pub const KS_THRESHOLD_FLOOR: f64 = 0.04;
/// Floor on the coverage tolerance band half-width.
pub const COVERAGE_BAND_FLOOR: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Lln,
    Clt,
    Coverage,
    Bounds,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Lln => "lln",
            Check::Clt => "clt",
            Check::Coverage => "coverage",
            Check::Bounds => "bounds",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: PopulationModel,
    /// Strictly ascending.
    pub n_values: Vec<u64>,
    pub replications: usize,
    pub master_seed: u64,
    pub ci_level: f64,
    pub checks: BTreeSet<Check>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.replications == 0 {
            return invalid("replications must be at least 1");
        }
        if self.replications as u64 >= MAX_REPLICATIONS {
            return invalid("too many replications");
        }
        if self.n_values.is_empty() {
            return invalid("n_values must be nonempty");
        }
        if self.n_values[0] == 0 {
            return invalid("sample sizes must be at least 1");
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("n_values must be strictly ascending");
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::InvalidLevel(self.ci_level));
        }
        if self.checks.contains(&Check::Clt) && self.model.is_null() {
            return Err(Error::NullModel);
        }
        Ok(())
    }
}

/// One replication. All statistics are `None` when the sample is degenerate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub rep_index: usize,
    pub n: u64,
    pub estimate: Option<f64>,
    pub eta: Option<f64>,
    pub scaled_eta: Option<f64>,
    pub sigma2_hat: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub covered: Option<bool>,
    pub degenerate: Option<Degeneracy>,
}

impl ReplicationRecord {
    pub fn is_degenerate(&self) -> bool {
        self.degenerate.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub median: f64,
    /// Unbiased; `None` for fewer than two values.
    pub variance: Option<f64>,
}

impl Moments {
    fn of(xs: &[f64]) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let variance = (xs.len() > 1).then(|| xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0));
        Some(Self { mean, median: median(xs), variance })
    }
}

/// Per-sample-size summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub n: u64,
    pub replications: usize,
    pub degenerate_count: usize,
    pub eta: Option<Moments>,
    pub scaled_eta: Option<Moments>,
    /// KS distance of `√n·η_n / σ` to `N(0, 1)`; `None` at the null.
    pub ks_distance: Option<f64>,
    pub coverage_rate: Option<f64>,
    /// Sample variance of `√n·η_n` divided by the exact `σ²`.
    pub variance_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub true_divergence: f64,
    pub sigma2: VarianceResult,
    pub records: Vec<ReplicationRecord>,
    pub summaries: Vec<SummaryStats>,
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn replicate(config: &ExperimentConfig, truth: f64, n_index: usize, rep_index: usize) -> ReplicationRecord {
    let n = config.n_values[n_index];
    let counts = sample_batch(&config.model, n, replication_stream(config.master_seed, n_index, rep_index))
        .expect("validated sample size");
    let estimate = plug_in_estimate(&counts);
    let Some(value) = estimate.value() else {
        return ReplicationRecord {
            rep_index,
            n,
            estimate: None,
            eta: None,
            scaled_eta: None,
            sigma2_hat: None,
            ci_lo: None,
            ci_hi: None,
            covered: None,
            degenerate: estimate.degeneracy(),
        };
    };
    let var = plugin_sigma2(&counts).expect("non-degenerate counts");
    let ci = confidence_interval(&estimate, &var, config.ci_level).expect("validated level");
    let eta = value - truth;
    ReplicationRecord {
        rep_index,
        n,
        estimate: Some(value),
        eta: Some(eta),
        scaled_eta: Some((n as f64).sqrt() * eta),
        sigma2_hat: Some(var.sigma2),
        ci_lo: Some(ci.lower),
        ci_hi: Some(ci.upper),
        covered: Some(ci.contains(truth)),
        degenerate: None,
    }
}

/// Runs every replication and summarizes each sample size.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let truth = config.model.true_divergence();
    let sigma2 = exact_sigma2(&config.model);
    let jobs: Vec<(usize, usize)> =
        (0..config.n_values.len()).flat_map(|ni| (0..config.replications).map(move |rep| (ni, rep))).collect();
    let records: Vec<ReplicationRecord> = jobs.par_iter().map(|&(ni, rep)| replicate(config, truth, ni, rep)).collect();
    if records.iter().all(ReplicationRecord::is_degenerate) {
        return Err(Error::AllDegenerate);
    }
    let summaries = records.chunks(config.replications).map(|chunk| summarize(chunk, truth, sigma2.sigma2)).collect();
    Ok(ExperimentOutput { true_divergence: truth, sigma2, records, summaries })
}

fn summarize(records: &[ReplicationRecord], truth: f64, sigma2: f64) -> SummaryStats {
    let eta: Vec<f64> = records.iter().filter_map(|r| r.eta).collect();
    let scaled: Vec<f64> = records.iter().filter_map(|r| r.scaled_eta).collect();
    let scaled_moments = Moments::of(&scaled);
    let ks_distance = if sigma2 > 0.0 && !scaled.is_empty() {
        let sigma = sigma2.sqrt();
        let standardized: Vec<f64> = scaled.iter().map(|x| x / sigma).collect();
        ks_statistic(&standardized).ok()
    } else {
        None
    };
    SummaryStats {
        n: records[0].n,
        replications: records.len(),
        degenerate_count: records.len() - eta.len(),
        eta: Moments::of(&eta),
        scaled_eta: scaled_moments,
        ks_distance,
        coverage_rate: coverage_rate(records, truth).ok(),
        variance_ratio: scaled_moments.and_then(|m| m.variance).filter(|_| sigma2 > 0.0).map(|v| v / sigma2),
    }
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `sample` and
/// the standard normal CDF.
pub fn ks_statistic(sample: &[f64]) -> Result<f64> {
    ks_statistic_against(sample, normal::cdf)
}

/// `sup_x |F_m(x) − F(x)| = max_i max(i/m − F(x_(i)), F(x_(i)) − (i−1)/m)`.
pub fn ks_statistic_against<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let d = sorted.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = cdf(x);
        let i = i as f64;
        acc.max((i + 1.0) / m - f).max(f - i / m)
    });
    Ok(d)
}

/// Fraction of non-degenerate records whose interval contains `true_value`.
pub fn coverage_rate(records: &[ReplicationRecord], true_value: f64) -> Result<f64> {
    let (hits, usable) = records
        .iter()
        .filter_map(|r| Some((r.ci_lo?, r.ci_hi?)))
        .fold((0usize, 0usize), |(h, u), (lo, hi)| (h + usize::from(lo <= true_value && true_value <= hi), u + 1));
    if usable == 0 {
        return Err(Error::NoUsableRecords);
    }
    Ok(hits as f64 / usable as f64)
}

/// Median `|η_n|` per sample size over non-degenerate records.
pub fn lln_curve(records: &[ReplicationRecord]) -> Result<BTreeMap<u64, f64>> {
    let mut by_n: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for r in records {
        let slot = by_n.entry(r.n).or_default();
        if let Some(eta) = r.eta {
            slot.push(eta.abs());
        }
    }
    if by_n.len() < 2 {
        return Err(Error::TooFewSampleSizes(by_n.len()));
    }
    by_n.into_iter()
        .map(|(n, v)| if v.is_empty() { Err(Error::NoUsableRecords) } else { Ok((n, median(&v))) })
        .collect()
}

/// Union bound on the probability that a sample of size `n` is degenerate:
/// `r · (B_p + B_q)` with the conditional-cell bounds at
/// `g = min_j min(p_j, q_j) / 2`. An empty cell `j` in either class forces a
/// deviation of at least `p_j` (resp. `q_j`) > `g`.
pub fn degenerate_rate_bound(model: &PopulationModel, n: u64) -> Result<f64> {
    let g = 0.5 * model.cond_p().min().min(model.cond_q().min());
    let inputs = BoundInputs::new(model, n, g)?;
    let r = model.alphabet().size() as f64;
    Ok(r * (bound_conditional_cell_p(&inputs).value + bound_conditional_cell_q(&inputs).value))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub detail: String,
}

/// KS threshold for `m` standardized values: `max(0.04, 1.63/√m)`.
pub fn ks_threshold(m: usize) -> f64 {
    KS_THRESHOLD_FLOOR.max(KOLMOGOROV_C99 / (m as f64).sqrt())
}

/// Coverage tolerance: `max(0.02, 3·√(ℓ(1−ℓ)/m))` around the nominal level `ℓ`.
pub fn coverage_band(level: f64, m: usize) -> f64 {
    COVERAGE_BAND_FLOOR.max(3.0 * (level * (1.0 - level) / m as f64).sqrt())
}

/// Evaluates the requested `lln`, `clt` and `coverage` checks against an
/// experiment's output. `clt` and `coverage` are judged at the largest
/// sample size. The `bounds` check is run separately.
pub fn evaluate_checks(config: &ExperimentConfig, output: &ExperimentOutput) -> Vec<CheckOutcome> {
    let last = output.summaries.last().expect("at least one sample size");
    let usable = last.replications - last.degenerate_count;
    config
        .checks
        .iter()
        .filter(|c| **c != Check::Bounds)
        .map(|&check| {
            let (passed, detail) = match check {
                Check::Lln => match lln_curve(&output.records) {
                    Ok(curve) => {
                        let medians: Vec<f64> = curve.values().copied().collect();
                        let ok = medians.windows(2).all(|w| w[1] < w[0]);
                        (ok, format!("median |eta| by n: {curve:?}"))
                    }
                    Err(e) => (false, e.to_string()),
                },
                Check::Clt => match last.ks_distance {
                    Some(d) => {
                        let t = ks_threshold(usable);
                        (d <= t, format!("KS distance {d:.5} at n={} (threshold {t:.5})", last.n))
                    }
                    None => (false, "KS distance unavailable".to_string()),
                },
                Check::Coverage => match last.coverage_rate {
                    Some(c) => {
                        let band = coverage_band(config.ci_level, usable);
                        let ok = (c - config.ci_level).abs() <= band;
                        (ok, format!("coverage {c:.4} at n={} (nominal {} ± {band:.4})", last.n, config.ci_level))
                    }
                    None => (false, "no usable intervals".to_string()),
                },
                Check::Bounds => unreachable!(),
            };
            CheckOutcome { check, passed, detail }
        })
        .collect()
}
