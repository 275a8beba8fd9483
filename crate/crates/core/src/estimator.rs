//! Empirical measures and the plug-in symmetric-KL estimator.
//!
//! ```text
//! p̂_j = #{X = a_j, Y = 1} / #{Y = 1}      q̂_j = #{X = a_j, Y = 0} / #{Y = 0}
//! p̂_n = #{Y = 1} / n                       q̂_n = #{Y = 0} / n
//! D̂   = Σ_j (p̂_j − q̂_j) ln(p̂_j / q̂_j)
//! ```
//!
//! An empty label class or an empty cell makes `D̂` undefined. That outcome
//! is reported as a [`Degeneracy`] rather than as an infinite or smoothed
//! value.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{sym_kl_unchecked, CountTable, Label, PopulationModel, ProbVector};

/// Why a count table admits no plug-in estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Degeneracy {
    /// No observation carries this label.
    EmptyLabelClass { label: u8 },
    /// Cell `index` (zero-based) has no observation within its label class.
    ZeroCell { label: u8, index: usize },
}

impl Degeneracy {
    fn label_of(label: Label) -> u8 {
        match label {
            Label::One => 1,
            Label::Zero => 0,
        }
    }
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::EmptyLabelClass { label } => write!(f, "no observations with Y={label}"),
            Degeneracy::ZeroCell { label, index } => {
                write!(f, "empty cell a_{} within Y={label}", index + 1)
            }
        }
    }
}

/// Within-class frequencies and label frequencies of a count table.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasures {
    /// `p̂`, absent when no observation has `Y = 1`.
    pub p_hat: Option<Vec<f64>>,
    /// `q̂`, absent when no observation has `Y = 0`.
    pub q_hat: Option<Vec<f64>>,
    /// `p̂_n`.
    pub p_n_hat: f64,
    /// `q̂_n = 1 − p̂_n`.
    pub q_n_hat: f64,
    pub n: u64,
}

impl EmpiricalMeasures {
    /// First reason, if any, why the log-ratio estimator is undefined.
    pub fn degeneracy(&self) -> Option<Degeneracy> {
        for (label, hat) in [(Label::One, &self.p_hat), (Label::Zero, &self.q_hat)] {
            let label = Degeneracy::label_of(label);
            match hat {
                None => return Some(Degeneracy::EmptyLabelClass { label }),
                Some(v) => {
                    if let Some(index) = v.iter().position(|&x| x <= 0.0) {
                        return Some(Degeneracy::ZeroCell { label, index });
                    }
                }
            }
        }
        None
    }
}

fn class_frequencies(counts: &[u64]) -> Option<Vec<f64>> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return None;
    }
    let total = total as f64;
    Some(counts.iter().map(|&c| c as f64 / total).collect())
}

pub fn empirical_measures(counts: &CountTable) -> EmpiricalMeasures {
    let n = counts.n();
    let p_n_hat = if n == 0 { 0.0 } else { counts.class_total(Label::One) as f64 / n as f64 };
    EmpiricalMeasures {
        p_hat: class_frequencies(counts.n1()),
        q_hat: class_frequencies(counts.n0()),
        p_n_hat,
        q_n_hat: 1.0 - p_n_hat,
        n,
    }
}

/// Outcome of the plug-in estimator: a value or the reason it is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub outcome: std::result::Result<f64, Degeneracy>,
    pub n: u64,
}

impl EstimateResult {
    pub fn value(&self) -> Option<f64> {
        self.outcome.ok()
    }

    pub fn degeneracy(&self) -> Option<Degeneracy> {
        self.outcome.err()
    }

    pub fn is_degenerate(&self) -> bool {
        self.outcome.is_err()
    }
}

/// `D̂ = Σ_j (p̂_j − q̂_j) ln(p̂_j / q̂_j)` over the empirical measures of `counts`.
pub fn plug_in_estimate(counts: &CountTable) -> EstimateResult {
    let m = empirical_measures(counts);
    let outcome = match (m.degeneracy(), &m.p_hat, &m.q_hat) {
        (None, Some(p), Some(q)) => Ok(sym_kl_unchecked(p, q)),
        (Some(reason), _, _) => Err(reason),
        _ => unreachable!("non-degenerate measures have both classes"),
    };
    EstimateResult { outcome, n: m.n }
}

/// The empirical counterpart of a [`PopulationModel`]: `(p̂_n, p̂, q̂)`.
/// Fails when the counts are degenerate.
pub fn empirical_model(counts: &CountTable) -> Result<PopulationModel> {
    let m = empirical_measures(counts);
    if let Some(reason) = m.degeneracy() {
        return Err(Error::Degenerate(reason));
    }
    let p = ProbVector::from_ratios(m.p_hat.expect("checked"));
    let q = ProbVector::from_ratios(m.q_hat.expect("checked"));
    Ok(PopulationModel::from_parts_unchecked(m.p_n_hat, p, q))
}

/// `η_n = D̂ − D_sym(p, q)`.
pub fn estimation_error(counts: &CountTable, model: &PopulationModel) -> Result<f64> {
    let r = model.alphabet().size();
    if counts.alphabet().size() != r {
        return Err(Error::DimensionMismatch { left: counts.alphabet().size(), right: r });
    }
    let estimate = plug_in_estimate(counts).outcome.map_err(Error::Degenerate)?;
    Ok(estimate - model.true_divergence())
}
