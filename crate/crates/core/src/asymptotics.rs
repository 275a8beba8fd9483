//! Asymptotic normality of the plug-in estimator.
//!
//! With `b_j = 1 + ln(p_j/q_j) − q_j/p_j` and `c_j = 1 + ln(q_j/p_j) − p_j/q_j`,
//! the single-observation influence of `(x, y)` is
//!
//! ```text
//! W(x, y) = Σ_j [ (1/p)(I(x=a_j, y=1) − p·p_j) − p_j (I(y=1) − p) ] b_j
//!         + Σ_j [ (1/q)(I(x=a_j, y=0) − q·q_j) − q_j (I(y=0) − q) ] c_j
//! ```
//!
//! and `√n·η_n` is asymptotically `N(0, σ²)` with `σ² = Var W`. Because `(X, Y)`
//! takes only `2r` values, `σ²` is computed exactly by enumeration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{empirical_model, EstimateResult};
use crate::model::{CountTable, Label, PopulationModel, ProbVector};
use crate::normal;
use crate::sum::NeumaierSum;

/// The coefficient vectors `b` and `c` multiplying the centred empirical
/// frequencies in the linearization of the estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceCoefficients {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

pub fn influence_coefficients(p: &ProbVector, q: &ProbVector) -> Result<InfluenceCoefficients> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    p.ensure_strictly_positive()?;
    q.ensure_strictly_positive()?;
    let (b, c) = p
        .as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(&pj, &qj)| {
            let log_ratio = pj.ln() - qj.ln();
            (1.0 + log_ratio - qj / pj, 1.0 - log_ratio - pj / qj)
        })
        .unzip();
    Ok(InfluenceCoefficients { b, c })
}

/// `W(x, y)` evaluated term by term over the alphabet.
pub fn influence_value(model: &PopulationModel, coeffs: &InfluenceCoefficients, x: usize, y: Label) -> Result<f64> {
    let r = model.alphabet().size();
    if coeffs.b.len() != r || coeffs.c.len() != r {
        return Err(Error::DimensionMismatch { left: coeffs.b.len(), right: r });
    }
    if x >= r {
        return Err(Error::SymbolOutOfRange { index: x, size: r });
    }
    let p = model.label_prob();
    let q = model.label_prob_zero();
    let y1 = f64::from(y == Label::One);
    let y0 = 1.0 - y1;
    let mut acc = NeumaierSum::new();
    for j in 0..r {
        let pj = model.cond_p()[j];
        let qj = model.cond_q()[j];
        let cell1 = f64::from(j == x) * y1;
        let cell0 = f64::from(j == x) * y0;
        acc.add(((cell1 - p * pj) / p - pj * (y1 - p)) * coeffs.b[j]);
        acc.add(((cell0 - q * qj) / q - qj * (y0 - q)) * coeffs.c[j]);
    }
    Ok(acc.value())
}

/// `W` in closed form: with `S_b = Σ p_j b_j` and `S_c = Σ q_j c_j`,
/// `W(a_k, 1) = b_k/p − S_b(2 − p) − S_c(1 − q)` and
/// `W(a_k, 0) = c_k/q − S_b(1 − p) − S_c(2 − q)`.
#[derive(Debug, Clone)]
pub struct InfluenceFunction {
    label_prob: f64,
    coeffs: InfluenceCoefficients,
    at_one: f64,
    at_zero: f64,
}

impl InfluenceFunction {
    pub fn new(model: &PopulationModel) -> Self {
        let coeffs =
            influence_coefficients(model.cond_p(), model.cond_q()).expect("model vectors are strictly positive");
        let p = model.label_prob();
        let q = model.label_prob_zero();
        let mut sb = NeumaierSum::new();
        let mut sc = NeumaierSum::new();
        for j in 0..coeffs.b.len() {
            sb.add(model.cond_p()[j] * coeffs.b[j]);
            sc.add(model.cond_q()[j] * coeffs.c[j]);
        }
        let (sb, sc) = (sb.value(), sc.value());
        Self {
            label_prob: p,
            at_one: -sb * (2.0 - p) - sc * (1.0 - q),
            at_zero: -sb * (1.0 - p) - sc * (2.0 - q),
            coeffs,
        }
    }

    pub fn coefficients(&self) -> &InfluenceCoefficients {
        &self.coeffs
    }

    pub fn value(&self, x: usize, y: Label) -> f64 {
        match y {
            Label::One => self.coeffs.b[x] / self.label_prob + self.at_one,
            Label::Zero => self.coeffs.c[x] / (1.0 - self.label_prob) + self.at_zero,
        }
    }
}

/// Asymptotic variance together with the enumerated mean of `W`, which must
/// vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceResult {
    pub sigma2: f64,
    pub mean_check: f64,
}

/// `σ² = Var W` by enumerating the `2r` outcomes `(a_k, 1)` with probability
/// `p·p_k` and `(a_k, 0)` with probability `q·q_k`.
pub fn exact_sigma2(model: &PopulationModel) -> VarianceResult {
    let w = InfluenceFunction::new(model);
    let p = model.label_prob();
    let q = model.label_prob_zero();
    let mut first = NeumaierSum::new();
    let mut second = NeumaierSum::new();
    for k in 0..model.alphabet().size() {
        for (label, prob) in [(Label::One, p * model.cond_p()[k]), (Label::Zero, q * model.cond_q()[k])] {
            let v = w.value(k, label);
            first.add(prob * v);
            second.add(prob * v * v);
        }
    }
    let mean = first.value();
    VarianceResult { sigma2: (second.value() - mean * mean).max(0.0), mean_check: mean }
}

/// [`exact_sigma2`] evaluated at the empirical model `(p̂_n, p̂, q̂)`.
pub fn plugin_sigma2(counts: &CountTable) -> Result<VarianceResult> {
    Ok(exact_sigma2(&empirical_model(counts)?))
}

/// Normal-theory interval `D̂ ± z·√(σ²/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub n: u64,
    /// Set when `σ² = 0`; the interval collapses to a point.
    pub degenerate_variance: bool,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn confidence_interval(estimate: &EstimateResult, var: &VarianceResult, level: f64) -> Result<ConfidenceInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    let value = estimate.outcome.map_err(Error::Degenerate)?;
    let z = normal::quantile(0.5 * (1.0 + level));
    let half = z * (var.sigma2 / estimate.n as f64).sqrt();
    Ok(ConfidenceInterval {
        lower: value - half,
        upper: value + half,
        level,
        n: estimate.n,
        degenerate_variance: var.sigma2 == 0.0,
    })
}
