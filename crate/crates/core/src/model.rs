//! Population-level objects: alphabets, simplex vectors, divergences and the
//! labeled-sample generator.
//!
//! Symbols are indexed from `0` to `r − 1` in code; documentation that talks
//! about `a_1..a_r` refers to the same symbols shifted by one.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Binomial, Exp1};

use crate::error::{Error, Result};
use crate::sum::{compensated_sum, NeumaierSum};

/// Smallest entry a vector may have and still count as strictly positive.
pub const POSITIVITY_EPS: f64 = 1e-12;

/// Absolute tolerance on `Σ p_j = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A finite alphabet `{a_1, ..., a_r}` with `r ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::AlphabetTooSmall(size));
        }
        Ok(Self(size))
    }

    pub fn size(self) -> usize {
        self.0
    }
}

/// A point on the probability simplex over an alphabet of size `r ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Validates finiteness, nonnegativity and normalization.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Alphabet::new(probs.len())?;
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let sum = compensated_sum(probs.iter().copied());
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self(probs))
    }

    /// Like [`ProbVector::new`] but additionally requires every entry to be at
    /// least [`POSITIVITY_EPS`].
    pub fn strictly_positive(probs: Vec<f64>) -> Result<Self> {
        let v = Self::new(probs)?;
        v.ensure_strictly_positive()?;
        Ok(v)
    }

    /// Builds a vector whose normalization holds by construction (ratios of
    /// integer counts). Skips the sum check.
    pub(crate) fn from_ratios(probs: Vec<f64>) -> Self {
        debug_assert!(probs.len() >= 2);
        Self(probs)
    }

    pub fn uniform(r: usize) -> Result<Self> {
        Alphabet::new(r)?;
        Ok(Self(vec![1.0 / r as f64; r]))
    }

    /// Random interior point: i.i.d. exponential draws normalized to sum one,
    /// rejected until every entry is at least `min_entry`.
    ///
    /// Requires `r · min_entry < 1`; acceptance becomes rare as the product
    /// approaches one.
    pub fn random_interior<R: Rng + ?Sized>(r: usize, min_entry: f64, rng: &mut R) -> Result<Self> {
        Alphabet::new(r)?;
        if !(min_entry >= 0.0 && min_entry * (r as f64) < 1.0) {
            return Err(Error::InvalidProbability(min_entry));
        }
        loop {
            let draws: Vec<f64> = (0..r).map(|_| Exp1.sample(rng)).collect();
            let total = compensated_sum(draws.iter().copied());
            let probs: Vec<f64> = draws.iter().map(|d| d / total).collect();
            if probs.iter().all(|&p| p >= min_entry) {
                return Ok(Self(probs));
            }
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.0.len())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&p| p >= POSITIVITY_EPS)
    }

    pub fn ensure_strictly_positive(&self) -> Result<()> {
        match self.0.iter().position(|&p| p < POSITIVITY_EPS) {
            Some(index) => Err(Error::NonPositiveEntry { index, value: self.0[index] }),
            None => Ok(()),
        }
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, j: usize) -> &f64 {
        &self.0[j]
    }
}

fn check_pair(p: &ProbVector, q: &ProbVector) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    p.ensure_strictly_positive()?;
    q.ensure_strictly_positive()
}

fn clamp_rounding(v: f64) -> f64 {
    if (-NORMALIZATION_TOL..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `D_KL(p‖q) = Σ_j p_j ln(p_j / q_j)`.
pub fn kl_divergence(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    check_pair(p, q)?;
    let terms = p.0.iter().zip(&q.0).map(|(&pj, &qj)| pj * (pj.ln() - qj.ln()));
    Ok(clamp_rounding(compensated_sum(terms)))
}

/// Symmetric KL (Jeffreys) divergence `Σ_j (p_j − q_j) ln(p_j / q_j)`.
///
/// Each term is formed as `(p_j − q_j)·(ln p_j − ln q_j)`, which is invariant
/// under swapping the arguments bit for bit.
pub fn sym_kl_divergence(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    check_pair(p, q)?;
    Ok(sym_kl_unchecked(&p.0, &q.0))
}

pub(crate) fn sym_kl_unchecked(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for (&pj, &qj) in p.iter().zip(q) {
        acc.add((pj - qj) * (pj.ln() - qj.ln()));
    }
    clamp_rounding(acc.value())
}

/// Generative model for `(X, Y)`: `P(Y = 1) = label_prob`, `X | Y = 1 ~ cond_p`,
/// `X | Y = 0 ~ cond_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationModel {
    alphabet: Alphabet,
    label_prob: f64,
    cond_p: ProbVector,
    cond_q: ProbVector,
}

impl PopulationModel {
    pub fn new(label_prob: f64, cond_p: ProbVector, cond_q: ProbVector) -> Result<Self> {
        if !(label_prob > 0.0 && label_prob < 1.0) {
            return Err(Error::InvalidLabelProb(label_prob));
        }
        check_pair(&cond_p, &cond_q)?;
        Ok(Self { alphabet: cond_p.alphabet(), label_prob, cond_p, cond_q })
    }

    /// Convenience constructor from raw slices.
    pub fn from_probs(label_prob: f64, cond_p: &[f64], cond_q: &[f64]) -> Result<Self> {
        Self::new(label_prob, ProbVector::new(cond_p.to_vec())?, ProbVector::new(cond_q.to_vec())?)
    }

    /// For empirical models whose invariants hold by construction.
    pub(crate) fn from_parts_unchecked(label_prob: f64, cond_p: ProbVector, cond_q: ProbVector) -> Self {
        Self { alphabet: cond_p.alphabet(), label_prob, cond_p, cond_q }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// `p = P(Y = 1)`.
    pub fn label_prob(&self) -> f64 {
        self.label_prob
    }

    /// `q = 1 − p = P(Y = 0)`.
    pub fn label_prob_zero(&self) -> f64 {
        1.0 - self.label_prob
    }

    pub fn cond_p(&self) -> &ProbVector {
        &self.cond_p
    }

    pub fn cond_q(&self) -> &ProbVector {
        &self.cond_q
    }

    /// Population value of the symmetric divergence between the two
    /// conditional laws.
    pub fn true_divergence(&self) -> f64 {
        sym_kl_unchecked(&self.cond_p.0, &self.cond_q.0)
    }

    /// Whether the two conditional laws coincide (max |p_j − q_j| < 1e-12).
    pub fn is_null(&self) -> bool {
        self.cond_p.0.iter().zip(&self.cond_q.0).all(|(p, q)| (p - q).abs() < NORMALIZATION_TOL)
    }

    /// Per-draw sampler of `(X, Y)`.
    pub fn sampler(&self) -> LabeledSampler {
        LabeledSampler {
            label_prob: self.label_prob,
            given_one: WeightedIndex::new(self.cond_p.as_slice()).expect("validated simplex vector"),
            given_zero: WeightedIndex::new(self.cond_q.as_slice()).expect("validated simplex vector"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Label::Zero),
            1 => Some(Label::One),
            _ => None,
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Zero => f.write_str("Y=0"),
            Label::One => f.write_str("Y=1"),
        }
    }
}

/// One observation `(X_i, Y_i)`; `x` is a zero-based symbol index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabeledSample {
    pub x: usize,
    pub y: Label,
}

impl LabeledSample {
    pub fn new(x: usize, y: Label, alphabet: Alphabet) -> Result<Self> {
        if x >= alphabet.size() {
            return Err(Error::SymbolOutOfRange { index: x, size: alphabet.size() });
        }
        Ok(Self { x, y })
    }
}

/// Draws single labeled observations from a [`PopulationModel`].
#[derive(Debug, Clone)]
pub struct LabeledSampler {
    label_prob: f64,
    given_one: WeightedIndex<f64>,
    given_zero: WeightedIndex<f64>,
}

impl Distribution<LabeledSample> for LabeledSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LabeledSample {
        if rng.random::<f64>() < self.label_prob {
            LabeledSample { x: self.given_one.sample(rng), y: Label::One }
        } else {
            LabeledSample { x: self.given_zero.sample(rng), y: Label::Zero }
        }
    }
}

/// Joint counts `n_{j,y}` of `(X = a_j, Y = y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n1: Vec<u64>,
    n0: Vec<u64>,
    n: u64,
}

impl CountTable {
    /// `n1[j]` counts `(a_j, Y=1)`, `n0[j]` counts `(a_j, Y=0)`.
    pub fn new(n1: Vec<u64>, n0: Vec<u64>) -> Result<Self> {
        if n1.len() != n0.len() {
            return Err(Error::DimensionMismatch { left: n1.len(), right: n0.len() });
        }
        Alphabet::new(n1.len())?;
        let n = n1.iter().chain(&n0).sum();
        Ok(Self { n1, n0, n })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self { n1: vec![0; alphabet.size()], n0: vec![0; alphabet.size()], n: 0 }
    }

    pub fn from_samples<I>(alphabet: Alphabet, samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = LabeledSample>,
    {
        let mut table = Self::empty(alphabet);
        for s in samples {
            table.record(s)?;
        }
        Ok(table)
    }

    pub fn record(&mut self, sample: LabeledSample) -> Result<()> {
        let size = self.n1.len();
        let cell = match sample.y {
            Label::One => self.n1.get_mut(sample.x),
            Label::Zero => self.n0.get_mut(sample.x),
        };
        *cell.ok_or(Error::SymbolOutOfRange { index: sample.x, size })? += 1;
        self.n += 1;
        Ok(())
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.n1.len())
    }

    /// Counts with `Y = 1`.
    pub fn n1(&self) -> &[u64] {
        &self.n1
    }

    /// Counts with `Y = 0`.
    pub fn n0(&self) -> &[u64] {
        &self.n0
    }

    pub fn counts(&self, label: Label) -> &[u64] {
        match label {
            Label::One => &self.n1,
            Label::Zero => &self.n0,
        }
    }

    /// Total sample size.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn class_total(&self, label: Label) -> u64 {
        self.counts(label).iter().sum()
    }
}

/// Draws a labeled sample of size `n` and returns its count table.
///
/// The label total is drawn as `Binomial(n, p)` and each class is split over
/// the alphabet by a chain of conditional binomials, which gives exactly the
/// law of aggregating `n` independent draws of `(X, Y)`; the individual draws
/// are never materialized. See [`sample_batch_sequential`] for the literal
/// per-draw version.
pub fn sample_batch<R: Rng>(model: &PopulationModel, n: u64, mut rng: R) -> Result<CountTable> {
    if n == 0 {
        return Err(Error::EmptySampleSize);
    }
    let ones = Binomial::new(n, model.label_prob).expect("label probability validated").sample(&mut rng);
    let n1 = multinomial(ones, model.cond_p.as_slice(), &mut rng);
    let n0 = multinomial(n - ones, model.cond_q.as_slice(), &mut rng);
    Ok(CountTable { n1, n0, n })
}

/// Same law as [`sample_batch`], drawing and tallying one observation at a time.
pub fn sample_batch_sequential<R: Rng>(model: &PopulationModel, n: u64, mut rng: R) -> Result<CountTable> {
    if n == 0 {
        return Err(Error::EmptySampleSize);
    }
    let sampler = model.sampler();
    CountTable::from_samples(model.alphabet, (0..n).map(|_| sampler.sample(&mut rng)))
}

fn multinomial<R: Rng + ?Sized>(total: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let r = probs.len();
    // tail[k] = Σ_{i ≥ k} probs[i]
    let mut tail = vec![0.0; r];
    let mut acc = NeumaierSum::new();
    for k in (0..r).rev() {
        acc.add(probs[k]);
        tail[k] = acc.value();
    }
    let mut out = vec![0; r];
    let mut remaining = total;
    for k in 0..r - 1 {
        if remaining == 0 {
            break;
        }
        let share = if tail[k] > 0.0 { (probs[k] / tail[k]).clamp(0.0, 1.0) } else { 0.0 };
        let c = Binomial::new(remaining, share).expect("share in [0, 1]").sample(rng);
        out[k] = c;
        remaining -= c;
    }
    out[r - 1] += remaining;
    out
}
