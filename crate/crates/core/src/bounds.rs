//! Exponential tail bounds for the empirical building blocks of the
//! estimator, and their Monte Carlo validation.
//!
//! Notation: `p = P(Y = 1)`, `q = 1 − p`, `m = max(p, q)`, `p_min`/`p_max` and
//! `q_min`/`q_max` the extreme entries of the two conditional vectors, and
//!
//! ```text
//! h_p = max(p·p_max, 1 − p·p_min)      h_q = max(q·q_max, 1 − q·q_min)
//! ```
//!
//! Every bound is a sum of terms `k·exp(−n·x / d)`. Values above one are
//! returned unchanged and marked as not informative.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::empirical_measures;
use crate::model::{sample_batch, Label, PopulationModel};
use crate::rng::replication_stream;

/// The implemented bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `P(|p̂_n − p| > g) ≤ 2 exp(−n g² / 2m²)`.
    LabelFreqP,
    /// `P(|q̂_n − q| > g) ≤ 2 exp(−n g² / 2m²)`.
    LabelFreqQ,
    /// `max_j P(n⁻¹ Σ_i (I(X_i = a_j, Y_i = 1) − p p_j) > g) ≤ 2 exp(−n g² / 2h_p²)`.
    JointCellP,
    /// `max_j P(n⁻¹ Σ_i (I(X_i = a_j, Y_i = 0) − q q_j) > g) ≤ 2 exp(−n g² / 2h_q²)`.
    JointCellQ,
    /// `max_j P(|p̂_j − p_j| > g)`, four terms.
    ConditionalCellP,
    /// `max_j P(|q̂_j − q_j| > g)`, four terms.
    ConditionalCellQ,
    /// `max_j P(|ln(p̂_j q_j / p_j q̂_j)| > g)`, twelve terms.
    LogRatio,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::LabelFreqP,
        BoundKind::LabelFreqQ,
        BoundKind::JointCellP,
        BoundKind::JointCellQ,
        BoundKind::ConditionalCellP,
        BoundKind::ConditionalCellQ,
        BoundKind::LogRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::LabelFreqP => "label_freq_p",
            BoundKind::LabelFreqQ => "label_freq_q",
            BoundKind::JointCellP => "joint_cell_p",
            BoundKind::JointCellQ => "joint_cell_q",
            BoundKind::ConditionalCellP => "conditional_cell_p",
            BoundKind::ConditionalCellQ => "conditional_cell_q",
            BoundKind::LogRatio => "log_ratio",
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Model, sample size and deviation threshold at which a bound is evaluated.
#[derive(Debug, Clone, Copy)]
pub struct BoundInputs<'a> {
    pub model: &'a PopulationModel,
    pub n: u64,
    pub g: f64,
}

impl<'a> BoundInputs<'a> {
    pub fn new(model: &'a PopulationModel, n: u64, g: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySampleSize);
        }
        if g.is_nan() || g <= 0.0 {
            return Err(Error::InvalidThreshold(g));
        }
        Ok(Self { model, n, g })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    /// `value < 1`.
    pub informative: bool,
}

impl BoundValue {
    fn from_terms(terms: &[f64]) -> Self {
        let value: f64 = terms.iter().sum();
        Self { value, informative: value < 1.0 }
    }
}

struct Extremes {
    p: f64,
    q: f64,
    m: f64,
    p_min: f64,
    p_max: f64,
    q_min: f64,
    q_max: f64,
    h_p: f64,
    h_q: f64,
}

impl Extremes {
    fn of(model: &PopulationModel) -> Self {
        let p = model.label_prob();
        let q = model.label_prob_zero();
        let (p_min, p_max) = (model.cond_p().min(), model.cond_p().max());
        let (q_min, q_max) = (model.cond_q().min(), model.cond_q().max());
        Self {
            p,
            q,
            m: p.max(q),
            p_min,
            p_max,
            q_min,
            q_max,
            h_p: (p * p_max).max(1.0 - p * p_min),
            h_q: (q * q_max).max(1.0 - q * q_min),
        }
    }
}

/// `k · exp(−n · x / d)`
#[inline]
fn term(k: f64, n: f64, x: f64, d: f64) -> f64 {
    k * (-n * x / d).exp()
}

/// The four terms of the conditional-cell bound for one label class, given
/// that class's probability `a`, extremes `lo`/`hi`, and range `h`.
fn conditional_cell_terms(n: f64, g: f64, a: f64, lo: f64, hi: f64, h: f64, m: f64) -> [f64; 4] {
    let g2 = g * g;
    let a2 = a * a;
    [
        term(2.0, n, g2 * a2, 128.0 * m * m * hi * hi),
        term(2.0, n, g2 * a2, 8.0 * h * h),
        term(1.0, n, a2 * lo * lo, 2.0 * h * h),
        term(1.0, n, a2, 8.0 * m * m),
    ]
}

/// The six terms of the log-ratio bound contributed by one label class.
fn log_ratio_terms(n: f64, g: f64, a: f64, lo: f64, hi: f64, h: f64, m: f64) -> [f64; 6] {
    let g2 = g * g;
    let a2lo2 = a * a * lo * lo;
    [
        term(4.0, n, g2 * a2lo2, 2048.0 * m * m * hi * hi),
        term(4.0, n, g2 * a2lo2, 128.0 * h * h),
        term(2.0, n, a2lo2, 512.0 * m * m * hi * hi),
        term(2.0, n, a2lo2, 32.0 * h * h),
        term(3.0, n, a2lo2, 2.0 * h * h),
        term(3.0, n, a * a, 8.0 * m * m),
    ]
}

/// Individual exponential terms of a bound, in printed order.
pub fn bound_terms(kind: BoundKind, inputs: &BoundInputs<'_>) -> Vec<f64> {
    let e = Extremes::of(inputs.model);
    let n = inputs.n as f64;
    let g = inputs.g;
    match kind {
        BoundKind::LabelFreqP | BoundKind::LabelFreqQ => vec![term(2.0, n, g * g, 2.0 * e.m * e.m)],
        BoundKind::JointCellP => vec![term(2.0, n, g * g, 2.0 * e.h_p * e.h_p)],
        BoundKind::JointCellQ => vec![term(2.0, n, g * g, 2.0 * e.h_q * e.h_q)],
        BoundKind::ConditionalCellP => conditional_cell_terms(n, g, e.p, e.p_min, e.p_max, e.h_p, e.m).to_vec(),
        BoundKind::ConditionalCellQ => conditional_cell_terms(n, g, e.q, e.q_min, e.q_max, e.h_q, e.m).to_vec(),
        BoundKind::LogRatio => {
            let mut t = log_ratio_terms(n, g, e.p, e.p_min, e.p_max, e.h_p, e.m).to_vec();
            t.extend(log_ratio_terms(n, g, e.q, e.q_min, e.q_max, e.h_q, e.m));
            t
        }
    }
}

pub fn evaluate_bound(kind: BoundKind, inputs: &BoundInputs<'_>) -> BoundValue {
    BoundValue::from_terms(&bound_terms(kind, inputs))
}

/// Label-frequency bound; the same expression covers `p̂_n` and `q̂_n`.
pub fn bound_label_freq(inputs: &BoundInputs<'_>) -> BoundValue {
    evaluate_bound(BoundKind::LabelFreqP, inputs)
}

/// Joint-cell bound for cell `j` (zero-based) within `label`. The bound is
/// uniform over `j`; the index is only range-checked.
pub fn bound_joint_cell(inputs: &BoundInputs<'_>, j: usize, label: Label) -> Result<BoundValue> {
    let r = inputs.model.alphabet().size();
    if j >= r {
        return Err(Error::SymbolOutOfRange { index: j, size: r });
    }
    let kind = match label {
        Label::One => BoundKind::JointCellP,
        Label::Zero => BoundKind::JointCellQ,
    };
    Ok(evaluate_bound(kind, inputs))
}

pub fn bound_conditional_cell_p(inputs: &BoundInputs<'_>) -> BoundValue {
    evaluate_bound(BoundKind::ConditionalCellP, inputs)
}

pub fn bound_conditional_cell_q(inputs: &BoundInputs<'_>) -> BoundValue {
    evaluate_bound(BoundKind::ConditionalCellQ, inputs)
}

pub fn bound_log_ratio(inputs: &BoundInputs<'_>) -> BoundValue {
    evaluate_bound(BoundKind::LogRatio, inputs)
}

/// Replication budget for the empirical columns of [`bound_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmpiricalBudget {
    pub replications: usize,
    pub master_seed: u64,
}

/// Observed frequency of the bounded event (maximized over cells for the
/// per-cell bounds) with its binomial standard error `√(f(1−f)/M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalTail {
    pub frequency: f64,
    pub stderr: f64,
    pub replications: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub kind: BoundKind,
    pub n: u64,
    pub g: f64,
    pub bound: BoundValue,
    pub empirical: Option<EmpiricalTail>,
}

impl BoundRow {
    /// `frequency ≤ bound + 3·stderr`; `None` without an empirical column.
    pub fn is_valid(&self) -> Option<bool> {
        self.empirical.map(|e| e.frequency <= self.bound.value + 3.0 * e.stderr)
    }
}

/// Per-cell deviation statistics of one sample; the event for threshold `g`
/// is `statistic > g`. Undefined statistics are `+∞`, so they always count
/// as exceedances.
fn deviations(model: &PopulationModel, counts: &crate::model::CountTable) -> HashMap<BoundKind, Vec<f64>> {
    let m = empirical_measures(counts);
    let n = counts.n() as f64;
    let p = model.label_prob();
    let q = model.label_prob_zero();
    let pv = model.cond_p().as_slice();
    let qv = model.cond_q().as_slice();
    let r = pv.len();

    let cond = |hat: &Option<Vec<f64>>, truth: &[f64]| -> Vec<f64> {
        match hat {
            Some(h) => h.iter().zip(truth).map(|(a, b)| (a - b).abs()).collect(),
            None => vec![f64::INFINITY; r],
        }
    };
    let log_ratio = (0..r)
        .map(|j| match (&m.p_hat, &m.q_hat) {
            (Some(ph), Some(qh)) if ph[j] > 0.0 && qh[j] > 0.0 => {
                ((ph[j].ln() - pv[j].ln()) - (qh[j].ln() - qv[j].ln())).abs()
            }
            _ => f64::INFINITY,
        })
        .collect();

    HashMap::from([
        (BoundKind::LabelFreqP, vec![(m.p_n_hat - p).abs()]),
        (BoundKind::LabelFreqQ, vec![(m.q_n_hat - q).abs()]),
        (BoundKind::JointCellP, counts.n1().iter().zip(pv).map(|(&c, &pj)| c as f64 / n - p * pj).collect()),
        (BoundKind::JointCellQ, counts.n0().iter().zip(qv).map(|(&c, &qj)| c as f64 / n - q * qj).collect()),
        (BoundKind::ConditionalCellP, cond(&m.p_hat, pv)),
        (BoundKind::ConditionalCellQ, cond(&m.q_hat, qv)),
        (BoundKind::LogRatio, log_ratio),
    ])
}

/// Exceedance counts indexed `[kind][g][cell]`.
type Tally = Vec<Vec<Vec<u64>>>;

fn empirical_tails(
    model: &PopulationModel,
    n: u64,
    n_index: usize,
    g_grid: &[f64],
    budget: EmpiricalBudget,
) -> HashMap<(BoundKind, usize), EmpiricalTail> {
    let r = model.alphabet().size();
    let empty = || -> Tally {
        BoundKind::ALL
            .iter()
            .map(|k| {
                let cells = if matches!(k, BoundKind::LabelFreqP | BoundKind::LabelFreqQ) { 1 } else { r };
                vec![vec![0u64; cells]; g_grid.len()]
            })
            .collect()
    };
    let tally = (0..budget.replications)
        .into_par_iter()
        .fold(empty, |mut acc, rep| {
            let counts = sample_batch(model, n, replication_stream(budget.master_seed, n_index, rep))
                .expect("n >= 1 checked by caller");
            let dev = deviations(model, &counts);
            for (ki, kind) in BoundKind::ALL.iter().enumerate() {
                for (gi, &g) in g_grid.iter().enumerate() {
                    for (j, &d) in dev[kind].iter().enumerate() {
                        if d > g || d.is_nan() {
                            acc[ki][gi][j] += 1;
                        }
                    }
                }
            }
            acc
        })
        .reduce(empty, |mut a, b| {
            for (ka, kb) in a.iter_mut().zip(b) {
                for (ga, gb) in ka.iter_mut().zip(kb) {
                    for (x, y) in ga.iter_mut().zip(gb) {
                        *x += y;
                    }
                }
            }
            a
        });

    let reps = budget.replications as f64;
    let mut out = HashMap::new();
    for (kind, per_g) in BoundKind::ALL.iter().zip(&tally) {
        for (gi, cells) in per_g.iter().enumerate() {
            let hits = cells.iter().copied().max().unwrap_or(0);
            let f = hits as f64 / reps;
            out.insert(
                (*kind, gi),
                EmpiricalTail {
                    frequency: f,
                    stderr: (f * (1.0 - f) / reps).sqrt(),
                    replications: budget.replications,
                },
            );
        }
    }
    out
}

/// Evaluates every bound over `n_grid × g_grid`, optionally with Monte Carlo
/// tail frequencies. Rows are sorted by `(name, n, g)`.
///
/// Replication `k` at the `i`-th entry of `n_grid` draws from
/// `replication_stream(master_seed, i, k)`; all thresholds share the same
/// samples.
pub fn bound_table(
    model: &PopulationModel,
    n_grid: &[u64],
    g_grid: &[f64],
    budget: Option<EmpiricalBudget>,
) -> Result<Vec<BoundRow>> {
    if n_grid.is_empty() || g_grid.is_empty() {
        return Err(Error::InvalidConfig("bound grids must be nonempty".into()));
    }
    if let Some(b) = budget {
        if b.replications == 0 {
            return Err(Error::InvalidConfig("replication budget must be at least 1".into()));
        }
    }
    let mut rows = Vec::with_capacity(BoundKind::ALL.len() * n_grid.len() * g_grid.len());
    for (ni, &n) in n_grid.iter().enumerate() {
        for &g in g_grid {
            BoundInputs::new(model, n, g)?;
        }
        let tails = budget.map(|b| empirical_tails(model, n, ni, g_grid, b));
        for kind in BoundKind::ALL {
            for (gi, &g) in g_grid.iter().enumerate() {
                let inputs = BoundInputs { model, n, g };
                rows.push(BoundRow {
                    kind,
                    n,
                    g,
                    bound: evaluate_bound(kind, &inputs),
                    empirical: tails.as_ref().map(|t| t[&(kind, gi)]),
                });
            }
        }
    }
    rows.sort_by(|a, b| a.kind.name().cmp(b.kind.name()).then(a.n.cmp(&b.n)).then(a.g.total_cmp(&b.g)));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_model() -> PopulationModel {
        PopulationModel::from_probs(0.5, &[0.5, 0.5], &[0.5, 0.5]).unwrap()
    }

    fn skewed_model() -> PopulationModel {
        PopulationModel::from_probs(0.3, &[0.1, 0.2, 0.7], &[0.5, 0.3, 0.2]).unwrap()
    }

    #[test]
    fn input_validation() {
        let m = half_model();
        assert!(BoundInputs::new(&m, 0, 0.1).is_err());
        assert!(BoundInputs::new(&m, 10, 0.0).is_err());
        assert!(BoundInputs::new(&m, 10, f64::NAN).is_err());
        assert!(BoundInputs::new(&m, 10, f64::INFINITY).is_ok());
    }

    #[test]
    fn label_freq_golden() {
        let m = half_model();
        let v = bound_label_freq(&BoundInputs::new(&m, 100, 0.1).unwrap());
        assert!((v.value - 0.270_670_566_473_225_4).abs() < 1e-15);
        assert!(v.informative);
        let far = bound_label_freq(&BoundInputs::new(&m, 100, f64::INFINITY).unwrap());
        assert_eq!(far.value, 0.0);
    }

    #[test]
    fn joint_cell_golden() {
        let m = half_model();
        let inputs = BoundInputs::new(&m, 100, 0.1).unwrap();
        let v = bound_joint_cell(&inputs, 0, Label::One).unwrap();
        assert!((v.value - 0.822_224_581_014_374_9).abs() < 1e-15);
        assert!(bound_joint_cell(&inputs, 2, Label::One).is_err());
    }

    #[test]
    fn joint_cell_single_atom_reduction() {
        // With p·p_max = 1 and p·p_min = 1 the range is max(1, 0) = 1.
        let e = Extremes { p: 1.0, q: 0.0, m: 1.0, p_min: 1.0, p_max: 1.0, q_min: 0.0, q_max: 0.0, h_p: 1.0, h_q: 1.0 };
        assert_eq!(e.h_p, (e.p * e.p_max).max(1.0 - e.p * e.p_min));
        let n = 50.0;
        let g: f64 = 0.2;
        let want = 2.0 * (-n * g * g / 2.0).exp();
        assert!((term(2.0, n, g * g, 2.0 * e.h_p * e.h_p) - want).abs() < 1e-15);
    }

    #[test]
    fn conditional_cell_golden() {
        // 40-digit evaluation of the four printed terms.
        let m = half_model();
        let v = bound_conditional_cell_p(&BoundInputs::new(&m, 10_000, 0.2).unwrap());
        assert!((v.value - 7.453_753_070_444_583e-6).abs() < 1e-18);

        let s = skewed_model();
        let inputs = BoundInputs::new(&s, 2000, 0.1).unwrap();
        assert!((bound_conditional_cell_p(&inputs).value - 3.845_069_856_549_103).abs() < 1e-12);
        assert!((bound_conditional_cell_q(&inputs).value - 1.452_210_183_554_98).abs() < 1e-12);
        assert!(!bound_conditional_cell_p(&inputs).informative);
    }

    #[test]
    fn log_ratio_golden() {
        let s = skewed_model();
        let v = bound_log_ratio(&BoundInputs::new(&s, 1_000_000, 0.5).unwrap());
        assert!((v.value - 3.150_183_437_513_214).abs() < 1e-12);
        assert_eq!(bound_terms(BoundKind::LogRatio, &BoundInputs::new(&s, 10, 0.5).unwrap()).len(), 12);
    }

    #[test]
    fn log_ratio_sides_mirror_under_symmetry() {
        let m = half_model();
        let t = bound_terms(BoundKind::LogRatio, &BoundInputs::new(&m, 5000, 0.3).unwrap());
        assert_eq!(t[..6], t[6..]);
        let cp = bound_conditional_cell_p(&BoundInputs::new(&m, 5000, 0.3).unwrap());
        let cq = bound_conditional_cell_q(&BoundInputs::new(&m, 5000, 0.3).unwrap());
        assert_eq!(cp, cq);
    }

    #[test]
    fn terms_shrink_when_g_is_positive() {
        let s = skewed_model();
        let zero = BoundInputs { model: &s, n: 400, g: 0.0 };
        let pos = BoundInputs::new(&s, 400, 0.3).unwrap();
        for kind in BoundKind::ALL {
            let t0 = bound_terms(kind, &zero);
            let t1 = bound_terms(kind, &pos);
            for (a, b) in t0.iter().zip(&t1) {
                assert!(b <= a, "{kind}");
            }
        }
        let a = bound_terms(BoundKind::ConditionalCellP, &zero);
        let b = bound_terms(BoundKind::ConditionalCellP, &pos);
        assert!(b[0] < a[0] && b[1] < a[1]);
    }

    #[test]
    fn monotone_in_g_and_n() {
        let s = skewed_model();
        let gs = [0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0];
        let ns = [10, 100, 1000, 10_000, 100_000];
        for kind in BoundKind::ALL {
            for &n in &ns {
                for w in gs.windows(2) {
                    let a = evaluate_bound(kind, &BoundInputs::new(&s, n, w[0]).unwrap()).value;
                    let b = evaluate_bound(kind, &BoundInputs::new(&s, n, w[1]).unwrap()).value;
                    assert!(b <= a, "{kind} n={n}");
                }
            }
            for &g in &gs {
                for w in ns.windows(2) {
                    let a = evaluate_bound(kind, &BoundInputs::new(&s, w[0], g).unwrap()).value;
                    let b = evaluate_bound(kind, &BoundInputs::new(&s, w[1], g).unwrap()).value;
                    assert!(b <= a, "{kind} g={g}");
                }
            }
        }
    }

    #[test]
    fn large_g_is_finite() {
        let s = skewed_model();
        let v = bound_conditional_cell_p(&BoundInputs::new(&s, 10, 1.5).unwrap());
        assert!(v.value.is_finite());
        assert!(!v.informative);
    }

    #[test]
    fn table_without_budget_is_sorted_bounds_only() {
        let s = skewed_model();
        let rows = bound_table(&s, &[1000, 100], &[0.2, 0.05], None).unwrap();
        assert_eq!(rows.len(), 7 * 2 * 2);
        assert!(rows.iter().all(|r| r.empirical.is_none() && r.is_valid().is_none()));
        let keys: Vec<_> = rows.iter().map(|r| (r.kind.name(), r.n, r.g.to_bits())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(rows[0].kind, BoundKind::ConditionalCellP);
        assert!(bound_table(&s, &[], &[0.1], None).is_err());
        assert!(bound_table(&s, &[10], &[], None).is_err());
        assert!(bound_table(&s, &[10], &[-0.1], None).is_err());
    }

    #[test]
    fn table_with_budget_is_valid_and_reproducible() {
        let s = skewed_model();
        let budget = EmpiricalBudget { replications: 2000, master_seed: 5 };
        let rows = bound_table(&s, &[50, 500], &[0.05, 0.2], Some(budget)).unwrap();
        for row in &rows {
            assert_eq!(row.is_valid(), Some(true), "{row:?}");
        }
        assert_eq!(rows, bound_table(&s, &[50, 500], &[0.05, 0.2], Some(budget)).unwrap());
    }

    #[test]
    fn undefined_statistics_count_as_exceedances() {
        let s = skewed_model();
        let counts = crate::model::CountTable::new(vec![0, 0, 0], vec![1, 2, 3]).unwrap();
        let d = deviations(&s, &counts);
        assert!(d[&BoundKind::ConditionalCellP].iter().all(|v| v.is_infinite()));
        assert!(d[&BoundKind::LogRatio].iter().all(|v| v.is_infinite()));
        assert!(d[&BoundKind::ConditionalCellQ].iter().all(|v| v.is_finite()));
    }
}
