//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every tolerance is a constant below.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;

use jeffreys::asymptotics::exact_sigma2;
use jeffreys::bounds::{bound_table, BoundKind, EmpiricalBudget};
use jeffreys::estimator::{empirical_measures, plug_in_estimate};
use jeffreys::io::{RunConfig, BOUND_G_GRID};
use jeffreys::model::{sym_kl_divergence, CountTable, PopulationModel, ProbVector};
use jeffreys::montecarlo::{lln_curve, run_experiment, ExperimentConfig};
use jeffreys::normal;
use jeffreys::rng::stream;

const EXACTNESS_TOL: f64 = 1e-12;
const EXACTNESS_BUDGET: Duration = Duration::from_secs(1);
const GOLDEN_TOL: f64 = 1e-12;
const MEAN_ZERO_TOL: f64 = 1e-12;
const SIGMA2_REL_TOL: f64 = 0.05;
const SIGMA2_BUDGET: Duration = Duration::from_secs(60);
const KS_MAX: f64 = 0.04;
const CLT_BUDGET: Duration = Duration::from_secs(30);
const COVERAGE_RANGE: (f64, f64) = (0.93, 0.97);
const LLN_MAX_MEDIAN: f64 = 0.01;
const BOUND_STDERRS: f64 = 3.0;
const BOUNDS_BUDGET: Duration = Duration::from_secs(180);
const CDF_TOL: f64 = 1e-7;
const QUANTILE_TOL: f64 = 1e-6;

const SEED: u64 = 20_241_016;

fn test_model() -> PopulationModel {
    PopulationModel::from_probs(0.5, &[0.5, 0.5], &[0.25, 0.75]).unwrap()
}

fn config(model: PopulationModel, n_values: Vec<u64>, replications: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig { model, n_values, replications, master_seed: seed, ci_level: 0.95, checks: BTreeSet::new() }
}

fn estimator_exactness() -> (bool, String) {
    let start = Instant::now();
    let mut rng = stream(SEED, 1);
    let mut worst = 0.0f64;
    let mut tables = 0;
    while tables < 100 {
        let r = [2, 5, 20][tables % 3];
        let n1: Vec<u64> = (0..r).map(|_| rng.random_range(1..=500)).collect();
        let n0: Vec<u64> = (0..r).map(|_| rng.random_range(1..=500)).collect();
        let counts = CountTable::new(n1, n0).unwrap();
        let m = empirical_measures(&counts);
        let p = ProbVector::new(m.p_hat.unwrap()).unwrap();
        let q = ProbVector::new(m.q_hat.unwrap()).unwrap();
        let direct = sym_kl_divergence(&p, &q).unwrap();
        let est = plug_in_estimate(&counts).value().unwrap();
        worst = worst.max((est - direct).abs());
        tables += 1;
    }
    let elapsed = start.elapsed();
    (
        worst <= EXACTNESS_TOL && elapsed < EXACTNESS_BUDGET,
        format!("max |diff| {worst:.2e} over {tables} tables in {elapsed:.2?}"),
    )
}

fn golden_divergences() -> (bool, String) {
    let p = ProbVector::new(vec![0.5, 0.5]).unwrap();
    let q = ProbVector::new(vec![0.25, 0.75]).unwrap();
    let d = sym_kl_divergence(&p, &q).unwrap();
    let e1 = (d - 3f64.ln() / 4.0).abs();
    let est = plug_in_estimate(&CountTable::new(vec![3, 1], vec![1, 3]).unwrap()).value().unwrap();
    let e2 = (est - 3f64.ln()).abs();
    (e1 <= GOLDEN_TOL && e2 <= GOLDEN_TOL, format!("|D - ln3/4| {e1:.1e}, |D_hat - ln3| {e2:.1e}"))
}

fn influence_mean_zero() -> (bool, String) {
    let mut rng = stream(SEED, 3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let r = rng.random_range(2..=20);
        let p = ProbVector::random_interior(r, 1e-3, &mut rng).unwrap();
        let q = ProbVector::random_interior(r, 1e-3, &mut rng).unwrap();
        let label = rng.random_range(0.05..0.95);
        let model = PopulationModel::new(label, p, q).unwrap();
        worst = worst.max(exact_sigma2(&model).mean_check.abs());
    }
    (worst <= MEAN_ZERO_TOL, format!("max |E[W]| {worst:.2e} over 100 models"))
}

fn sigma2_two_routes() -> (bool, String) {
    let start = Instant::now();
    let models = [
        test_model(),
        PopulationModel::from_probs(0.2, &[0.3, 0.7], &[0.6, 0.4]).unwrap(),
        PopulationModel::from_probs(0.7, &[0.2, 0.3, 0.5], &[0.5, 0.3, 0.2]).unwrap(),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, model) in models.into_iter().enumerate() {
        let out = run_experiment(&config(model, vec![100_000], 5_000, SEED + i as u64)).unwrap();
        let exact = out.sigma2.sigma2;
        let ratio = out.summaries[0].variance_ratio.unwrap();
        ok &= (ratio - 1.0).abs() <= SIGMA2_REL_TOL;
        parts.push(format!("{exact:.4}/{:.4}", ratio * exact));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < SIGMA2_BUDGET;
    (ok, format!("exact/empirical {} in {elapsed:.2?}", parts.join(", ")))
}

fn clt_and_coverage() -> ((bool, String), (bool, String)) {
    let start = Instant::now();
    let out = run_experiment(&config(test_model(), vec![10_000], 2_000, SEED)).unwrap();
    let elapsed = start.elapsed();
    let s = &out.summaries[0];
    let ks = s.ks_distance.unwrap();
    let cov = s.coverage_rate.unwrap();
    (
        (ks <= KS_MAX && elapsed < CLT_BUDGET, format!("KS {ks:.4} (max {KS_MAX}) in {elapsed:.2?}")),
        (
            (COVERAGE_RANGE.0..=COVERAGE_RANGE.1).contains(&cov),
            format!("coverage {cov:.4} over {} intervals", s.replications - s.degenerate_count),
        ),
    )
}

fn lln() -> (bool, String) {
    let out = run_experiment(&config(test_model(), vec![1_000, 10_000, 100_000], 200, SEED)).unwrap();
    let curve = lln_curve(&out.records).unwrap();
    let medians: Vec<f64> = curve.values().copied().collect();
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    let last = *medians.last().unwrap();
    (
        decreasing && last < LLN_MAX_MEDIAN,
        format!("medians {}", medians.iter().map(|m| format!("{m:.5}")).collect::<Vec<_>>().join(" > ")),
    )
}

fn bound_validity() -> (bool, String) {
    let start = Instant::now();
    let models = [test_model(), PopulationModel::from_probs(0.3, &[0.1, 0.2, 0.7], &[0.5, 0.3, 0.2]).unwrap()];
    let mut rows = 0;
    let mut failures = Vec::new();
    for (i, model) in models.iter().enumerate() {
        let budget = EmpiricalBudget { replications: 100_000, master_seed: SEED + i as u64 };
        for row in bound_table(model, &[100, 1_000, 10_000], &BOUND_G_GRID, Some(budget)).unwrap() {
            rows += 1;
            let e = row.empirical.unwrap();
            if e.frequency > row.bound.value + BOUND_STDERRS * e.stderr {
                failures.push(format!("model {i} {} n={} g={}", row.kind.name(), row.n, row.g));
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = if failures.is_empty() {
        format!("{rows} grid points, none violated, in {elapsed:.2?}")
    } else {
        format!("violations: {}", failures.join("; "))
    };
    (failures.is_empty() && elapsed < BOUNDS_BUDGET, detail)
}

fn bound_monotonicity() -> (bool, String) {
    let models = [
        test_model(),
        PopulationModel::from_probs(0.3, &[0.1, 0.2, 0.7], &[0.5, 0.3, 0.2]).unwrap(),
        PopulationModel::from_probs(0.9, &[0.05, 0.95], &[0.6, 0.4]).unwrap(),
    ];
    let n_grid: Vec<u64> = (0..=12).map(|k| 10f64.powf(1.0 + k as f64 / 3.0).round() as u64).collect();
    let g_grid: Vec<f64> = (1..=40).map(|k| k as f64 * 0.025).collect();
    let mut violations = 0;
    let mut checked = 0;
    for model in &models {
        let rows = bound_table(model, &n_grid, &g_grid, None).unwrap();
        for kind in BoundKind::ALL {
            let value = |ni: usize, gi: usize| {
                let (n, g) = (n_grid[ni], g_grid[gi]);
                rows.iter().find(|r| r.kind == kind && r.n == n && r.g == g).unwrap().bound.value
            };
            for ni in 0..n_grid.len() {
                for gi in 0..g_grid.len() {
                    let v = value(ni, gi);
                    if gi + 1 < g_grid.len() {
                        checked += 1;
                        violations += usize::from(value(ni, gi + 1) > v);
                    }
                    if ni + 1 < n_grid.len() {
                        checked += 1;
                        violations += usize::from(value(ni + 1, gi) > v);
                    }
                }
            }
        }
    }
    (violations == 0, format!("{violations} violations in {checked} adjacent pairs"))
}

fn determinism() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut config = RunConfig::default_simulate();
    config.replications = 300;
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, config.to_json()).unwrap();
    let run = |threads: &str, name: &str| {
        let out_dir = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_jeffreys"))
            .args(["simulate", "--seed", "77", "--config"])
            .arg(&config_path)
            .arg("--out-dir")
            .arg(&out_dir)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .status;
        assert!(status.success(), "simulate exited with {status}");
        std::fs::read(out_dir.join("records.csv")).unwrap()
    };
    let a = run("1", "a");
    let b = run("1", "b");
    let c = run("4", "c");
    let rows = a.iter().filter(|&&b| b == b'\n').count() - 1;
    (a == b && a == c, format!("{} bytes, {rows} rows; 1 vs 1 vs 4 workers identical: {}", a.len(), a == b && a == c))
}

fn normal_accuracy() -> (bool, String) {
    let e1 = (normal::cdf(1.959_964) - 0.975).abs();
    let e2 = (normal::quantile(0.975) - 1.959_964).abs();
    (e1 <= CDF_TOL && e2 <= QUANTILE_TOL, format!("|Phi - 0.975| {e1:.2e}, |Phi^-1 - 1.959964| {e2:.2e}"))
}

fn main() -> ExitCode {
    let (clt, coverage) = clt_and_coverage();
    let results = [
        ("1 estimator exactness", estimator_exactness()),
        ("2 golden divergences", golden_divergences()),
        ("3 influence mean zero", influence_mean_zero()),
        ("4 sigma2 two routes", sigma2_two_routes()),
        ("5 CLT normality", clt),
        ("6 CI coverage", coverage),
        ("7 LLN", lln()),
        ("8 bound validity", bound_validity()),
        ("9 bound monotonicity", bound_monotonicity()),
        ("10 determinism", determinism()),
        ("11 normal accuracy", normal_accuracy()),
    ];
    let mut failed = 0;
    for (name, (passed, detail)) in &results {
        println!("{} {name}: {detail}", if *passed { "PASS" } else { "FAIL" });
        failed += usize::from(!passed);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
