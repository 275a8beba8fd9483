//! Asymptotic normality and coverage on the reference model: 2000 samples
//! of size 10⁴.

use std::collections::BTreeSet;

use jeffreys::model::PopulationModel;
use jeffreys::montecarlo::{evaluate_checks, run_experiment, Check, ExperimentConfig};

fn main() -> jeffreys::Result<()> {
    let config = ExperimentConfig {
        model: PopulationModel::from_probs(0.5, &[0.5, 0.5], &[0.25, 0.75])?,
        n_values: vec![1_000, 10_000],
        replications: 2_000,
        master_seed: 20_241_016,
        ci_level: 0.95,
        checks: BTreeSet::from([Check::Clt, Check::Coverage]),
    };
    let out = run_experiment(&config)?;
    println!("D_sym = {:.6}, sigma^2 = {:.6}", out.true_divergence, out.sigma2.sigma2);
    for s in &out.summaries {
        println!(
            "n = {:>6}  degenerate {:>3}  KS {:.4}  coverage {:.4}  var ratio {:.4}",
            s.n,
            s.degenerate_count,
            s.ks_distance.unwrap_or(f64::NAN),
            s.coverage_rate.unwrap_or(f64::NAN),
            s.variance_ratio.unwrap_or(f64::NAN),
        );
    }
    for c in evaluate_checks(&config, &out) {
        println!("{:<8} {}  {}", c.check.name(), if c.passed { "PASS" } else { "FAIL" }, c.detail);
    }
    Ok(())
}
