//! Median absolute error of the plug-in estimate as the sample grows,
//! next to the normal-scale prediction 0.674·σ/√n.

use std::collections::BTreeSet;

use jeffreys::model::PopulationModel;
use jeffreys::montecarlo::{lln_curve, run_experiment, ExperimentConfig};

fn main() -> jeffreys::Result<()> {
    let config = ExperimentConfig {
        model: PopulationModel::from_probs(0.5, &[0.5, 0.5], &[0.25, 0.75])?,
        n_values: vec![100, 1_000, 10_000, 100_000, 1_000_000],
        replications: 200,
        master_seed: 1,
        ci_level: 0.95,
        checks: BTreeSet::new(),
    };
    let out = run_experiment(&config)?;
    let sigma = out.sigma2.sigma2.sqrt();
    println!("{:>8} {:>14} {:>14}", "n", "median |eta|", "0.674 sigma/sqrt(n)");
    for (n, med) in lln_curve(&out.records)? {
        println!("{n:>8} {med:>14.6} {:>14.6}", 0.674_489_75 * sigma / (n as f64).sqrt());
    }
    Ok(())
}
