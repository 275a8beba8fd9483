//! Normal confidence intervals from one simulated sample at several levels.

use jeffreys::asymptotics::{confidence_interval, plugin_sigma2};
use jeffreys::estimator::plug_in_estimate;
use jeffreys::model::{sample_batch, PopulationModel};
use jeffreys::rng::stream;

fn main() -> jeffreys::Result<()> {
    let model = PopulationModel::from_probs(0.5, &[0.5, 0.5], &[0.25, 0.75])?;
    let truth = model.true_divergence();
    let counts = sample_batch(&model, 10_000, stream(7, 0))?;
    println!("Y=1 counts {:?}", counts.n1());
    println!("Y=0 counts {:?}", counts.n0());

    let est = plug_in_estimate(&counts);
    let var = plugin_sigma2(&counts)?;
    println!("D_hat = {:.6}   truth = {truth:.6}   sigma2_hat = {:.4}", est.value().unwrap_or(f64::NAN), var.sigma2);

    for level in [0.80, 0.90, 0.95, 0.99] {
        let ci = confidence_interval(&est, &var, level)?;
        println!(
            "{:>4.0}%  [{:.6}, {:.6}]  width {:.6}  covers truth: {}",
            level * 100.0,
            ci.lower,
            ci.upper,
            ci.width(),
            ci.contains(truth)
        );
    }
    Ok(())
}
