//! Closed-form tail bounds next to Monte Carlo tail frequencies.

use jeffreys::bounds::{bound_table, EmpiricalBudget};
use jeffreys::model::PopulationModel;

fn main() -> jeffreys::Result<()> {
    let model = PopulationModel::from_probs(0.3, &[0.1, 0.2, 0.7], &[0.5, 0.3, 0.2])?;
    let budget = EmpiricalBudget { replications: 20_000, master_seed: 5 };
    let rows = bound_table(&model, &[200, 2_000, 20_000], &[0.05, 0.1, 0.2], Some(budget))?;

    println!("{:<20} {:>6} {:>5} {:>12} {:>10} {:>6}", "bound", "n", "g", "value", "observed", "valid");
    for r in &rows {
        let e = r.empirical.expect("budget given");
        println!(
            "{:<20} {:>6} {:>5} {:>12.4e} {:>10.5} {:>6}",
            r.kind.name(),
            r.n,
            r.g,
            r.bound.value,
            e.frequency,
            r.is_valid().unwrap_or(false)
        );
    }
    let informative = rows.iter().filter(|r| r.bound.informative).count();
    println!("{informative} of {} bounds are below 1", rows.len());
    Ok(())
}
