//! Plug-in estimate from a count table, either built in code or read from a
//! counts CSV given as the first argument.

use jeffreys::estimator::{empirical_measures, plug_in_estimate};
use jeffreys::io::read_counts;
use jeffreys::model::CountTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let counts = match std::env::args_os().nth(1) {
        Some(path) => read_counts(path.as_ref())?,
        None => CountTable::new(vec![3, 1], vec![1, 3])?,
    };

    let m = empirical_measures(&counts);
    println!("n = {}, p_n_hat = {}, q_n_hat = {}", m.n, m.p_n_hat, m.q_n_hat);
    println!("p_hat = {:?}", m.p_hat);
    println!("q_hat = {:?}", m.q_hat);

    let est = plug_in_estimate(&counts);
    match est.outcome {
        Ok(v) => println!("D_hat = {v:.12}"),
        Err(reason) => println!("D_hat undefined: {reason}"),
    }

    let sparse = CountTable::new(vec![5, 0], vec![2, 3])?;
    println!("sparse table: {:?}", plug_in_estimate(&sparse).degeneracy());
    Ok(())
}
