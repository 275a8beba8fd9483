//! Directed and symmetric KL divergences between two categorical laws.

use jeffreys::model::{kl_divergence, sym_kl_divergence, ProbVector};

fn main() -> jeffreys::Result<()> {
    let p = ProbVector::new(vec![0.5, 0.5])?;
    let q = ProbVector::new(vec![0.25, 0.75])?;

    let forward = kl_divergence(&p, &q)?;
    let backward = kl_divergence(&q, &p)?;
    let sym = sym_kl_divergence(&p, &q)?;

    println!("KL(p||q)        = {forward:.15}");
    println!("KL(q||p)        = {backward:.15}");
    println!("D_sym(p, q)     = {sym:.15}");
    println!("ln(3)/4         = {:.15}", 3f64.ln() / 4.0);
    println!("sum of directed = {:.15}", forward + backward);

    // Both divergences need strictly positive vectors.
    let sparse = ProbVector::new(vec![0.0, 1.0])?;
    if let Err(e) = sym_kl_divergence(&sparse, &q) {
        println!("D_sym(sparse, q) rejected: {e}");
    }
    Ok(())
}
