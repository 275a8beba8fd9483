//! Influence values and the asymptotic variance of the plug-in estimator.

use jeffreys::asymptotics::{exact_sigma2, InfluenceFunction};
use jeffreys::model::{Label, PopulationModel};

fn main() -> jeffreys::Result<()> {
    let model = PopulationModel::from_probs(0.5, &[0.5, 0.5], &[0.25, 0.75])?;
    let w = InfluenceFunction::new(&model);
    let k = w.coefficients();
    println!("b = {:?}", k.b);
    println!("c = {:?}", k.c);

    println!("{:>4} {:>5} {:>10} {:>20}", "x", "y", "prob", "W(x, y)");
    for j in 0..model.alphabet().size() {
        for (y, prob) in [
            (Label::One, model.label_prob() * model.cond_p()[j]),
            (Label::Zero, model.label_prob_zero() * model.cond_q()[j]),
        ] {
            println!("{:>4} {:>5} {:>10.4} {:>20.15}", format!("a{}", j + 1), y.to_string(), prob, w.value(j, y));
        }
    }

    let v = exact_sigma2(&model);
    println!("E[W]    = {:e}", v.mean_check);
    println!("sigma^2 = {:.15}", v.sigma2);

    let null = PopulationModel::from_probs(0.3, &[0.2, 0.8], &[0.2, 0.8])?;
    println!("sigma^2 at the null = {}", exact_sigma2(&null).sigma2);
    Ok(())
}
