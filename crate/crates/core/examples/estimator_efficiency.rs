// Maximum-likelihood fits and their Monte Carlo efficiency against the
// Cramér-Rao bound.

use std::error::Error;

use qfisher::montecarlo::{run_trials, sample_outcomes, stream_rng, Estimator, TrialConfig};
use qfisher::stats::{crb, mle, models::bernoulli};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let model = bernoulli();
    let data = sample_outcomes(&model, 0.3, 500, &mut stream_rng(7, 0))?;
    let fit = mle(&model, &data)?;
    println!("one sample: theta_hat = {:.4}, CRB at theta_hat {:.3e}", fit.theta_hat, fit.crb);
    println!("CRB at the truth: {:.3e}", crb(&model, 0.3, 500)?);

    for estimator in [Estimator::Mle, Estimator::BayesMean] {
        let report = run_trials(&TrialConfig::new(model.clone(), 0.3, 500, 400, 7).with_estimator(estimator))?;
        println!(
            "{estimator:?}: variance {:.3e}, efficiency {:.3} +/- {:.3}",
            report.empirical_variance, report.efficiency, report.efficiency_standard_error
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
