// Sequential Bayesian updates of a phase posterior from repeated
// balanced-input shots.

use std::error::Error;

use qfisher::interferometer::resource_scaling;
use qfisher::montecarlo::{run_accumulation_with, AccumulationConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = AccumulationConfig {
        j: 30,
        n_repeats: 6,
        postselect: true,
        ..AccumulationConfig::default()
    };
    let run = run_accumulation_with(&config, |shot, posterior| {
        println!("shot {shot}: posterior variance {:.4e}", posterior.variance());
    })?;
    println!(
        "final variance {:.4e}, 4n/N_tot^2 = {:.4e}",
        run.variance,
        resource_scaling(f64::from(config.j), config.n_repeats)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
