// Splitting the momentum-shift Fisher information of a wavefunction into a
// spread term and a phase-gradient term.

use std::error::Error;

use qfisher::slit::{fisher_from_wavefunction, SlitGeometry, SlitWavefunction};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let plain = SlitWavefunction::momentum(&SlitGeometry::default())?;
    // a linear phase only shifts the position mean, so F stays put
    for (alpha, beta) in [(0.0, 0.0), (0.4, 0.0), (0.0, 2.5)] {
        let f = fisher_from_wavefunction(&plain.clone().with_linear_phase(alpha, beta))?;
        println!(
            "alpha = {alpha}, beta = {beta}: F = {:.8}, variance term {:.8}, phase term {:.3e}, <x> = {:+.6}",
            f.fisher, f.variance_term, f.phase_term, f.mean_position
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
