// Fisher information of the single-slit far-field pattern and the
// uncertainty chain it implies.

use std::error::Error;

use qfisher::slit::{fisher_slit, uncertainty_chain, SlitGeometry};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let geometry = SlitGeometry::default();
    let fisher = fisher_slit(&geometry)?;
    println!("F(nu) = {fisher:.9} (4/3 = {:.9})", 4.0 / 3.0);

    for hbar in [1.0, 0.5] {
        let chain = uncertainty_chain(&geometry.with_hbar(hbar)?)?;
        println!(
            "hbar = {hbar}: momentum bound {:.6e}, (dx)^2 = {:.6e}, product {:.6e} vs hbar^2/4 = {:.6e}",
            chain.momentum_bound,
            chain.position_variance,
            chain.product,
            hbar * hbar / 4.0
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
