// Mach-Zehnder output statistics for Fock inputs.

use std::error::Error;

use qfisher::interferometer::{
    fisher_phase_at_zero, linearized_phase_error, outcome_distribution, wigner_d, FockInput,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let rotation = wigner_d(20.0, 0.7)?;
    println!("j = 20 rotation, |d^T d - 1| = {:.2e}", rotation.orthogonality_residual());

    for input in [FockInput::new(8, 0)?, FockInput::new(6, 2)?, FockInput::balanced(4)?] {
        let p = outcome_distribution(&input, 0.3)?;
        let f = fisher_phase_at_zero(&input)?;
        println!(
            "|{}, {}>: P(k | 0.3) = {:.3?}",
            input.n1,
            input.n2,
            p
        );
        println!(
            "    F0 = {} (curvature {:.6}), CRB {:.4e}, linearized error at 0.3 {:?}",
            f.closed_form,
            f.finite_difference,
            f.crb(),
            linearized_phase_error(&input, 0.3)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
