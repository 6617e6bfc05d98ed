// Four qutrits, three of them measuring `Y`: the quantum state fixes every
// observable while no local assignment satisfies all five congruences.
//
// `cargo run --example four_qutrit_contradiction`

use std::error::Error;

use ghzq::{certify, ConstructionParams, EIGEN_TOL};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = ConstructionParams::new(4, 3, 3, 3)?;
    let cert = certify(&params, EIGEN_TOL)?;

    for (label, residual) in cert.observables.iter().zip(&cert.quantum_residuals) {
        println!("{label:<28} residual {residual:.2e}");
    }
    for c in &cert.constraints {
        println!("LHV needs  {:<12} sum ≡ {} (mod 3)", c.pattern(), c.offset);
    }
    println!(
        "searched {} assignments, satisfying: {:?}",
        cert.lhv_search.space_size, cert.lhv_search.satisfying
    );
    println!("gcd(N2, D) = {}, divides N: {}", cert.analytic.gcd_value, cert.analytic.divides_n);
    assert!(cert.verdict.contradiction);
    println!("contradiction certified");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
