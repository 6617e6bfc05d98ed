// The qubit case: `XXX` and the three `XYY` permutations.

use std::error::Error;

use ghzq::{certify, reproduce_known_case, KnownCase, EIGEN_TOL};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for case in [
        KnownCase::ThreeQubit,
        KnownCase::DPlusOneParties { dim: 3 },
        KnownCase::OddPartiesEvenDim { parties: 5, dim: 4 },
    ] {
        let params = reproduce_known_case(case)?;
        let cert = certify(&params, EIGEN_TOL)?;
        println!(
            "{case:<18} N={} D={} N2={} g={}  contradiction={}",
            params.parties, params.dim, params.n2, params.divisor, cert.verdict.contradiction
        );
        assert!(cert.verdict.contradiction);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
