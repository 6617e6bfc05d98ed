// Which splits `N = N1 + N2` give a contradiction, decided by gcd and
// confirmed by exhaustive search.

use std::error::Error;

use ghzq::lhv::cyclic_constraints;
use ghzq::{admissible_constructions, analytic_solvable, brute_force_search, DEFAULT_LHV_BOUND};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (n, d) = (4, 6);
    for n2 in 1..n {
        let witness = analytic_solvable(n, d, n2)?;
        let found = brute_force_search(&cyclic_constraints(n, d, n2)?, n, d, DEFAULT_LHV_BOUND)?;
        println!(
            "N2 = {n2}: gcd = {}, LHV by gcd test: {:5}, by search: {:?}",
            witness.gcd_value,
            witness.solvable(),
            found.map(|a| (a.x, a.y))
        );
    }
    let r = admissible_constructions(n, d)?;
    println!("admissible for N = {n}, D = {d}: {:?}", r.admissible);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
