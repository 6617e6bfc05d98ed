// Eigenbasis overlaps of `X(α)` and `X(β)`. Zero entries would make the
// pair effectively lower-dimensional.

use std::error::Error;

use ghzq::rational::{int, ratio};
use ghzq::{genuinely_ddim_check, overlap_sq, x_of_alpha, UNITARY_TOL};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = 3;
    let y = ratio(1, 3);
    let x = x_of_alpha(d, &int(0));
    println!("X(0) is unitary: {}", x.is_unitary(UNITARY_TOL));

    println!("|<n|m>_{{1/3}}|^2 for D = {d}:");
    for n in 0..d {
        let row: Vec<String> = (0..d)
            .map(|m| overlap_sq(d, n, &int(0), m, &y).map(|v| format!("{v:.6}")))
            .collect::<Result<_, _>>()?;
        println!("  {}", row.join("  "));
    }

    for dim in 2..=6 {
        let r = genuinely_ddim_check(dim, &int(0), &y)?;
        println!("D = {dim}: min overlap {:.9} at {:?}", r.min_overlap, r.argmin);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
