// Dropping any one party breaks some perfect correlation, and the `Y`
// eigenbasis overlaps the `X` basis everywhere.

use std::error::Error;

use ghzq::criterion::construction_ddim_check;
use ghzq::{genuinely_npartite_check, ConstructionParams};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = ConstructionParams::new(4, 6, 3, 3)?;
    let report = genuinely_npartite_check(&params)?;
    for removal in &report.removals {
        println!("without party {}: v_l failing for l in {:?}", removal.party, removal.failing);
    }
    let ddim = construction_ddim_check(&params)?;
    println!("min X/Y overlap {:.6}", ddim.min_overlap);
    println!("genuinely {}-partite, {}-dimensional: {}", params.parties, params.dim, report.genuine && ddim.positive);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
