// Existence table over a small `(N, D)` grid.

use std::error::Error;

use ghzq::report::{run, Command, RunConfig, Span};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = RunConfig::new(Command::Sweep, Span { start: 3, end: 6 }, Span { start: 2, end: 8 });
    let doc = run(&config)?;
    let rows = doc.sweep.as_deref().unwrap_or_default();

    print!("N\\D");
    for d in config.dim.values() {
        print!("{d:>4}");
    }
    for n in config.parties.values() {
        print!("\n{n:>3}");
        for d in config.dim.values() {
            let row = rows.iter().find(|r| r.parties == n && r.dim == d).ok_or("missing cell")?;
            let mark = match row.status.as_str() {
                "contradiction" if row.analytic_only => "a",
                "contradiction" => "+",
                "none" => ".",
                _ => "?",
            };
            print!("{mark:>4}");
        }
    }
    println!("\n+ certified, a certified by gcd test only, . no construction");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
