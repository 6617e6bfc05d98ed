// Builds the same report as `ghzq certify` and round-trips it through JSON.

use std::error::Error;

use ghzq::report::{run, Command, ReportDocument, RunConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = RunConfig::single(Command::Certify, 4, 3);
    let doc = run(&config)?;
    let text = doc.to_json();
    let back = ReportDocument::from_json(&text)?;
    assert_eq!(back.to_json(), text);
    println!("{} bytes, exit code {}", text.len(), doc.exit_code());
    println!("{}", text.lines().take(12).collect::<Vec<_>>().join("\n"));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
