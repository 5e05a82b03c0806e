//! Runs a few verification suites and prints the text report.

use totodd::suite::{run, RunConfig, Suite};

fn main() -> totodd::Result<()> {
    let mut config = RunConfig::new(18, 3)?
        .with_suites(vec![Suite::Commute, Suite::Fnr, Suite::Glanois])
        .with_seed(1);
    config.samples = 20;
    let report = run(&config)?;
    print!("{}", report.to_text());
    std::process::exit(report.exit_code());
}
