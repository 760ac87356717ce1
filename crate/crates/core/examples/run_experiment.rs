//! Driving an experiment from config text, as the `pqclab` binary does.

use pqclab::experiment::{self, Experiment, RawConfig, Settings};

fn main() -> pqclab::Result<()> {
    let raw = RawConfig::parse(
        "# small Heisenberg scan\n\
         hamiltonian = heisenberg\n\
         n_qubits = 2,3,4\n\
         blocks = 4\n\
         samples = 64\n\
         seed = 9\n",
    )?;
    let settings = Settings::resolve(Experiment::GradnormScan, &raw)?;
    let (outcome, record) = experiment::run(&settings)?;
    print!("{}", experiment::render_csv(&settings, &outcome));
    for line in &outcome.report {
        println!("{line}");
    }
    println!("{}", record.summary());

    // Keys that the experiment does not read are rejected by name.
    let bad = RawConfig::parse("samples = 10\ntrials = 3\n")?;
    if let Err(e) = Settings::resolve(Experiment::GradnormScan, &bad) {
        println!("rejected: {e}");
    }
    Ok(())
}
