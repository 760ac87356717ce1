//! `pqclab`: command-line driver for the experiments in `pqclab::experiment`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pqclab::experiment::{self, Experiment, RawConfig, Settings};
use pqclab::pauli::CZ_TABLE;
use pqclab::{Error, Result};

const KEYS_HELP: &str = "\
Config files hold one `key = value` per line (`#` starts a comment). Flags override file values.

Keys (experiments that read them):
  theorem      1 | 2 | 3edge                              (solve-a)
  blocks       depth L: INT or kN, e.g. 5N               (solve-a, bounds, gradnorm-scan, vqe-train)
  locality     S for theorem 2                            (solve-a)
  hamiltonian  zz | heisenberg | file:PATH                (bounds, gradnorm-scan, vqe-train)
  n_qubits     comma list, e.g. 2,4,6,8                   (bounds, gradnorm-scan, vqe-train)
  topology     chain_closed | full                        (gradnorm-scan, vqe-train)
  inits        comma list of uniform, gaussian, reduced, translated
  a            reduced-domain parameter (default: solved from the bound; 0.1 for QNN)
  sigma2       gaussian variance (default 1/(8SL))
  center       translated-domain center (qnn-dist, default pi/4)
  samples      Monte Carlo samples (gradnorm-scan, default 500)
  rounds       training rounds (vqe-train 10, QNN 500)
  iters        iterations per round (default 200)
  lr0, lr1     VQE learning-rate schedule endpoints (0.01, 0.005)
  lr           QNN learning rate (0.01)
  smoothing    RMSProp decay (VQE 0.999, QNN 0.99)
  p            QNN qubit counts, comma list (qnn-scan 6,8,10,12,14; qnn-dist 16)
  bins         histogram bins (qnn-dist, default 24)
  trials       random trials (verify-lemmas, default 100)
  seed         u64 master seed (default 0)
  out, dat     CSV path (stdout if unset) and gnuplot data path

Exit codes: 0 success, 1 verification failure, 2 config error, 3 resource error.";

#[derive(Parser)]
#[command(name = "pqclab", version, about = "Trainability experiments for hardware-efficient ansatzes", after_long_help = KEYS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Solve for the reduced-domain parameter a and print the optimized bound.
    SolveA,
    /// Evaluate gradient-norm lower bounds for a Hamiltonian.
    Bounds,
    /// Monte Carlo gradient norms per (N, initialization).
    GradnormScan,
    /// RMSProp VQE training traces.
    VqeTrain,
    /// QNN global-convergence frequency per (p, initialization).
    QnnScan,
    /// Histogram of final QNN losses per initialization.
    QnnDist,
    /// Check the moment identities, lemmas and CZ rules numerically.
    VerifyLemmas,
}

impl Command {
    fn experiment(self) -> Experiment {
        match self {
            Command::SolveA => Experiment::SolveA,
            Command::Bounds => Experiment::Bounds,
            Command::GradnormScan => Experiment::GradnormScan,
            Command::VqeTrain => Experiment::VqeTrain,
            Command::QnnScan => Experiment::QnnScan,
            Command::QnnDist => Experiment::QnnDist,
            Command::VerifyLemmas => Experiment::VerifyLemmas,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// CSV output path (default: stdout).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Also write whitespace-separated gnuplot data here.
    #[arg(long, global = true)]
    dat: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true)]
    rounds: Option<String>,
    #[arg(long, global = true)]
    iters: Option<String>,
    /// zz | heisenberg | file:PATH
    #[arg(long, global = true)]
    hamiltonian: Option<String>,
    /// chain_closed | full
    #[arg(long, global = true)]
    topology: Option<String>,
    /// Comma-separated qubit counts.
    #[arg(long, global = true)]
    n_qubits: Option<String>,
    /// INT or kN (e.g. 5N).
    #[arg(long, global = true)]
    blocks: Option<String>,
    /// 1 | 2 | 3edge
    #[arg(long, global = true)]
    theorem: Option<String>,
    #[arg(long, global = true)]
    locality: Option<String>,
    /// Comma-separated QNN sizes.
    #[arg(long, global = true)]
    p: Option<String>,
    #[arg(long, global = true)]
    a: Option<String>,
    /// Comma-separated initializations.
    #[arg(long, global = true)]
    inits: Option<String>,
    #[arg(long, global = true)]
    trials: Option<String>,
    /// Any config key, as KEY=VALUE; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Corrupt one CZ conjugation rule before verify-lemmas (test hook).
    #[arg(long, global = true, hide = true)]
    inject_cz_fault: bool,
}

impl Common {
    fn raw_config(&self) -> Result<RawConfig> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
                RawConfig::parse(&text)?
            }
            None => RawConfig::default(),
        };
        let flags = [
            ("seed", self.seed.map(|s| s.to_string())),
            ("out", self.out.clone()),
            ("dat", self.dat.clone()),
            ("samples", self.samples.clone()),
            ("rounds", self.rounds.clone()),
            ("iters", self.iters.clone()),
            ("hamiltonian", self.hamiltonian.clone()),
            ("topology", self.topology.clone()),
            ("n_qubits", self.n_qubits.clone()),
            ("blocks", self.blocks.clone()),
            ("theorem", self.theorem.clone()),
            ("locality", self.locality.clone()),
            ("p", self.p.clone()),
            ("a", self.a.clone()),
            ("inits", self.inits.clone()),
            ("trials", self.trials.clone()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.set(key, v);
            }
        }
        for assignment in &self.set {
            let (k, v) = assignment
                .split_once('=')
                .ok_or_else(|| Error::config("set", format!("expected KEY=VALUE, got `{assignment}`")))?;
            raw.set(k.trim(), v.trim());
        }
        Ok(raw)
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let settings = Settings::resolve(cli.command.experiment(), &cli.common.raw_config()?)?;
    let mut table = CZ_TABLE;
    if cli.common.inject_cz_fault {
        table.entries[1][2].2 = !table.entries[1][2].2;
    }
    let (outcome, record) = experiment::run_with_cz_table(&settings, &table)?;
    if let Some(csv) = experiment::write_outputs(&settings, &outcome)? {
        print!("{csv}");
    }
    for line in &outcome.report {
        eprintln!("{line}");
    }
    eprintln!("{}", record.summary());
    Ok(outcome.passed)
}

/// 0 success, 1 verification failure, 2 config error, 3 resource error.
fn exit_status(result: &Result<bool>) -> u8 {
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => e.exit_code() as u8,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_status(&result))
}
