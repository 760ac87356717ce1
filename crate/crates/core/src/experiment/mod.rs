//! Experiment drivers behind the `pqclab` binary.
//!
//! Each experiment turns validated [`Settings`] into a [`Table`] (written as CSV,
//! optionally also as gnuplot data) plus a few human-readable summary lines.
//! Output depends only on the settings, so reruns are byte-identical.

pub mod config;
pub mod table;

use std::f64::consts::E;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::ansatz::{AnsatzSpec, Topology};
use crate::bounds::{self, lemma1_check, lemma2_check, moment_residual, LemmaTrial};
use crate::error::{Error, Result};
use crate::gradient::mc_grad_norm_sq;
use crate::init::{self, InitSpec, SeededRng};
use crate::pauli::{cz_table_residual, CzTable, Hamiltonian, PauliString, CZ_TABLE};
use crate::statevector::StateVector;
use crate::training::{self, qnn_half_period, QnnModel, VqeProblem};

pub use config::{Blocks, Experiment, HamiltonianSource, InitKind, RawConfig, Settings, TheoremChoice};
pub use table::{Cell, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Residual threshold for `verify-lemmas`.
pub const LEMMA_TOLERANCE: f64 = 1e-8;

/// Domain parameters exercised by `verify-lemmas`.
pub const LEMMA_A_VALUES: [f64; 3] = [0.1, 0.5, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    /// Summary lines for the terminal.
    pub report: Vec<String>,
    /// False when a verification experiment found a failure.
    pub passed: bool,
}

/// Provenance of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub experiment: Experiment,
    pub config_hash: String,
    pub version: &'static str,
    pub wall_clock: Duration,
}

impl RunRecord {
    pub fn summary(&self) -> String {
        format!(
            "run experiment={} config_hash={} version={} wall_clock_s={:.3}",
            self.experiment,
            self.config_hash,
            self.version,
            self.wall_clock.as_secs_f64()
        )
    }
}

/// Runs the configured experiment.
pub fn run(settings: &Settings) -> Result<(Outcome, RunRecord)> {
    run_with_cz_table(settings, &CZ_TABLE)
}

/// As [`run`], with the CZ rule table that `verify-lemmas` checks supplied by the caller.
pub fn run_with_cz_table(settings: &Settings, cz_table: &CzTable) -> Result<(Outcome, RunRecord)> {
    let start = Instant::now();
    let outcome = match settings.experiment {
        Experiment::SolveA => solve_a(settings),
        Experiment::Bounds => bounds_table(settings),
        Experiment::GradnormScan => gradnorm_scan(settings),
        Experiment::VqeTrain => vqe_train(settings),
        Experiment::QnnScan => qnn_scan(settings),
        Experiment::QnnDist => qnn_dist(settings),
        Experiment::VerifyLemmas => verify_lemmas(settings, cz_table),
    }?;
    let record = RunRecord {
        experiment: settings.experiment,
        config_hash: settings.config_hash(),
        version: VERSION,
        wall_clock: start.elapsed(),
    };
    Ok((outcome, record))
}

/// Metadata for the leading comment line of every output file.
pub fn output_meta(settings: &Settings) -> Vec<(&'static str, String)> {
    vec![
        ("config_hash", settings.config_hash()),
        ("version", VERSION.to_string()),
        ("experiment", settings.experiment.to_string()),
    ]
}

/// CSV text of `outcome` for `settings`.
pub fn render_csv(settings: &Settings, outcome: &Outcome) -> String {
    outcome.table.to_csv(&output_meta(settings))
}

/// Writes the CSV (to `out`, or returns it for stdout when unset) and the `.dat` file if requested.
pub fn write_outputs(settings: &Settings, outcome: &Outcome) -> Result<Option<String>> {
    let meta = output_meta(settings);
    if let Some(path) = &settings.dat {
        std::fs::write(path, outcome.table.to_dat(&meta))?;
    }
    let csv = outcome.table.to_csv(&meta);
    match &settings.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            Ok(None)
        }
        None => Ok(Some(csv)),
    }
}

fn spec_for(n: usize, l: usize, topology: &Topology) -> Result<AnsatzSpec> {
    AnsatzSpec::build(n, l, topology)
}

/// Domain parameter for reduced initialization at depth L: the explicit value if
/// given, otherwise the closed form for the ZZ chain and the sinc rule otherwise.
fn reduced_a(settings: &Settings, h: &Hamiltonian, n_blocks: usize) -> Result<f64> {
    if let Some(a) = settings.a {
        return Ok(a);
    }
    if settings.hamiltonian.is_zz() {
        init::solve_a_theorem1(n_blocks)
    } else {
        init::solve_a_theorem2(h.locality(), n_blocks)
    }
}

fn init_for(settings: &Settings, kind: InitKind, h: &Hamiltonian, n_blocks: usize) -> Result<InitSpec> {
    Ok(match kind {
        InitKind::Uniform => InitSpec::Uniform,
        InitKind::Gaussian => InitSpec::Gaussian {
            sigma2: settings
                .sigma2
                .unwrap_or_else(|| init::gaussian_sigma_default(h.locality(), n_blocks)),
        },
        InitKind::Reduced => InitSpec::Reduced {
            a: reduced_a(settings, h, n_blocks)?,
        },
        InitKind::Translated => {
            return Err(Error::config("inits", "translated initialization applies to the QNN experiments"))
        }
    })
}

fn init_parameter(init: &InitSpec) -> f64 {
    match *init {
        InitSpec::Uniform => f64::NAN,
        InitSpec::Reduced { a } | InitSpec::Translated { a, .. } => a,
        InitSpec::Gaussian { sigma2 } => sigma2,
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

// ---------------------------------------------------------------------------

fn solve_a(s: &Settings) -> Result<Outcome> {
    let l = s.blocks.resolve(0);
    let sl = s.locality;
    let (a, scale, scaled_bound, scaled_optimized) = match s.theorem {
        TheoremChoice::One => {
            let a = init::solve_a_theorem1(l)?;
            // bound_theorem1 is proportional to 2N − 3; report the N-free factor.
            let per_unit = bounds::bound_theorem1(2, l, a)?;
            (a, "2N-3", per_unit, 1.0 / E)
        }
        TheoremChoice::Two => {
            let a = init::solve_a_theorem2(sl, l)?;
            (
                a,
                "2|N|(L-1)",
                bounds::bound_theorem4(sl, l, a)?,
                bounds::bound_theorem4_optimized(sl, l)?,
            )
        }
        TheoremChoice::ThreeEdge => {
            let a = init::solve_a_theorem3_edge(l)?;
            let f = bounds::f_theorem3(bounds::QubitPosition::Edge, l, a)?;
            (a, "1", f, bounds::variance_floor_theorem3(bounds::QubitPosition::Edge, l))
        }
    };
    let m = bounds::moments(a)?;
    let mut table = Table::new(vec![
        "theorem",
        "blocks",
        "locality",
        "a",
        "alpha",
        "beta",
        "gamma",
        "scale",
        "scaled_bound",
        "scaled_optimized_bound",
    ]);
    table.push(vec![
        s.theorem.name().into(),
        l.into(),
        sl.into(),
        a.into(),
        m.alpha.into(),
        m.beta.into(),
        m.gamma.into(),
        scale.into(),
        scaled_bound.into(),
        scaled_optimized.into(),
    ]);
    let report = vec![format!(
        "theorem {} L={l} S={sl}: a = {a:.6} (alpha {:.6}, beta {:.6}, gamma {:.6}); bound/({scale}) = {scaled_bound:.6e}, optimized {scaled_optimized:.6e}",
        s.theorem.name(),
        m.alpha,
        m.beta,
        m.gamma
    )];
    Ok(Outcome {
        table,
        report,
        passed: true,
    })
}

fn bounds_table(s: &Settings) -> Result<Outcome> {
    let mut table = Table::new(vec![
        "n_qubits",
        "blocks",
        "theorem",
        "locality",
        "n_terms",
        "a",
        "ln_bound",
        "bound",
        "optimized_bound",
    ]);
    let mut report = Vec::new();
    for &n in &s.n_qubits {
        let h = s.hamiltonian.build(n)?;
        let l = s.blocks.resolve(n);
        for r in bounds::reports_for(&h, l)? {
            report.push(format!(
                "N={n} L={l} theorem {}: bound {:.6e} (optimized {:.6e})",
                r.theorem,
                r.bound,
                r.optimized.unwrap_or(f64::NAN)
            ));
            table.push(vec![
                n.into(),
                l.into(),
                r.theorem.into(),
                r.locality.unwrap_or(0).into(),
                r.n_terms.unwrap_or(0).into(),
                r.a.unwrap_or(f64::NAN).into(),
                r.ln_bound.into(),
                r.bound.into(),
                r.optimized.unwrap_or(f64::NAN).into(),
            ]);
        }
    }
    Ok(Outcome {
        table,
        report,
        passed: true,
    })
}

/// Theoretical lower bound and its depth-optimized floor for reduced initialization.
fn reduced_bounds(s: &Settings, h: &Hamiltonian, n: usize, l: usize, a: f64) -> Result<(f64, f64)> {
    if !h.is_unit_weighted() {
        return Ok((f64::NAN, f64::NAN));
    }
    if s.hamiltonian.is_zz() {
        Ok((bounds::bound_theorem1(n, l, a)?, bounds::floor_theorem1(n)))
    } else {
        let (terms, sl) = (h.n_terms(), h.locality());
        Ok((
            bounds::bound_theorem2(terms, sl, l, a)?,
            bounds::bound_theorem2_optimized(terms, sl, l)?,
        ))
    }
}

fn gradnorm_scan(s: &Settings) -> Result<Outcome> {
    let mut table = Table::new(vec![
        "n_qubits",
        "blocks",
        "init",
        "init_parameter",
        "samples",
        "seed",
        "mean_grad_norm_sq",
        "stderr",
        "bound",
        "optimized_bound",
    ])
    .grouped("init");
    // Resource problems surface before any sampling.
    for &n in &s.n_qubits {
        StateVector::zero_state(n)?;
    }
    let mut rows = Vec::new();
    for &kind in &s.inits {
        for &n in &s.n_qubits {
            let h = s.hamiltonian.build(n)?;
            let l = s.blocks.resolve(n);
            let spec = spec_for(n, l, &s.topology)?;
            let init = init_for(s, kind, &h, l)?;
            let est = mc_grad_norm_sq(&spec, &h, &init, s.samples, s.seed)?;
            let (bound, floor) = match init {
                InitSpec::Reduced { a } => reduced_bounds(s, &h, n, l, a)?,
                _ => (f64::NAN, f64::NAN),
            };
            rows.push((kind, n, est.mean));
            table.push(vec![
                n.into(),
                l.into(),
                kind.name().into(),
                init_parameter(&init).into(),
                s.samples.into(),
                s.seed.into(),
                est.mean.into(),
                est.stderr.into(),
                bound.into(),
                floor.into(),
            ]);
        }
    }
    let mut report = Vec::new();
    if s.n_qubits.len() >= 2 {
        for &kind in &s.inits {
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.0 == kind)
                .map(|r| (r.1 as f64, r.2.ln()))
                .unzip();
            report.push(format!(
                "{}: slope of ln E|grad C|^2 versus N = {:.4}",
                kind.name(),
                regression_slope(&xs, &ys)
            ));
        }
    }
    Ok(Outcome {
        table,
        report,
        passed: true,
    })
}

fn vqe_train(s: &Settings) -> Result<Outcome> {
    let mut table = Table::new(vec![
        "n_qubits",
        "init",
        "round",
        "iteration",
        "cost",
        "relative_cost",
        "grad_norm_sq",
        "converged",
    ])
    .grouped("round");
    let mut report = Vec::new();
    for &n in &s.n_qubits {
        let h = s.hamiltonian.build(n)?;
        let l = s.blocks.resolve(n);
        let problem = VqeProblem::new(spec_for(n, l, &s.topology)?, h.clone())?;
        for &kind in &s.inits {
            let init = init_for(s, kind, &h, l)?;
            let traces = training::train_vqe_rounds(&problem, &init, s.rounds, s.iters, s.rmsprop, s.seed)?;
            let finals: Vec<f64> = traces.iter().map(|t| t.final_record().relative_cost).collect();
            report.push(format!(
                "N={n} L={l} {init}: {}/{} rounds below {:e}, mean final relative cost {:.4e}",
                traces.iter().filter(|t| t.converged).count(),
                s.rounds,
                training::VQE_CONVERGED_GAP,
                finals.iter().sum::<f64>() / finals.len() as f64
            ));
            for (round, t) in traces.iter().enumerate() {
                for r in &t.records {
                    table.push(vec![
                        n.into(),
                        kind.name().into(),
                        round.into(),
                        r.iteration.into(),
                        r.cost.into(),
                        r.relative_cost.into(),
                        r.grad_norm_sq.into(),
                        t.converged.into(),
                    ]);
                }
            }
        }
    }
    Ok(Outcome {
        table,
        report,
        passed: true,
    })
}

/// Full-period form of a QNN initialization; [`qnn_half_period`] maps it onto
/// the QNN's period.
fn qnn_init(s: &Settings, kind: InitKind) -> InitSpec {
    let a = s.a.unwrap_or(0.1);
    match kind {
        InitKind::Uniform | InitKind::Gaussian => InitSpec::Uniform,
        InitKind::Reduced => InitSpec::Reduced { a },
        InitKind::Translated => InitSpec::Translated { a, center: s.center },
    }
}

/// Final losses of `rounds` QNN runs; round r uses stream r of `seed` for every p
/// and every initialization (common random numbers).
fn qnn_final_losses(s: &Settings, p: usize, init: &InitSpec) -> Result<Vec<(f64, bool)>> {
    let model = QnnModel::new(p)?;
    (0..s.rounds)
        .into_par_iter()
        .map(|r| {
            let t = training::train_qnn(&model, init, s.iters, s.rmsprop, s.seed, r as u64)?;
            Ok((t.final_record().cost, t.converged))
        })
        .collect()
}

fn qnn_scan(s: &Settings) -> Result<Outcome> {
    let mut table = Table::new(vec!["init", "a", "p", "rounds", "successes", "frequency"]).grouped("init");
    let mut report = Vec::new();
    for &kind in &s.inits {
        let init = qnn_half_period(&qnn_init(s, kind));
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &p in &s.p {
            let successes = qnn_final_losses(s, p, &init)?.iter().filter(|r| r.1).count();
            let freq = successes as f64 / s.rounds as f64;
            xs.push(p as f64);
            // Continuity correction keeps the logarithm finite at zero successes.
            ys.push(((successes as f64 + 0.5) / (s.rounds as f64 + 1.0)).ln());
            table.push(vec![
                kind.name().into(),
                init_parameter(&qnn_init(s, kind)).into(),
                p.into(),
                s.rounds.into(),
                successes.into(),
                freq.into(),
            ]);
        }
        let slope = if xs.len() >= 2 {
            format!(", log-frequency slope {:.4}", regression_slope(&xs, &ys))
        } else {
            String::new()
        };
        report.push(format!("{}: domain {}{slope}", kind.name(), init));
    }
    Ok(Outcome {
        table,
        report,
        passed: true,
    })
}

fn qnn_dist(s: &Settings) -> Result<Outcome> {
    let p = s.p[0];
    let mut per_init = Vec::new();
    for &kind in &s.inits {
        let init = qnn_half_period(&qnn_init(s, kind));
        per_init.push((kind, qnn_final_losses(s, p, &init)?));
    }
    // Shared log10 bin edges over all initializations; exact zeros go to the first bin.
    let logs: Vec<f64> = per_init
        .iter()
        .flat_map(|(_, v)| v.iter().map(|r| r.0))
        .filter(|&x| x > 0.0)
        .map(f64::log10)
        .collect();
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min).floor();
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
    let (lo, hi) = if lo.is_finite() && hi > lo { (lo, hi) } else { (-1.0, 0.0) };
    let width = (hi - lo) / s.bins as f64;
    let mut table = Table::new(vec![
        "init",
        "p",
        "bin",
        "log10_loss_lo",
        "log10_loss_hi",
        "count",
        "frequency",
    ])
    .grouped("init");
    let mut report = Vec::new();
    for (kind, results) in &per_init {
        let mut counts = vec![0usize; s.bins];
        for &(loss, _) in results {
            let idx = if loss > 0.0 {
                (((loss.log10() - lo) / width).floor().max(0.0) as usize).min(s.bins - 1)
            } else {
                0
            };
            counts[idx] += 1;
        }
        for (b, &c) in counts.iter().enumerate() {
            table.push(vec![
                kind.name().into(),
                p.into(),
                b.into(),
                (lo + b as f64 * width).into(),
                (lo + (b + 1) as f64 * width).into(),
                c.into(),
                (c as f64 / s.rounds as f64).into(),
            ]);
        }
        let successes = results.iter().filter(|r| r.1).count();
        report.push(format!(
            "{} ({}): {successes}/{} rounds reach loss < {:e}",
            kind.name(),
            qnn_half_period(&qnn_init(s, *kind)),
            s.rounds,
            training::QNN_TOLERANCE
        ));
    }
    Ok(Outcome {
        table,
        report,
        passed: true,
    })
}

/// Largest mismatch between CZ†σCZ evaluated on random states and the
/// conjugated string predicted by `table`, on three qubits.
fn cz_statevector_residual(table: &CzTable, trials: usize, seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in 0..trials {
        let mut rng = SeededRng::new(seed, 1_000_000 + t as u64);
        let codes: Vec<u8> = (0..3).map(|_| (rng.next_u64() % 4) as u8).collect();
        let sigma = PauliString::new(&codes)?;
        let mut psi = StateVector::zero_state(3)?;
        for q in 0..3 {
            psi.apply_ry(q, InitSpec::Uniform.sample(&mut rng))?;
            psi.apply_rx(q, InitSpec::Uniform.sample(&mut rng))?;
        }
        psi.apply_cz((0, 1))?;
        psi.apply_ry(2, InitSpec::Uniform.sample(&mut rng))?;
        psi.apply_cz((1, 2))?;
        psi.apply_rx(0, InitSpec::Uniform.sample(&mut rng))?;
        let mut conjugated_state = psi.clone();
        conjugated_state.apply_cz((0, 2))?;
        let direct = conjugated_state.expectation(&sigma)?;
        let predicted = psi.expectation(&sigma.cz_conjugate_with((0, 2), table)?)?;
        worst = worst.max((direct - predicted).norm());
    }
    Ok(worst)
}

fn verify_lemmas(s: &Settings, cz_table: &CzTable) -> Result<Outcome> {
    let trials: Vec<LemmaTrial> = (0..s.trials)
        .map(|t| LemmaTrial::random(&mut SeededRng::new(s.seed, t as u64)))
        .collect();
    let mut checks: Vec<(&'static str, usize, f64)> = Vec::new();
    let moments = LEMMA_A_VALUES
        .iter()
        .map(|&a| moment_residual(a))
        .collect::<Result<Vec<_>>>()?;
    checks.push(("moment_closed_forms", LEMMA_A_VALUES.len(), moments.into_iter().fold(0.0, f64::max)));
    let per_trial: Vec<(f64, f64)> = trials
        .par_iter()
        .map(|trial| {
            let mut worst = (0.0f64, 0.0f64);
            for &a in &LEMMA_A_VALUES {
                worst.0 = worst.0.max(lemma1_check(a, trial)?);
                worst.1 = worst.1.max(lemma2_check(a, trial)?);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    let count = s.trials * LEMMA_A_VALUES.len();
    checks.push(("lemma1", count, per_trial.iter().map(|w| w.0).fold(0.0, f64::max)));
    checks.push((
        "lemma2_and_corollaries",
        count,
        per_trial.iter().map(|w| w.1).fold(0.0, f64::max),
    ));
    checks.push(("cz_table_matrix_oracle", 16, cz_table_residual(cz_table)));
    checks.push((
        "cz_table_statevector",
        s.trials,
        cz_statevector_residual(cz_table, s.trials, s.seed)?,
    ));

    let mut table = Table::new(vec!["check", "cases", "max_residual", "tolerance", "passed"]);
    let mut report = Vec::new();
    let mut passed = true;
    for (name, cases, residual) in checks {
        // NaN must count as a failure.
        let ok = residual < LEMMA_TOLERANCE;
        passed &= ok;
        report.push(format!(
            "{} {name}: max residual {residual:.3e} over {cases} cases",
            if ok { "PASS" } else { "FAIL" }
        ));
        table.push(vec![
            name.into(),
            cases.into(),
            residual.into(),
            LEMMA_TOLERANCE.into(),
            ok.into(),
        ]);
    }
    Ok(Outcome { table, report, passed })
}
