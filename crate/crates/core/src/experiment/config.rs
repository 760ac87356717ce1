//! Flat `key = value` configuration with per-experiment defaults.
//!
//! Files hold one assignment per line; `#` starts a comment line. Command-line
//! flags are merged on top of the file. Every key is validated into [`Settings`]
//! before any computation starts, and errors name the offending key.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::ansatz::Topology;
use crate::error::{Error, Result};
use crate::pauli::{heisenberg_chain, parse_hamiltonian, zz_chain, Hamiltonian};
use crate::training::RmspropConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SolveA,
    Bounds,
    GradnormScan,
    VqeTrain,
    QnnScan,
    QnnDist,
    VerifyLemmas,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::SolveA,
        Experiment::Bounds,
        Experiment::GradnormScan,
        Experiment::VqeTrain,
        Experiment::QnnScan,
        Experiment::QnnDist,
        Experiment::VerifyLemmas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SolveA => "solve-a",
            Experiment::Bounds => "bounds",
            Experiment::GradnormScan => "gradnorm-scan",
            Experiment::VqeTrain => "vqe-train",
            Experiment::QnnScan => "qnn-scan",
            Experiment::QnnDist => "qnn-dist",
            Experiment::VerifyLemmas => "verify-lemmas",
        }
    }

    /// Keys this experiment reads (besides `experiment`, `out` and `dat`).
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Experiment::SolveA => &["theorem", "blocks", "locality"],
            Experiment::Bounds => &["hamiltonian", "n_qubits", "blocks"],
            Experiment::GradnormScan => &[
                "hamiltonian", "n_qubits", "blocks", "topology", "inits", "a", "sigma2", "samples", "seed",
            ],
            Experiment::VqeTrain => &[
                "hamiltonian", "n_qubits", "blocks", "topology", "inits", "a", "sigma2", "rounds", "iters", "seed",
                "lr0", "lr1", "smoothing",
            ],
            Experiment::QnnScan => &["p", "inits", "a", "rounds", "iters", "seed", "lr", "smoothing"],
            Experiment::QnnDist => &["p", "inits", "a", "center", "rounds", "iters", "seed", "lr", "smoothing", "bins"],
            Experiment::VerifyLemmas => &["trials", "seed"],
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::config("experiment", format!("unknown experiment `{s}`")))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every key accepted anywhere, for the "unknown key" check.
const KNOWN_KEYS: &[&str] = &[
    "experiment", "out", "dat", "theorem", "blocks", "locality", "hamiltonian", "n_qubits", "topology", "inits",
    "a", "sigma2", "center", "samples", "rounds", "iters", "trials", "seed", "lr", "lr0", "lr1", "smoothing", "p",
    "bins",
];

/// Raw assignments in key order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig(pub BTreeMap<String, String>);

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "empty key".into(),
                });
            }
            if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::config(k, format!("assigned twice (line {})", i + 1)));
            }
        }
        Ok(RawConfig(map))
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

/// Where the Hamiltonian comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSource {
    Zz,
    Heisenberg,
    File { path: PathBuf, hamiltonian: Hamiltonian },
}

impl HamiltonianSource {
    pub fn build(&self, n_qubits: usize) -> Result<Hamiltonian> {
        match self {
            HamiltonianSource::Zz => zz_chain(n_qubits),
            HamiltonianSource::Heisenberg => heisenberg_chain(n_qubits),
            HamiltonianSource::File { hamiltonian, .. } => {
                if hamiltonian.n_qubits() != n_qubits {
                    return Err(Error::config(
                        "n_qubits",
                        format!("Hamiltonian file acts on {} qubits, not {n_qubits}", hamiltonian.n_qubits()),
                    ));
                }
                Ok(hamiltonian.clone())
            }
        }
    }

    /// True for the unit ZZ chain, whose depth rule for a is the closed form.
    pub fn is_zz(&self) -> bool {
        matches!(self, HamiltonianSource::Zz)
    }

    fn canonical(&self) -> String {
        match self {
            HamiltonianSource::Zz => "zz".into(),
            HamiltonianSource::Heisenberg => "heisenberg".into(),
            // The content, not the path, decides the results.
            HamiltonianSource::File { hamiltonian, .. } => {
                format!("file-sha256:{}", hex(&Sha256::digest(hamiltonian.to_text().as_bytes())))
            }
        }
    }
}

/// Circuit depth rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blocks {
    Fixed(usize),
    /// L = k·N.
    PerQubit(usize),
}

impl Blocks {
    pub fn resolve(self, n_qubits: usize) -> usize {
        match self {
            Blocks::Fixed(l) => l,
            Blocks::PerQubit(k) => k * n_qubits,
        }
    }
}

impl fmt::Display for Blocks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Blocks::Fixed(l) => write!(f, "{l}"),
            Blocks::PerQubit(k) => write!(f, "{k}N"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Uniform,
    Gaussian,
    Reduced,
    Translated,
}

impl InitKind {
    pub fn name(self) -> &'static str {
        match self {
            InitKind::Uniform => "uniform",
            InitKind::Gaussian => "gaussian",
            InitKind::Reduced => "reduced",
            InitKind::Translated => "translated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremChoice {
    One,
    Two,
    ThreeEdge,
}

impl TheoremChoice {
    pub fn name(self) -> &'static str {
        match self {
            TheoremChoice::One => "1",
            TheoremChoice::Two => "2",
            TheoremChoice::ThreeEdge => "3edge",
        }
    }
}

/// Fully validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub experiment: Experiment,
    pub hamiltonian: HamiltonianSource,
    pub n_qubits: Vec<usize>,
    pub blocks: Blocks,
    pub topology: Topology,
    pub inits: Vec<InitKind>,
    /// Explicit domain parameter; `None` means "derive from depth".
    pub a: Option<f64>,
    pub sigma2: Option<f64>,
    pub center: f64,
    pub samples: usize,
    pub rounds: usize,
    pub iters: usize,
    pub trials: usize,
    pub seed: u64,
    pub theorem: TheoremChoice,
    pub locality: usize,
    pub p: Vec<usize>,
    pub bins: usize,
    pub rmsprop: RmspropConfig,
    pub out: Option<PathBuf>,
    pub dat: Option<PathBuf>,
}

fn parse_with<T>(raw: &RawConfig, key: &str, default: T, f: impl Fn(&str) -> Option<T>) -> Result<T> {
    match raw.get(key) {
        None => Ok(default),
        Some(v) => f(v).ok_or_else(|| Error::config(key, format!("cannot parse `{v}`"))),
    }
}

fn positive_int(raw: &RawConfig, key: &str, default: usize) -> Result<usize> {
    let v = parse_with(raw, key, default, |s| s.parse().ok())?;
    if v == 0 {
        return Err(Error::config(key, "must be at least 1"));
    }
    Ok(v)
}

fn int_list(raw: &RawConfig, key: &str, default: &[usize]) -> Result<Vec<usize>> {
    let list = parse_with(raw, key, default.to_vec(), |s| {
        s.split(',').map(|x| x.trim().parse().ok()).collect::<Option<Vec<usize>>>()
    })?;
    if list.is_empty() || list.contains(&0) {
        return Err(Error::config(key, "needs a non-empty list of positive integers"));
    }
    Ok(list)
}

fn real(raw: &RawConfig, key: &str) -> Result<Option<f64>> {
    match raw.get(key) {
        None => Ok(None),
        Some(v) => match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Some(x)),
            _ => Err(Error::config(key, format!("`{v}` is not a finite number"))),
        },
    }
}

impl Settings {
    /// Validates `raw` for `experiment`. A Hamiltonian file named in `raw` is read
    /// here so that parse errors surface before the run.
    pub fn resolve(experiment: Experiment, raw: &RawConfig) -> Result<Self> {
        if let Some(e) = raw.get("experiment") {
            if e.parse::<Experiment>()? != experiment {
                return Err(Error::config(
                    "experiment",
                    format!("config is for `{e}` but `{experiment}` was requested"),
                ));
            }
        }
        let allowed = experiment.keys();
        for key in raw.0.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::config(key, "unknown key"));
            }
            if !matches!(key.as_str(), "experiment" | "out" | "dat") && !allowed.contains(&key.as_str()) {
                return Err(Error::config(key, format!("not used by {experiment}")));
            }
        }
        use Experiment::*;

        let hamiltonian = match raw.get("hamiltonian").unwrap_or("zz") {
            "zz" => HamiltonianSource::Zz,
            "heisenberg" => HamiltonianSource::Heisenberg,
            other => {
                let path = other
                    .strip_prefix("file:")
                    .ok_or_else(|| Error::config("hamiltonian", format!("expected zz, heisenberg or file:PATH, got `{other}`")))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::config("hamiltonian", format!("cannot read `{path}`: {e}")))?;
                let hamiltonian = parse_hamiltonian(&text).map_err(|e| Error::config("hamiltonian", e.to_string()))?;
                HamiltonianSource::File {
                    path: PathBuf::from(path),
                    hamiltonian,
                }
            }
        };

        let default_n: &[usize] = match experiment {
            GradnormScan => &[2, 4, 6, 8],
            _ => &[8],
        };
        let n_qubits = match (&hamiltonian, raw.get("n_qubits")) {
            (HamiltonianSource::File { hamiltonian, .. }, None) => vec![hamiltonian.n_qubits()],
            _ => int_list(raw, "n_qubits", default_n)?,
        };
        if let HamiltonianSource::File { hamiltonian: h, .. } = &hamiltonian {
            if n_qubits.iter().any(|&n| n != h.n_qubits()) {
                return Err(Error::config(
                    "n_qubits",
                    format!("Hamiltonian file acts on {} qubits", h.n_qubits()),
                ));
            }
        }
        if !matches!(hamiltonian, HamiltonianSource::File { .. }) && n_qubits.contains(&1) {
            return Err(Error::config("n_qubits", "chain Hamiltonians need at least 2 qubits"));
        }

        let default_blocks = match experiment {
            GradnormScan => Blocks::PerQubit(5),
            _ => Blocks::Fixed(8),
        };
        let blocks = parse_with(raw, "blocks", default_blocks, |s| {
            if let Some(k) = s.strip_suffix('N') {
                k.parse().ok().filter(|&k| k > 0).map(Blocks::PerQubit)
            } else {
                s.parse().ok().filter(|&l| l > 0).map(Blocks::Fixed)
            }
        })?;
        if experiment == SolveA && matches!(blocks, Blocks::PerQubit(_)) {
            return Err(Error::config("blocks", "solve-a needs a fixed depth"));
        }

        let topology = parse_with(raw, "topology", Topology::ChainClosed, |s| match s {
            "chain_closed" => Some(Topology::ChainClosed),
            "full" => Some(Topology::Full),
            _ => None,
        })?;

        let default_inits: &[InitKind] = match experiment {
            QnnScan => &[InitKind::Uniform, InitKind::Reduced],
            QnnDist => &[InitKind::Uniform, InitKind::Translated],
            _ => &[InitKind::Uniform, InitKind::Gaussian, InitKind::Reduced],
        };
        let inits = parse_with(raw, "inits", default_inits.to_vec(), |s| {
            s.split(',')
                .map(|x| match x.trim() {
                    "uniform" => Some(InitKind::Uniform),
                    "gaussian" => Some(InitKind::Gaussian),
                    "reduced" => Some(InitKind::Reduced),
                    "translated" => Some(InitKind::Translated),
                    _ => None,
                })
                .collect()
        })?;
        if inits.is_empty() {
            return Err(Error::config("inits", "needs at least one initialization"));
        }
        let mut seen = Vec::new();
        for k in &inits {
            if seen.contains(k) {
                return Err(Error::config("inits", format!("`{}` listed twice", k.name())));
            }
            seen.push(*k);
        }
        if matches!(experiment, QnnScan | QnnDist) && inits.contains(&InitKind::Gaussian) {
            return Err(Error::config("inits", "the QNN experiments use uniform, reduced or translated"));
        }
        if matches!(experiment, GradnormScan | VqeTrain) && inits.contains(&InitKind::Translated) {
            return Err(Error::config("inits", "translated initialization applies to the QNN experiments"));
        }

        let mut a = real(raw, "a")?;
        if matches!(experiment, QnnScan | QnnDist) && a.is_none() {
            a = Some(0.1);
        }
        if let Some(v) = a {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::config("a", format!("{v} must lie in (0, 1)")));
            }
        }
        let sigma2 = real(raw, "sigma2")?;
        if let Some(v) = sigma2 {
            if v <= 0.0 {
                return Err(Error::config("sigma2", "must be positive"));
            }
        }
        let center = real(raw, "center")?.unwrap_or(FRAC_PI_4);

        let samples = positive_int(raw, "samples", 500)?;
        if samples < 2 {
            return Err(Error::config("samples", "needs at least 2 samples for a standard error"));
        }
        let default_rounds = match experiment {
            VqeTrain => 10,
            _ => 500,
        };
        let rounds = positive_int(raw, "rounds", default_rounds)?;
        let iters = parse_with(raw, "iters", 200, |s| s.parse().ok())?;
        let trials = positive_int(raw, "trials", 100)?;
        let seed = parse_with(raw, "seed", 0u64, |s| s.parse().ok())?;

        let theorem = parse_with(raw, "theorem", TheoremChoice::One, |s| match s {
            "1" => Some(TheoremChoice::One),
            "2" => Some(TheoremChoice::Two),
            "3edge" => Some(TheoremChoice::ThreeEdge),
            _ => None,
        })?;
        let locality = positive_int(raw, "locality", 2)?;

        let default_p: &[usize] = match experiment {
            QnnDist => &[16],
            _ => &[6, 8, 10, 12, 14],
        };
        let p = int_list(raw, "p", default_p)?;
        if experiment == QnnDist && p.len() != 1 {
            return Err(Error::config("p", "qnn-dist takes a single p"));
        }
        let bins = positive_int(raw, "bins", 24)?;

        let base = if matches!(experiment, QnnScan | QnnDist) {
            RmspropConfig::qnn()
        } else {
            RmspropConfig::vqe()
        };
        let mut rmsprop = base;
        if let Some(lr) = real(raw, "lr")? {
            rmsprop.lr0 = lr;
            rmsprop.lr1 = lr;
        }
        if let Some(v) = real(raw, "lr0")? {
            rmsprop.lr0 = v;
        }
        if let Some(v) = real(raw, "lr1")? {
            rmsprop.lr1 = v;
        }
        if let Some(v) = real(raw, "smoothing")? {
            rmsprop.smoothing = v;
        }
        if let Err(e) = rmsprop.validate() {
            let key = if raw.get("smoothing").is_some() && !(rmsprop.smoothing > 0.0 && rmsprop.smoothing < 1.0) {
                "smoothing"
            } else if raw.get("lr").is_some() {
                "lr"
            } else {
                "lr0"
            };
            return Err(Error::config(key, e.to_string()));
        }

        let path = |key: &str| raw.get(key).map(PathBuf::from);
        Ok(Settings {
            experiment,
            hamiltonian,
            n_qubits,
            blocks,
            topology,
            inits,
            a,
            sigma2,
            center,
            samples,
            rounds,
            iters,
            trials,
            seed,
            theorem,
            locality,
            p,
            bins,
            rmsprop,
            out: path("out"),
            dat: path("dat"),
        })
    }

    fn value_of(&self, key: &str) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_else(|| "auto".into());
        match key {
            "theorem" => self.theorem.name().into(),
            "blocks" => self.blocks.to_string(),
            "locality" => self.locality.to_string(),
            "hamiltonian" => self.hamiltonian.canonical(),
            "n_qubits" => join(&self.n_qubits),
            "topology" => self.topology.to_string(),
            "inits" => self.inits.iter().map(|k| k.name()).collect::<Vec<_>>().join(","),
            "a" => opt(self.a),
            "sigma2" => opt(self.sigma2),
            "center" => format!("{:e}", self.center),
            "samples" => self.samples.to_string(),
            "rounds" => self.rounds.to_string(),
            "iters" => self.iters.to_string(),
            "trials" => self.trials.to_string(),
            "seed" => self.seed.to_string(),
            "lr" | "lr0" => format!("{:e}", self.rmsprop.lr0),
            "lr1" => format!("{:e}", self.rmsprop.lr1),
            "smoothing" => format!("{:e}", self.rmsprop.smoothing),
            "p" => join(&self.p),
            "bins" => self.bins.to_string(),
            other => unreachable!("no canonical form for `{other}`"),
        }
    }

    /// Sorted `key=value` lines of every setting that affects the results
    /// (output paths excluded).
    pub fn canonical_text(&self) -> String {
        let mut keys: Vec<&str> = self.experiment.keys().to_vec();
        keys.sort_unstable();
        let mut text = format!("experiment={}\n", self.experiment);
        for k in keys {
            text.push_str(&format!("{k}={}\n", self.value_of(k)));
        }
        text
    }

    /// SHA-256 of [`Settings::canonical_text`], hex encoded.
    pub fn config_hash(&self) -> String {
        hex(&Sha256::digest(self.canonical_text().as_bytes()))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
