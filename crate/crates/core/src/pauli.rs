//! Pauli strings, Pauli-sum Hamiltonians and their conjugation by CZ gates.
//!
//! A string over N qubits stores one 2-bit code per qubit (0 = I, 1 = X, 2 = Y,
//! 3 = Z), packed 32 codes to a `u64` word. Qubit 0 is the leftmost letter of the
//! text form, so `"ZZII"` is Z on qubits 0 and 1.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

const CODES_PER_WORD: usize = 32;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub fn from_code(code: u8) -> Option<Pauli> {
        match code {
            0 => Some(Pauli::I),
            1 => Some(Pauli::X),
            2 => Some(Pauli::Y),
            3 => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An N-qubit tensor product of Pauli matrices carrying a ±1 sign.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    words: Vec<u64>,
    negative: bool,
}

impl PauliString {
    /// Builds a string from codes in {0, 1, 2, 3}; the sign is +1.
    pub fn new(codes: &[u8]) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::invalid("Pauli string needs at least one qubit"));
        }
        let mut p = PauliString::identity(codes.len());
        for (q, &c) in codes.iter().enumerate() {
            let letter = Pauli::from_code(c)
                .ok_or_else(|| Error::invalid(format!("Pauli code {c} at qubit {q} not in 0..=3")))?;
            p.set(q, letter);
        }
        Ok(p)
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString {
            n_qubits,
            words: vec![0; n_qubits.div_ceil(CODES_PER_WORD)],
            negative: false,
        }
    }

    /// Parses a word such as `"XZIY"`.
    pub fn from_word(word: &str) -> Result<Self> {
        let codes = word
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .map(|p| p as u8)
                    .ok_or_else(|| Error::invalid(format!("bad Pauli letter `{c}`")))
            })
            .collect::<Result<Vec<u8>>>()?;
        PauliString::new(&codes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        let w = self.words[qubit / CODES_PER_WORD];
        let shift = 2 * (qubit % CODES_PER_WORD);
        Pauli::from_code(((w >> shift) & 0b11) as u8).expect("2-bit code")
    }

    fn set(&mut self, qubit: usize, p: Pauli) {
        let shift = 2 * (qubit % CODES_PER_WORD);
        let w = &mut self.words[qubit / CODES_PER_WORD];
        *w = (*w & !(0b11 << shift)) | ((p as u64) << shift);
    }

    pub fn codes(&self) -> Vec<u8> {
        (0..self.n_qubits).map(|q| self.get(q) as u8).collect()
    }

    /// +1.0 or -1.0.
    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negative = !p.negative;
        p
    }

    /// Same letters with the sign reset to +1.
    pub fn unsigned(&self) -> Self {
        let mut p = self.clone();
        p.negative = false;
        p
    }

    /// Number of non-identity factors.
    pub fn locality(&self) -> usize {
        self.words
            .iter()
            .map(|&w| {
                // A code is non-identity iff either of its two bits is set.
                let lo = w & 0x5555_5555_5555_5555;
                let hi = (w >> 1) & 0x5555_5555_5555_5555;
                (lo | hi).count_ones() as usize
            })
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True when every factor is I or Z.
    pub fn is_diagonal(&self) -> bool {
        (0..self.n_qubits).all(|q| matches!(self.get(q), Pauli::I | Pauli::Z))
    }

    /// Count of factors equal to `p`.
    pub fn count(&self, p: Pauli) -> usize {
        (0..self.n_qubits).filter(|&q| self.get(q) == p).count()
    }

    /// Bit masks over basis-state indices (qubit q is bit q): qubits that get
    /// flipped (X or Y) and qubits that contribute a parity phase (Y or Z).
    pub fn masks(&self) -> (usize, usize) {
        let mut flip = 0usize;
        let mut phase = 0usize;
        for q in 0..self.n_qubits {
            match self.get(q) {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    phase |= 1 << q;
                }
                Pauli::Z => phase |= 1 << q,
            }
        }
        (flip, phase)
    }

    /// ⟨0…0|σ|0…0⟩: the sign when every factor is I or Z, otherwise 0.
    pub fn expectation_on_zero(&self) -> f64 {
        if self.is_diagonal() {
            self.sign()
        } else {
            0.0
        }
    }

    /// CZ† σ CZ for a CZ acting on `pair`.
    pub fn cz_conjugate(&self, pair: (usize, usize)) -> Result<Self> {
        self.cz_conjugate_with(pair, &CZ_TABLE)
    }

    /// Conjugation using an explicit rule table (used to test fault detection).
    pub fn cz_conjugate_with(&self, (a, b): (usize, usize), table: &CzTable) -> Result<Self> {
        if a == b || a >= self.n_qubits || b >= self.n_qubits {
            return Err(Error::invalid(format!(
                "CZ pair ({a}, {b}) invalid for {} qubits",
                self.n_qubits
            )));
        }
        let (pa, pb, flip) = table.apply(self.get(a), self.get(b));
        let mut out = self.clone();
        out.set(a, pa);
        out.set(b, pb);
        out.negative ^= flip;
        Ok(out)
    }

    /// Conjugation by every CZ in `pairs`, applied left to right.
    pub fn cz_layer_conjugate(&self, pairs: &[(usize, usize)]) -> Result<Self> {
        pairs
            .iter()
            .try_fold(self.clone(), |p, &pair| p.cz_conjugate(pair))
    }

    /// Letters without sign, e.g. `"ZZII"`.
    pub fn word(&self) -> String {
        (0..self.n_qubits).map(|q| self.get(q).as_char()).collect()
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        write!(f, "{}", self.word())
    }
}

/// Two-qubit CZ conjugation rules, indexed by (code_a, code_b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CzTable {
    pub entries: [[(Pauli, Pauli, bool); 4]; 4],
}

impl CzTable {
    pub fn apply(&self, a: Pauli, b: Pauli) -> (Pauli, Pauli, bool) {
        self.entries[a as usize][b as usize]
    }
}

use Pauli::{I, X, Y, Z};

/// CZ (σa ⊗ σb) CZ for all 16 letter pairs. The boolean marks a sign flip.
pub const CZ_TABLE: CzTable = CzTable {
    entries: [
        [(I, I, false), (Z, X, false), (Z, Y, false), (I, Z, false)],
        [(X, Z, false), (Y, Y, false), (Y, X, true), (X, I, false)],
        [(Y, Z, false), (X, Y, true), (X, X, false), (Y, I, false)],
        [(Z, I, false), (I, X, false), (I, Y, false), (Z, Z, false)],
    ],
};

/// Dense 2×2 matrix of a Pauli letter, row-major.
pub fn pauli_matrix(p: Pauli) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let r = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        Pauli::I => [[r, o], [o, r]],
        Pauli::X => [[o, r], [r, o]],
        Pauli::Y => [[o, -i], [i, o]],
        Pauli::Z => [[r, o], [o, -r]],
    }
}

type Mat4 = [[Complex64; 4]; 4];

fn kron2(a: Pauli, b: Pauli) -> Mat4 {
    let (ma, mb) = (pauli_matrix(a), pauli_matrix(b));
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = ma[r / 2][c / 2] * mb[r % 2][c % 2];
        }
    }
    out
}

/// Rebuilds the CZ conjugation table from explicit 4×4 matrices
/// (CZ = diag(1, 1, 1, −1)). Also returns the largest entrywise deviation
/// between CZ·(σa⊗σb)·CZ and the matched signed product.
pub fn cz_table_from_matrices() -> (CzTable, f64) {
    let cz = [1.0, 1.0, 1.0, -1.0];
    let letters = [I, X, Y, Z];
    let mut entries = [[(I, I, false); 4]; 4];
    let mut worst = 0.0f64;
    for &a in &letters {
        for &b in &letters {
            let m = kron2(a, b);
            let mut conj = m;
            for (r, row) in conj.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v *= cz[r] * cz[c];
                }
            }
            let mut best: Option<(f64, (Pauli, Pauli, bool))> = None;
            for &c in &letters {
                for &d in &letters {
                    let cand = kron2(c, d);
                    for (neg, s) in [(false, 1.0), (true, -1.0)] {
                        let dev = (0..16)
                            .map(|k| (conj[k / 4][k % 4] - cand[k / 4][k % 4] * s).norm())
                            .fold(0.0, f64::max);
                        if best.is_none_or(|(bd, _)| dev < bd) {
                            best = Some((dev, (c, d, neg)));
                        }
                    }
                }
            }
            let (dev, entry) = best.expect("16 candidates");
            worst = worst.max(dev);
            entries[a as usize][b as usize] = entry;
        }
    }
    (CzTable { entries }, worst)
}

/// Largest entrywise deviation between CZ·(σa⊗σb)·CZ and the signed product
/// that `table` predicts, over all 16 letter pairs.
pub fn cz_table_residual(table: &CzTable) -> f64 {
    let cz = [1.0, 1.0, 1.0, -1.0];
    let letters = [I, X, Y, Z];
    let mut worst = 0.0f64;
    for &a in &letters {
        for &b in &letters {
            let m = kron2(a, b);
            let (c, d, neg) = table.apply(a, b);
            let predicted = kron2(c, d);
            let s = if neg { -1.0 } else { 1.0 };
            for k in 0..16 {
                let (r, col) = (k / 4, k % 4);
                let lhs = m[r][col] * (cz[r] * cz[col]);
                worst = worst.max((lhs - predicted[r][col] * s).norm());
            }
        }
    }
    worst
}

/// A weighted sum of distinct, non-identity Pauli strings over a fixed qubit count.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Hamiltonian {
    /// Canonicalizes `terms`: signs fold into coefficients, duplicate strings merge
    /// by summing (first-appearance order kept), and terms that cancel to zero are
    /// dropped.
    pub fn new(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::invalid("Hamiltonian needs at least one qubit"));
        }
        let mut index: HashMap<PauliString, usize> = HashMap::new();
        let mut merged: Vec<(f64, PauliString)> = Vec::new();
        for (coeff, p) in terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::invalid(format!(
                    "term {p} has {} qubits, expected {n_qubits}",
                    p.n_qubits()
                )));
            }
            if p.is_identity() {
                return Err(Error::invalid("all-identity term is not allowed"));
            }
            if !coeff.is_finite() {
                return Err(Error::invalid(format!("non-finite coefficient for {p}")));
            }
            let c = coeff * p.sign();
            let key = p.unsigned();
            match index.get(&key) {
                Some(&i) => merged[i].0 += c,
                None => {
                    index.insert(key.clone(), merged.len());
                    merged.push((c, key));
                }
            }
        }
        merged.retain(|(c, _)| *c != 0.0);
        Ok(Hamiltonian {
            n_qubits,
            terms: merged,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// |𝒩|, the number of distinct terms.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest term locality S.
    pub fn locality(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.locality()).max().unwrap_or(0)
    }

    /// True when every coefficient is exactly 1, the form the gradient bounds assume.
    pub fn is_unit_weighted(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == 1.0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.is_diagonal())
    }

    /// One `coeff WORD` line per term; inverse of [`parse_hamiltonian`].
    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|(c, p)| format!("{c} {}\n", p.word()))
            .collect()
    }
}

fn two_local(n: usize, i: usize, a: Pauli, b: Pauli) -> PauliString {
    let mut p = PauliString::identity(n);
    p.set(i, a);
    p.set(i + 1, b);
    p
}

/// Σ_j Z_j Z_{j+1} over an open chain of `n` qubits.
pub fn zz_chain(n: usize) -> Result<Hamiltonian> {
    if n < 2 {
        return Err(Error::invalid("ZZ chain needs at least 2 qubits"));
    }
    let terms = (0..n - 1).map(|i| (1.0, two_local(n, i, Z, Z))).collect();
    Hamiltonian::new(n, terms)
}

/// Σ_i (X_iX_{i+1} + Y_iY_{i+1} + Z_iZ_{i+1}) over an open chain of `n` qubits.
pub fn heisenberg_chain(n: usize) -> Result<Hamiltonian> {
    if n < 2 {
        return Err(Error::invalid("Heisenberg chain needs at least 2 qubits"));
    }
    let terms = (0..n - 1)
        .flat_map(|i| [X, Y, Z].map(|p| (1.0, two_local(n, i, p, p))))
        .collect();
    Hamiltonian::new(n, terms)
}

/// Parses the line format `coeff WORD`, e.g. `1.0 ZZII`. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_hamiltonian(text: &str) -> Result<Hamiltonian> {
    let mut n_qubits: Option<usize> = None;
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(format!("expected `coeff WORD`, got {} fields", fields.len())));
        }
        let coeff: f64 = fields[0]
            .parse()
            .map_err(|_| err(format!("non-numeric coefficient `{}`", fields[0])))?;
        if !coeff.is_finite() {
            return Err(err(format!("non-finite coefficient `{}`", fields[0])));
        }
        let word = fields[1];
        if let Some(bad) = word.chars().find(|c| Pauli::from_char(*c).is_none()) {
            return Err(err(format!("bad Pauli letter `{bad}` in `{word}`")));
        }
        let len = word.chars().count();
        match n_qubits {
            None => n_qubits = Some(len),
            Some(n) if n != len => {
                return Err(err(format!("word `{word}` has {len} qubits, expected {n}")))
            }
            _ => {}
        }
        let p = PauliString::from_word(word).map_err(|e| err(e.to_string()))?;
        if p.is_identity() {
            return Err(err("all-identity term is not allowed".into()));
        }
        terms.push((coeff, p));
    }
    let n = n_qubits.ok_or(Error::Parse {
        line: 0,
        message: "no terms".into(),
    })?;
    Hamiltonian::new(n, terms)
}
