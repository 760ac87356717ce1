//! Moments of the reduced uniform distribution, the closed-form gradient-norm
//! lower bounds built from them, and quadrature oracles for the single-angle
//! averaging identities the bounds rest on.
//!
//! With θ ~ 𝒰[−aπ, aπ]:
//!
//! - α = E cos²θ = (2 + sin(2aπ)/(aπ))/4
//! - β = E sin²θ = (2 − sin(2aπ)/(aπ))/4
//! - γ = E cos θ = sin(aπ)/(aπ)
//!
//! Bounds contain powers such as α^(2SL−1) that underflow for deep circuits, so
//! every bound is evaluated as a natural logarithm first.

use std::f64::consts::{E, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::init::SeededRng;
use crate::pauli::{pauli_matrix, Hamiltonian, Pauli};
use crate::quadrature::{integrate, integrate_complex};

/// α, β, γ for one domain width a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

pub fn moments(a: f64) -> Result<MomentTriple> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::invalid(format!("a = {a} must lie in (0, 1]")));
    }
    let x = a * PI;
    let s = (2.0 * x).sin() / x;
    let alpha = (2.0 + s) / 4.0;
    // 1 − α is exact for α ∈ [0.5, 1], which keeps α + β = 1 on the whole
    // practical range a ≤ 1/2.
    let beta = 1.0 - alpha;
    Ok(MomentTriple {
        alpha,
        beta,
        gamma: x.sin() / x,
    })
}

fn ln_pow(x: f64, k: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        k * x.abs().ln()
    }
}

fn ln_count(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// ln of 4(2N − 3)·L·γ^(8L−2)·β.
pub fn ln_bound_theorem1(n_qubits: usize, n_blocks: usize, a: f64) -> Result<f64> {
    if n_qubits < 2 || n_blocks == 0 {
        return Err(Error::invalid("need N ≥ 2 and L ≥ 1"));
    }
    let m = moments(a)?;
    let (n, l) = (n_qubits as f64, n_blocks as f64);
    Ok(ln_count(4.0 * (2.0 * n - 3.0) * l) + ln_pow(m.gamma, 8.0 * l - 2.0) + ln_pow(m.beta, 1.0))
}

/// Lower bound on E‖∇C‖² for the ZZ chain.
pub fn bound_theorem1(n_qubits: usize, n_blocks: usize, a: f64) -> Result<f64> {
    Ok(ln_bound_theorem1(n_qubits, n_blocks, a)?.exp())
}

/// e⁻¹(2N − 3), the floor reached when a is chosen by the closed form.
pub fn floor_theorem1(n_qubits: usize) -> f64 {
    (2.0 * n_qubits as f64 - 3.0) / E
}

/// g(N, L, x) = 4(2N − 3)L(x/3 − x²/15)(1 − x/6)^(8L−2) with x = (aπ)².
pub fn g_theorem1(n_qubits: usize, n_blocks: usize, x: f64) -> f64 {
    let (n, l) = (n_qubits as f64, n_blocks as f64);
    4.0 * (2.0 * n - 3.0) * l * (x / 3.0 - x * x / 15.0) * (1.0 - x / 6.0).powf(8.0 * l - 2.0)
}

/// ln of 2|𝒩|(L − 1)·α^(2SL−1)·β^(S+1).
pub fn ln_bound_theorem2(n_terms: usize, locality: usize, n_blocks: usize, a: f64) -> Result<f64> {
    if locality == 0 || n_blocks == 0 {
        return Err(Error::invalid("need S ≥ 1 and L ≥ 1"));
    }
    let ln4 = ln_bound_theorem4(locality, n_blocks, a)?;
    Ok(ln_count(2.0 * n_terms as f64 * (n_blocks as f64 - 1.0)) + ln4)
}

/// Lower bound on E‖∇C‖² for an S-local Pauli sum with |𝒩| terms. Zero at L = 1.
pub fn bound_theorem2(n_terms: usize, locality: usize, n_blocks: usize, a: f64) -> Result<f64> {
    Ok(ln_bound_theorem2(n_terms, locality, n_blocks, a)?.exp())
}

/// 2|𝒩|((S + 1)/(eS))^(S+1)·(L − 1)/(2L + 1)^(S+1).
pub fn bound_theorem2_optimized(n_terms: usize, locality: usize, n_blocks: usize) -> Result<f64> {
    let ln4 = ln_bound_theorem4_optimized(locality, n_blocks)?;
    Ok((ln_count(2.0 * n_terms as f64 * (n_blocks as f64 - 1.0)) + ln4).exp())
}

/// [(2SL − 1)/(S(2L + 1))]^(2SL−1), the sequence that settles the optimized bound.
pub fn theorem2_limit_sequence(locality: usize, n_blocks: usize) -> f64 {
    let (s, l) = (locality as f64, n_blocks as f64);
    ((2.0 * s * l - 1.0) / (s * (2.0 * l + 1.0))).powf(2.0 * s * l - 1.0)
}

/// Position of the differentiated qubit along the ZZ chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitPosition {
    /// First or last qubit.
    Edge,
    /// Any interior qubit.
    Bulk,
}

/// Variance lower bound f_n(L, a) for one partial derivative of the ZZ-chain cost.
pub fn f_theorem3(position: QubitPosition, n_blocks: usize, a: f64) -> Result<f64> {
    if n_blocks == 0 {
        return Err(Error::invalid("L must be at least 1"));
    }
    let m = moments(a)?;
    let l = n_blocks as f64;
    let edge = (ln_pow(m.alpha, 4.0 * l - 1.0) + m.beta.ln()).exp();
    Ok(match position {
        QubitPosition::Edge => edge,
        QubitPosition::Bulk => {
            let cross = (ln_pow(m.gamma, 4.0 * l) + ln_pow(m.alpha, 2.0 * l - 1.0) + m.beta.ln()).exp();
            2.0 * edge + 2.0 * cross
        }
    })
}

/// 1/(4eL) at the edges, 1/(eL) in the bulk.
pub fn variance_floor_theorem3(position: QubitPosition, n_blocks: usize) -> f64 {
    let l = n_blocks as f64;
    match position {
        QubitPosition::Edge => 1.0 / (4.0 * E * l),
        QubitPosition::Bulk => 1.0 / (E * l),
    }
}

/// ln of α^(2SL−1)·β^(S+1).
pub fn ln_bound_theorem4(locality: usize, n_blocks: usize, a: f64) -> Result<f64> {
    if locality == 0 || n_blocks == 0 {
        return Err(Error::invalid("need S ≥ 1 and L ≥ 1"));
    }
    let m = moments(a)?;
    let (s, l) = (locality as f64, n_blocks as f64);
    Ok(ln_pow(m.alpha, 2.0 * s * l - 1.0) + ln_pow(m.beta, s + 1.0))
}

/// Lower bound on E(∂C/∂θ_{q,n})² for q ≤ 2L − 2.
pub fn bound_theorem4(locality: usize, n_blocks: usize, a: f64) -> Result<f64> {
    Ok(ln_bound_theorem4(locality, n_blocks, a)?.exp())
}

fn ln_bound_theorem4_optimized(locality: usize, n_blocks: usize) -> Result<f64> {
    if locality == 0 || n_blocks == 0 {
        return Err(Error::invalid("need S ≥ 1 and L ≥ 1"));
    }
    let (s, l) = (locality as f64, n_blocks as f64);
    Ok((s + 1.0) * ((s + 1.0) / (E * s)).ln() - (s + 1.0) * (2.0 * l + 1.0).ln())
}

/// ((S + 1)/(eS))^(S+1)/(2L + 1)^(S+1).
pub fn bound_theorem4_optimized(locality: usize, n_blocks: usize) -> Result<f64> {
    Ok(ln_bound_theorem4_optimized(locality, n_blocks)?.exp())
}

/// One evaluated bound with its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub theorem: &'static str,
    pub n_qubits: Option<usize>,
    pub n_blocks: usize,
    pub locality: Option<usize>,
    pub n_terms: Option<usize>,
    pub a: Option<f64>,
    pub ln_bound: f64,
    pub bound: f64,
    pub optimized: Option<f64>,
}

/// Reports for every bound that applies to `h` at depth `n_blocks`.
///
/// The ZZ-chain rows (theorems 1 and 3) are included only when `h` is exactly
/// the unit ZZ chain. The general rows use a from the closed-form solver when
/// it has a solution.
pub fn reports_for(h: &Hamiltonian, n_blocks: usize) -> Result<Vec<BoundReport>> {
    if !h.is_unit_weighted() {
        return Err(Error::invalid(
            "gradient bounds hold for unit-coefficient Pauli sums only",
        ));
    }
    let n = h.n_qubits();
    let s = h.locality();
    let n_terms = h.n_terms();
    let mut out = Vec::new();
    if n >= 2 && *h == crate::pauli::zz_chain(n)? {
        let a = crate::init::solve_a_theorem1(n_blocks)?;
        let ln = ln_bound_theorem1(n, n_blocks, a)?;
        out.push(BoundReport {
            theorem: "1",
            n_qubits: Some(n),
            n_blocks,
            locality: Some(2),
            n_terms: Some(n_terms),
            a: Some(a),
            ln_bound: ln,
            bound: ln.exp(),
            optimized: Some(floor_theorem1(n)),
        });
        for (name, pos) in [("3edge", QubitPosition::Edge), ("3bulk", QubitPosition::Bulk)] {
            let f = f_theorem3(pos, n_blocks, a)?;
            out.push(BoundReport {
                theorem: name,
                n_qubits: Some(n),
                n_blocks,
                locality: Some(2),
                n_terms: Some(n_terms),
                a: Some(a),
                ln_bound: f.ln(),
                bound: f,
                optimized: Some(variance_floor_theorem3(pos, n_blocks)),
            });
        }
    }
    if let Ok(a) = crate::init::solve_a_theorem2(s, n_blocks) {
        let ln2 = ln_bound_theorem2(n_terms, s, n_blocks, a)?;
        out.push(BoundReport {
            theorem: "2",
            n_qubits: Some(n),
            n_blocks,
            locality: Some(s),
            n_terms: Some(n_terms),
            a: Some(a),
            ln_bound: ln2,
            bound: ln2.exp(),
            optimized: Some(bound_theorem2_optimized(n_terms, s, n_blocks)?),
        });
        let ln4 = ln_bound_theorem4(s, n_blocks, a)?;
        out.push(BoundReport {
            theorem: "4",
            n_qubits: Some(n),
            n_blocks,
            locality: Some(s),
            n_terms: Some(n_terms),
            a: Some(a),
            ln_bound: ln4,
            bound: ln4.exp(),
            optimized: Some(bound_theorem4_optimized(s, n_blocks)?),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Quadrature oracles for single-angle averages.

const QUAD_TOL: f64 = 1e-13;

/// Averages over θ ~ 𝒰[−aπ, aπ] computed by quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRecord {
    pub e_cos: f64,
    pub e_sin: f64,
    pub e_cos2: f64,
    pub e_sin2: f64,
    pub e_sincos: f64,
}

fn average<F: Fn(f64) -> f64>(a: f64, f: F) -> f64 {
    let h = a * PI;
    integrate(f, -h, h, QUAD_TOL) / (2.0 * h)
}

fn average_complex<F: Fn(f64) -> Complex64>(a: f64, f: F) -> Complex64 {
    let h = a * PI;
    integrate_complex(f, -h, h, QUAD_TOL) / (2.0 * h)
}

pub fn lemma_moment_oracle(a: f64) -> Result<MomentRecord> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::invalid(format!("a = {a} must lie in (0, 1]")));
    }
    Ok(MomentRecord {
        e_cos: average(a, f64::cos),
        e_sin: average(a, f64::sin),
        e_cos2: average(a, |t| t.cos().powi(2)),
        e_sin2: average(a, |t| t.sin().powi(2)),
        e_sincos: average(a, |t| t.sin() * t.cos()),
    })
}

/// Largest deviation between the quadrature moments and (γ, 0, α, β, 0).
pub fn moment_residual(a: f64) -> Result<f64> {
    let q = lemma_moment_oracle(a)?;
    let m = moments(a)?;
    Ok([
        q.e_cos - m.gamma,
        q.e_sin,
        q.e_cos2 - m.alpha,
        q.e_sin2 - m.beta,
        q.e_sincos,
    ]
    .iter()
    .fold(0.0, |acc: f64, d| acc.max(d.abs())))
}

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense matrix of a Pauli product (qubit 0 is the leftmost factor).
pub fn pauli_product_matrix(letters: &[Pauli]) -> CMatrix {
    letters.iter().fold(CMatrix::from_element(1, 1, c(1.0)), |acc, &p| {
        let m = pauli_matrix(p);
        let m = CMatrix::from_fn(2, 2, |r, col| m[r][col]);
        acc.kronecker(&m)
    })
}

fn is_zero(m: &CMatrix, tol: f64) -> bool {
    m.iter().all(|v| v.norm() <= tol)
}

/// Operators for one random check of the averaging identities.
///
/// `generator` is a Hermitian unitary G, the rotation is V = exp(−iθG/2),
/// `anti` holds two Hermitian operators anticommuting with G and `comm` two
/// Hermitian operators commuting with it. `a_op` is an arbitrary operator.
#[derive(Debug, Clone)]
pub struct LemmaTrial {
    pub generator: CMatrix,
    pub a_op: CMatrix,
    pub anti: [CMatrix; 2],
    pub comm: [CMatrix; 2],
}

impl LemmaTrial {
    /// Checks the (anti)commutation and Hermiticity preconditions.
    pub fn new(generator: CMatrix, a_op: CMatrix, anti: [CMatrix; 2], comm: [CMatrix; 2]) -> Result<Self> {
        let d = generator.nrows();
        let all = [&generator, &a_op, &anti[0], &anti[1], &comm[0], &comm[1]];
        if all.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::InvalidTrial("operator dimensions differ".into()));
        }
        let tol = 1e-12;
        let g = &generator;
        if !is_zero(&(g - g.adjoint()), tol) {
            return Err(Error::InvalidTrial("generator is not Hermitian".into()));
        }
        if !is_zero(&(g * g - CMatrix::identity(d, d)), tol) {
            return Err(Error::InvalidTrial("generator is not unitary".into()));
        }
        for o in &anti {
            if !is_zero(&(o - o.adjoint()), tol) {
                return Err(Error::InvalidTrial("observable is not Hermitian".into()));
            }
            if !is_zero(&(o * g + g * o), tol * (1.0 + o.norm())) {
                return Err(Error::InvalidTrial("observable does not anticommute with G".into()));
            }
        }
        for o in &comm {
            if !is_zero(&(o - o.adjoint()), tol) {
                return Err(Error::InvalidTrial("observable is not Hermitian".into()));
            }
            if !is_zero(&(o * g - g * o), tol * (1.0 + o.norm())) {
                return Err(Error::InvalidTrial("observable does not commute with G".into()));
            }
        }
        Ok(LemmaTrial {
            generator,
            a_op,
            anti,
            comm,
        })
    }

    /// Random two-qubit trial: G is X, Y or Z on qubit 0; the observables are
    /// random real combinations of the Pauli products that (anti)commute with G;
    /// A has independent standard complex Gaussian entries.
    pub fn random(rng: &mut SeededRng) -> Self {
        let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let g_letter = letters[1 + (rng.next_u64() % 3) as usize];
        let generator = pauli_product_matrix(&[g_letter, Pauli::I]);
        let (mut anti_basis, mut comm_basis) = (Vec::new(), Vec::new());
        for &p0 in &letters {
            for &p1 in &letters {
                let m = pauli_product_matrix(&[p0, p1]);
                // Single-qubit Paulis anticommute iff both differ from I and each other.
                if p0 != Pauli::I && p0 != g_letter {
                    anti_basis.push(m);
                } else {
                    comm_basis.push(m);
                }
            }
        }
        let mut combo = |basis: &[CMatrix]| {
            basis
                .iter()
                .fold(CMatrix::zeros(4, 4), |acc, m| acc + m * c(rng.standard_normal()))
        };
        let anti = [combo(&anti_basis), combo(&anti_basis)];
        let comm = [combo(&comm_basis), combo(&comm_basis)];
        let a_op = CMatrix::from_fn(4, 4, |_, _| {
            Complex64::new(rng.standard_normal(), rng.standard_normal())
        });
        LemmaTrial::new(generator, a_op, anti, comm).expect("construction satisfies the preconditions")
    }

    fn rotated(&self, theta: f64) -> CMatrix {
        let d = self.generator.nrows();
        let (s, co) = (0.5 * theta).sin_cos();
        let v = CMatrix::identity(d, d) * c(co) - &self.generator * Complex64::new(0.0, s);
        &v * &self.a_op * v.adjoint()
    }

    /// Tr[O V A V†] and its θ-derivative Tr[O (−i/2)[G, V A V†]].
    fn trace_and_derivative(&self, o: &CMatrix, theta: f64) -> (Complex64, Complex64) {
        let r = self.rotated(theta);
        let g = &self.generator;
        let comm = g * &r - &r * g;
        let t = (o * &r).trace();
        let dt = (o * comm).trace() * Complex64::new(0.0, -0.5);
        (t, dt)
    }

    fn tr(&self, o: &CMatrix) -> Complex64 {
        (o * &self.a_op).trace()
    }

    /// Tr[iG O A].
    fn tr_igo(&self, o: &CMatrix) -> Complex64 {
        (&self.generator * o * &self.a_op).trace() * Complex64::new(0.0, 1.0)
    }
}

/// Largest residual of the four first-power identities:
/// E Tr[OVAV†] = γTr[OA], E ∂Tr[OVAV†] = γTr[iGOA],
/// E Tr[ÕVAV†] = Tr[ÕA], E ∂Tr[ÕVAV†] = 0.
pub fn lemma1_check(a: f64, trial: &LemmaTrial) -> Result<f64> {
    let m = moments(a)?;
    let (o, ot) = (&trial.anti[0], &trial.comm[0]);
    let e_t = average_complex(a, |t| trial.trace_and_derivative(o, t).0);
    let e_dt = average_complex(a, |t| trial.trace_and_derivative(o, t).1);
    let e_tt = average_complex(a, |t| trial.trace_and_derivative(ot, t).0);
    let e_dtt = average_complex(a, |t| trial.trace_and_derivative(ot, t).1);
    let residuals = [
        e_t - trial.tr(o) * m.gamma,
        e_dt - trial.tr_igo(o) * m.gamma,
        e_tt - trial.tr(ot),
        e_dtt,
    ];
    Ok(residuals.iter().fold(0.0, |acc: f64, r| acc.max(r.norm())))
}

/// Largest residual of the second-power identities (two anticommuting
/// observables, the equal-observable special case) and the mixed products of
/// anticommuting and commuting observables.
pub fn lemma2_check(a: f64, trial: &LemmaTrial) -> Result<f64> {
    let m = moments(a)?;
    let [o1, o2] = &trial.anti;
    let [c1, c2] = &trial.comm;
    let pair = |x: &CMatrix, y: &CMatrix| {
        let e = average_complex(a, |t| {
            let (tx, _) = trial.trace_and_derivative(x, t);
            let (ty, _) = trial.trace_and_derivative(y, t);
            tx * ty
        });
        let ed = average_complex(a, |t| {
            let (_, dx) = trial.trace_and_derivative(x, t);
            let (_, dy) = trial.trace_and_derivative(y, t);
            dx * dy
        });
        (e, ed)
    };
    let mut residuals = Vec::new();
    for (x, y) in [(o1, o2), (o1, o1), (o2, o2)] {
        let (e, ed) = pair(x, y);
        let plain = trial.tr(x) * trial.tr(y);
        let rotated = trial.tr_igo(x) * trial.tr_igo(y);
        residuals.push(e - (plain * m.alpha + rotated * m.beta));
        residuals.push(ed - (plain * m.beta + rotated * m.alpha));
    }
    let (e, ed) = pair(o1, c1);
    residuals.push(e - trial.tr(o1) * trial.tr(c1) * m.gamma);
    residuals.push(ed);
    let (e, ed) = pair(c1, c2);
    residuals.push(e - trial.tr(c1) * trial.tr(c2));
    residuals.push(ed);
    Ok(residuals.iter().fold(0.0, |acc: f64, r| acc.max(r.norm())))
}
