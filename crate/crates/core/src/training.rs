//! RMSProp, VQE training, the closed-form QNN loss and ground-state energies.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::ansatz::{AnsatzSpec, ParamVector};
use crate::error::{Error, Result};
use crate::gradient::pairwise_sum;
use crate::init::{sample_params, InitSpec, SeededRng};
use crate::pauli::{pauli_matrix, Hamiltonian};
use crate::statevector::cost_and_gradient;

/// Largest qubit count accepted by the dense eigensolvers.
pub const DENSE_QUBIT_CAP: usize = 12;

/// VQE relative cost counted as having reached the ground state.
pub const VQE_CONVERGED_GAP: f64 = 1e-2;

/// Final QNN loss counted as global convergence.
pub const QNN_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmspropConfig {
    /// Learning rate at the first iteration.
    pub lr0: f64,
    /// Learning rate at the last iteration (linear in between).
    pub lr1: f64,
    pub smoothing: f64,
    pub epsilon: f64,
}

impl RmspropConfig {
    /// 0.01 → 0.005 with smoothing 0.999.
    pub fn vqe() -> Self {
        RmspropConfig {
            lr0: 0.01,
            lr1: 0.005,
            smoothing: 0.999,
            epsilon: 1e-8,
        }
    }

    /// Constant 0.01 with smoothing 0.99.
    pub fn qnn() -> Self {
        RmspropConfig {
            lr0: 0.01,
            lr1: 0.01,
            smoothing: 0.99,
            epsilon: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lr0 > 0.0 && self.lr1 > 0.0 && self.lr0.is_finite() && self.lr1.is_finite()) {
            return Err(Error::invalid("learning rates must be positive"));
        }
        if !(self.smoothing > 0.0 && self.smoothing < 1.0) {
            return Err(Error::invalid(format!("smoothing {} must lie in (0, 1)", self.smoothing)));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::invalid("epsilon must be positive"));
        }
        Ok(())
    }
}

/// lr0 + (lr1 − lr0)·iter/(total − 1); lr0 when total = 1.
pub fn lr_schedule_linear(iter: usize, total_iters: usize, lr0: f64, lr1: f64) -> f64 {
    if total_iters <= 1 {
        return lr0;
    }
    lr0 + (lr1 - lr0) * iter as f64 / (total_iters - 1) as f64
}

/// Uncorrected RMSProp: acc ← ρ·acc + (1 − ρ)g², θ ← θ − η·g/(√acc + ε).
#[derive(Debug, Clone, PartialEq)]
pub struct RmspropState {
    pub config: RmspropConfig,
    acc: Vec<f64>,
    steps: usize,
}

impl RmspropState {
    pub fn new(dim: usize, config: RmspropConfig) -> Result<Self> {
        config.validate()?;
        Ok(RmspropState {
            config,
            acc: vec![0.0; dim],
            steps: 0,
        })
    }

    pub fn accumulator(&self) -> &[f64] {
        &self.acc
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) -> Result<()> {
        if params.len() != self.acc.len() || grad.len() != self.acc.len() {
            return Err(Error::invalid(format!(
                "RMSProp state has dimension {}, got params {} and grad {}",
                self.acc.len(),
                params.len(),
                grad.len()
            )));
        }
        let rho = self.config.smoothing;
        for ((p, &g), acc) in params.iter_mut().zip(grad).zip(self.acc.iter_mut()) {
            *acc = rho * *acc + (1.0 - rho) * g * g;
            *p -= lr * g / (acc.sqrt() + self.config.epsilon);
        }
        self.steps += 1;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Ground energies.

/// Least eigenvalue of `h`.
///
/// Diagonal Hamiltonians are minimized over basis states directly; everything
/// else is diagonalized densely (real symmetric when every term has an even
/// number of Y factors).
pub fn ground_energy(h: &Hamiltonian) -> Result<f64> {
    let n = h.n_qubits();
    if h.is_diagonal() {
        if n > crate::statevector::MAX_QUBITS {
            return Err(Error::Resource(format!("{n} qubits exceeds the diagonal cap")));
        }
        return Ok(diagonal(h).into_iter().fold(f64::INFINITY, f64::min));
    }
    if n > DENSE_QUBIT_CAP {
        return Err(Error::Resource(format!(
            "{n} qubits exceeds the dense diagonalization cap of {DENSE_QUBIT_CAP}"
        )));
    }
    let m = dense_matrix(h);
    if m.iter().all(|v| v.im == 0.0) {
        let real = m.map(|v| v.re);
        Ok(real.symmetric_eigenvalues().min())
    } else {
        Ok(m.symmetric_eigenvalues().min())
    }
}

fn diagonal(h: &Hamiltonian) -> Vec<f64> {
    (0..1usize << h.n_qubits())
        .map(|b| {
            h.terms()
                .iter()
                .map(|(c, p)| {
                    let (_, phase) = p.masks();
                    if (b & phase).count_ones() % 2 == 0 {
                        *c
                    } else {
                        -*c
                    }
                })
                .sum()
        })
        .collect()
}

/// Dense matrix with entries taken factor by factor from the 2×2 Pauli matrices.
pub fn dense_matrix(h: &Hamiltonian) -> DMatrix<Complex64> {
    let n = h.n_qubits();
    let dim = 1usize << n;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (c, p) in h.terms() {
        let letters: Vec<[[Complex64; 2]; 2]> = (0..n).map(|q| pauli_matrix(p.get(q))).collect();
        let (flip, _) = p.masks();
        for col in 0..dim {
            let row = col ^ flip;
            let mut v = Complex64::new(*c, 0.0);
            for (q, mat) in letters.iter().enumerate() {
                v *= mat[(row >> q) & 1][(col >> q) & 1];
            }
            m[(row, col)] += v;
        }
    }
    m
}

fn matvec(h: &Hamiltonian, x: &[Complex64], out: &mut [Complex64]) {
    out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    for (c, p) in h.terms() {
        let (flip, phase) = p.masks();
        let i_pow = Complex64::new(0.0, 1.0).powu(p.count(crate::pauli::Pauli::Y) as u32);
        let base = i_pow * *c;
        for (b, &a) in x.iter().enumerate() {
            let s = if (b & phase).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out[b ^ flip] += base * a * s;
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Least eigenvalue by Lanczos with full reorthogonalization, matrix-free, and
/// bisection on the resulting tridiagonal matrix. Independent of [`ground_energy`].
pub fn ground_energy_lanczos(h: &Hamiltonian, max_krylov: usize, seed: u64) -> Result<f64> {
    let n = h.n_qubits();
    if n > crate::statevector::MAX_QUBITS {
        return Err(Error::Resource(format!("{n} qubits exceeds the simulator cap")));
    }
    let dim = 1usize << n;
    let m = max_krylov.min(dim).max(1);
    let mut rng = SeededRng::new(seed, 0);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
        .collect();
    let norm = dot(&v, &v).re.sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..m {
        matvec(h, &basis[j], &mut w);
        alpha.push(dot(&basis[j], &w).re);
        // Two rounds of classical Gram–Schmidt against every previous vector.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nb = dot(&w, &w).re.sqrt();
        if j + 1 == m || nb < 1e-10 {
            break;
        }
        beta.push(nb);
        basis.push(w.iter().map(|x| x / nb).collect());
    }
    Ok(tridiagonal_min_eigenvalue(&alpha, &beta))
}

/// Smallest eigenvalue of the symmetric tridiagonal matrix (diag `a`, off-diag `b`)
/// by Sturm-count bisection.
pub fn tridiagonal_min_eigenvalue(a: &[f64], b: &[f64]) -> f64 {
    let radius = (0..a.len())
        .map(|i| {
            let left = if i > 0 { b[i - 1].abs() } else { 0.0 };
            let right = if i < b.len() { b[i].abs() } else { 0.0 };
            a[i].abs() + left + right
        })
        .fold(0.0, f64::max);
    // Number of eigenvalues strictly below x.
    let count_below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..a.len() {
            let off = if i > 0 { b[i - 1] * b[i - 1] } else { 0.0 };
            d = a[i] - x - off / d;
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// Training traces.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub cost: f64,
    pub relative_cost: f64,
    pub grad_norm_sq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace {
    /// One record per iteration plus the final point (iters + 1 in total).
    pub records: Vec<TraceRecord>,
    pub init: InitSpec,
    pub seed: u64,
    pub stream: u64,
    pub converged: bool,
    pub final_params: Vec<f64>,
}

impl TrainTrace {
    pub fn final_record(&self) -> &TraceRecord {
        self.records.last().expect("a trace always holds the initial point")
    }
}

/// A VQE instance with its ground energy computed once.
#[derive(Debug, Clone)]
pub struct VqeProblem {
    pub spec: AnsatzSpec,
    pub hamiltonian: Hamiltonian,
    pub ground_energy: f64,
}

impl VqeProblem {
    pub fn new(spec: AnsatzSpec, hamiltonian: Hamiltonian) -> Result<Self> {
        if spec.n_qubits() != hamiltonian.n_qubits() {
            return Err(Error::invalid("Hamiltonian and ansatz qubit counts differ"));
        }
        let ground_energy = ground_energy(&hamiltonian)?;
        Ok(VqeProblem {
            spec,
            hamiltonian,
            ground_energy,
        })
    }
}

/// RMSProp on exact gradients for `iters` steps from a point drawn from `init`
/// using stream `stream` of `seed`.
pub fn train_vqe(
    problem: &VqeProblem,
    init: &InitSpec,
    iters: usize,
    config: RmspropConfig,
    seed: u64,
    stream: u64,
) -> Result<TrainTrace> {
    let mut rng = SeededRng::new(seed, stream);
    let mut params = sample_params(&problem.spec, init, &mut rng)?.into_inner();
    let mut opt = RmspropState::new(params.len(), config)?;
    let mut records = Vec::with_capacity(iters + 1);
    for k in 0..=iters {
        let (cost, grad) = cost_and_gradient(&problem.spec, &params, &problem.hamiltonian)?;
        records.push(TraceRecord {
            iteration: k,
            cost,
            relative_cost: cost - problem.ground_energy,
            grad_norm_sq: pairwise_sum(&grad.iter().map(|g| g * g).collect::<Vec<_>>()),
        });
        if k < iters {
            let lr = lr_schedule_linear(k, iters, config.lr0, config.lr1);
            opt.step(&mut params, &grad, lr)?;
        }
    }
    let converged = records.last().map(|r| r.relative_cost < VQE_CONVERGED_GAP).unwrap_or(false);
    Ok(TrainTrace {
        records,
        init: *init,
        seed,
        stream,
        converged,
        final_params: params,
    })
}

/// `rounds` independent VQE runs; round r uses stream r.
pub fn train_vqe_rounds(
    problem: &VqeProblem,
    init: &InitSpec,
    rounds: usize,
    iters: usize,
    config: RmspropConfig,
    seed: u64,
) -> Result<Vec<TrainTrace>> {
    (0..rounds)
        .into_par_iter()
        .map(|r| train_vqe(problem, init, iters, config, seed, r as u64))
        .collect()
}

// ---------------------------------------------------------------------------
// QNN loss.

/// Separable loss over p angles with global minimum 0 at θ_l = π/100 (mod π).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QnnModel {
    p: usize,
}

impl QnnModel {
    pub fn new(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("QNN needs p ≥ 1"));
        }
        Ok(QnnModel { p })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// θ* = (π/100, …, π/100).
    pub fn global_minimizer(&self) -> Vec<f64> {
        vec![PI / 100.0; self.p]
    }

    fn check(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.p {
            return Err(Error::invalid(format!(
                "QNN expects {} angles, got {}",
                self.p,
                theta.len()
            )));
        }
        Ok(())
    }
}

fn targets() -> (f64, f64) {
    (PI / 50.0).sin_cos()
}

/// (1/2p)Σ_l[(sin2θ_l − sin(π/50))² + ¼(cos2θ_l − cos(π/50))²].
pub fn qnn_loss(model: &QnnModel, theta: &[f64]) -> Result<f64> {
    model.check(theta)?;
    let (s, c) = targets();
    let terms: Vec<f64> = theta
        .iter()
        .map(|t| {
            let (s2, c2) = (2.0 * t).sin_cos();
            (s2 - s).powi(2) + 0.25 * (c2 - c).powi(2)
        })
        .collect();
    Ok(pairwise_sum(&terms) / (2.0 * model.p as f64))
}

pub fn qnn_grad(model: &QnnModel, theta: &[f64]) -> Result<Vec<f64>> {
    model.check(theta)?;
    let (s, c) = targets();
    let scale = 1.0 / (2.0 * model.p as f64);
    Ok(theta
        .iter()
        .map(|t| {
            let (s2, c2) = (2.0 * t).sin_cos();
            scale * (4.0 * c2 * (s2 - s) - s2 * (c2 - c))
        })
        .collect())
}

/// Maps a full-period initialization onto the QNN's half period: uniform
/// becomes 𝒰[−π/2, π/2] and a domain half-width aπ becomes aπ/2.
pub fn qnn_half_period(init: &InitSpec) -> InitSpec {
    match *init {
        InitSpec::Uniform => InitSpec::Reduced { a: 0.5 },
        InitSpec::Reduced { a } => InitSpec::Reduced { a: 0.5 * a },
        InitSpec::Translated { a, center } => InitSpec::Translated { a: 0.5 * a, center },
        InitSpec::Gaussian { sigma2 } => InitSpec::Gaussian { sigma2 },
    }
}

/// RMSProp on the QNN loss from an explicit starting point.
pub fn train_qnn_from(
    model: &QnnModel,
    start: Vec<f64>,
    iters: usize,
    config: RmspropConfig,
) -> Result<(Vec<TraceRecord>, Vec<f64>)> {
    model.check(&start)?;
    let mut theta = ParamVector::new(start)?.into_inner();
    let mut opt = RmspropState::new(model.p, config)?;
    let mut records = Vec::with_capacity(iters + 1);
    for k in 0..=iters {
        let loss = qnn_loss(model, &theta)?;
        let grad = qnn_grad(model, &theta)?;
        records.push(TraceRecord {
            iteration: k,
            cost: loss,
            relative_cost: loss,
            grad_norm_sq: pairwise_sum(&grad.iter().map(|g| g * g).collect::<Vec<_>>()),
        });
        if k < iters {
            opt.step(&mut theta, &grad, lr_schedule_linear(k, iters, config.lr0, config.lr1))?;
        }
    }
    Ok((records, theta))
}

/// One QNN round: `init` is used as given (apply [`qnn_half_period`] first for
/// the half-period convention).
pub fn train_qnn(
    model: &QnnModel,
    init: &InitSpec,
    iters: usize,
    config: RmspropConfig,
    seed: u64,
    stream: u64,
) -> Result<TrainTrace> {
    init.validate()?;
    let mut rng = SeededRng::new(seed, stream);
    let start = init.sample_angles(model.p, &mut rng);
    let (records, final_params) = train_qnn_from(model, start, iters, config)?;
    let converged = records.last().map(|r| r.cost < QNN_TOLERANCE).unwrap_or(false);
    Ok(TrainTrace {
        records,
        init: *init,
        seed,
        stream,
        converged,
        final_params,
    })
}

/// Distinct local minima of the QNN loss in [−π/2, π/2)^p, found by grid search
/// followed by gradient descent from every grid point.
pub fn count_qnn_minima(p: usize) -> Result<usize> {
    Ok(qnn_minima(p)?.len())
}

/// Locations and loss values of the local minima counted by [`count_qnn_minima`].
pub fn qnn_minima(p: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    if p > 3 {
        return Err(Error::Resource(format!("grid search over p = {p} > 3 dimensions")));
    }
    let model = QnnModel::new(p)?;
    let per_axis = 24usize;
    let grid: Vec<f64> = (0..per_axis)
        .map(|i| -PI / 2.0 + PI * (i as f64 + 0.5) / per_axis as f64)
        .collect();
    let mut found: Vec<(Vec<f64>, f64)> = Vec::new();
    let total = per_axis.pow(p as u32);
    for idx in 0..total {
        let mut x: Vec<f64> = (0..p).map(|d| grid[(idx / per_axis.pow(d as u32)) % per_axis]).collect();
        // The per-coordinate curvature at a minimum is about 8/(2p), so this step
        // is close to a Newton step.
        let step = 0.25 * p as f64;
        for _ in 0..5_000 {
            let g = qnn_grad(&model, &x)?;
            if g.iter().map(|v| v * v).sum::<f64>() < 1e-26 {
                break;
            }
            x.iter_mut().zip(&g).for_each(|(xi, gi)| *xi -= step * gi);
        }
        // Wrap into one period so minima on either side of the cut coincide.
        for xi in x.iter_mut() {
            *xi = (*xi + PI / 2.0).rem_euclid(PI) - PI / 2.0;
        }
        let loss = qnn_loss(&model, &x)?;
        let known = found.iter().any(|(y, _)| {
            y.iter().zip(&x).all(|(a, b)| {
                let d = (a - b).abs();
                d.min(PI - d) < 1e-6
            })
        });
        if !known {
            found.push((x, loss));
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::Topology;
    use crate::pauli::{heisenberg_chain, parse_hamiltonian, zz_chain};

    #[test]
    fn rmsprop_rules() {
        let cfg = RmspropConfig::vqe();
        let mut s = RmspropState::new(1, cfg).unwrap();
        let mut p = [1.0];
        s.step(&mut p, &[0.0], 0.01).unwrap();
        assert_eq!(p, [1.0]);
        assert_eq!(s.accumulator(), &[0.0]);

        let mut s = RmspropState::new(1, cfg).unwrap();
        let mut p = [0.0];
        s.step(&mut p, &[2.0], 0.01).unwrap();
        let expected = 0.01 * 2.0 / ((0.001f64 * 4.0).sqrt() + 1e-8);
        assert!((p[0] + expected).abs() < 1e-15);
        assert!((expected - 0.01 / 0.001f64.sqrt()).abs() < 1e-6);
        let before = p[0];
        s.step(&mut p, &[2.0], 0.01).unwrap();
        assert!((p[0] - before).abs() < expected);
        assert_eq!(s.steps(), 2);

        // Decay with zero gradient.
        let acc = s.accumulator()[0];
        s.step(&mut p, &[0.0], 0.01).unwrap();
        assert!((s.accumulator()[0] - 0.999 * acc).abs() < 1e-18);
        assert!(s.step(&mut [0.0, 1.0], &[0.0], 0.1).is_err());
    }

    #[test]
    fn schedule() {
        assert_eq!(lr_schedule_linear(0, 200, 0.01, 0.005), 0.01);
        assert!((lr_schedule_linear(199, 200, 0.01, 0.005) - 0.005).abs() < 1e-18);
        assert!((lr_schedule_linear(50, 101, 0.01, 0.005) - 0.0075).abs() < 1e-18);
        assert_eq!(lr_schedule_linear(0, 1, 0.01, 0.005), 0.01);
    }

    #[test]
    fn ground_energies() {
        for n in 2..=8 {
            assert_eq!(ground_energy(&zz_chain(n).unwrap()).unwrap(), -((n - 1) as f64));
        }
        assert!((ground_energy(&heisenberg_chain(2).unwrap()).unwrap() + 3.0).abs() < 1e-12);
        let h4 = heisenberg_chain(4).unwrap();
        let dense = ground_energy(&h4).unwrap();
        let lanczos = ground_energy_lanczos(&h4, 200, 1).unwrap();
        assert!((dense - lanczos).abs() < 1e-9, "{dense} vs {lanczos}");
        // Open four-site chain: −3 − 2√3.
        assert!((dense + 3.0 + 2.0 * 3f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn complex_hamiltonian_path() {
        // XY + YX + Z0 has single Y factors, so its matrix is complex.
        let h = parse_hamiltonian("1 XY\n1 YX\n0.5 ZI\n").unwrap();
        let dense = ground_energy(&h).unwrap();
        let lanczos = ground_energy_lanczos(&h, 50, 3).unwrap();
        assert!((dense - lanczos).abs() < 1e-10);
        let m = dense_matrix(&h);
        assert!((m.clone() - m.adjoint()).iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn tridiagonal_bisection() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        assert!((tridiagonal_min_eigenvalue(&[2.0, 2.0], &[1.0]) - 1.0).abs() < 1e-14);
        assert!((tridiagonal_min_eigenvalue(&[-4.0], &[]) + 4.0).abs() < 1e-14);
    }

    #[test]
    fn vqe_degenerate_trace() {
        let spec = AnsatzSpec::build(2, 1, &Topology::ChainClosed).unwrap();
        let problem = VqeProblem::new(spec, zz_chain(2).unwrap()).unwrap();
        let t = train_vqe(&problem, &InitSpec::Uniform, 0, RmspropConfig::vqe(), 1, 0).unwrap();
        assert_eq!(t.records.len(), 1);
        let t = train_vqe(&problem, &InitSpec::Uniform, 5, RmspropConfig::vqe(), 1, 0).unwrap();
        assert_eq!(t.records.len(), 6);
        assert!(t.records.iter().all(|r| r.relative_cost >= -1e-9));
    }

    #[test]
    fn qnn_values() {
        let m = QnnModel::new(4).unwrap();
        assert!(qnn_loss(&m, &m.global_minimizer()).unwrap().abs() < 1e-30);
        let shifted: Vec<f64> = m.global_minimizer().iter().map(|t| t + 3.0 * PI).collect();
        assert!(qnn_loss(&m, &shifted).unwrap() < 1e-28);
        for p in [1, 3, 10] {
            let m = QnnModel::new(p).unwrap();
            let l0 = qnn_loss(&m, &vec![0.0; p]).unwrap();
            assert!((l0 - 1.972e-3).abs() < 1e-6, "{l0}");
        }
        assert!(qnn_loss(&m, &[0.0]).is_err());
        assert!(QnnModel::new(0).is_err());
    }

    #[test]
    fn qnn_gradient_matches_finite_differences() {
        let m = QnnModel::new(5).unwrap();
        let mut rng = SeededRng::new(2, 0);
        let theta = InitSpec::Uniform.sample_angles(5, &mut rng);
        let g = qnn_grad(&m, &theta).unwrap();
        let h = 1e-5;
        for i in 0..5 {
            let mut plus = theta.clone();
            plus[i] += h;
            let mut minus = theta.clone();
            minus[i] -= h;
            let fd = (qnn_loss(&m, &plus).unwrap() - qnn_loss(&m, &minus).unwrap()) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn qnn_loss_is_mean_of_single_losses() {
        let theta = [0.3, -1.2, 0.9];
        let one = QnnModel::new(1).unwrap();
        let mean: f64 = theta.iter().map(|&t| qnn_loss(&one, &[t]).unwrap()).sum::<f64>() / 3.0;
        assert!((qnn_loss(&QnnModel::new(3).unwrap(), &theta).unwrap() - mean).abs() < 1e-16);
    }

    #[test]
    fn qnn_minima_counts() {
        assert_eq!(count_qnn_minima(1).unwrap(), 2);
        assert_eq!(count_qnn_minima(2).unwrap(), 4);
        assert!(count_qnn_minima(4).is_err());
        let minima = qnn_minima(1).unwrap();
        let global = minima.iter().filter(|(_, l)| *l < 1e-20).count();
        assert_eq!(global, 1);
        let gap = minima.iter().map(|(_, l)| *l).filter(|l| *l > 1e-20).fold(f64::INFINITY, f64::min);
        assert!(gap > 0.1, "{gap}");
    }

    #[test]
    fn qnn_training_from_minimum_stays() {
        let m = QnnModel::new(3).unwrap();
        let (records, _) = train_qnn_from(&m, m.global_minimizer(), 10, RmspropConfig::qnn()).unwrap();
        assert!(records.iter().all(|r| r.cost < 1e-20));
    }

    #[test]
    fn qnn_reduced_rounds_converge() {
        let m = QnnModel::new(10).unwrap();
        let init = qnn_half_period(&InitSpec::Reduced { a: 0.1 });
        for r in 0..20 {
            assert!(train_qnn(&m, &init, 200, RmspropConfig::qnn(), 4, r).unwrap().converged);
        }
    }
}
