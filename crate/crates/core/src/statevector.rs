//! Exact statevector simulation of the ansatz.
//!
//! Basis index bit q holds qubit q. Pauli observables act by index
//! manipulation (flip mask for X/Y, parity phase for Y/Z), so no dense operator
//! is ever built.

use num_complex::Complex64;

use crate::ansatz::{AnsatzSpec, Gate, ParamVector};
use crate::error::{Error, Result};
use crate::pauli::{Hamiltonian, Pauli, PauliString};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::invalid("state needs at least one qubit"));
        }
        if n_qubits > MAX_QUBITS {
            return Err(Error::Resource(format!(
                "{n_qubits} qubits exceeds the simulator cap of {MAX_QUBITS}"
            )));
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::invalid(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    pub fn apply_rx(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        check_angle(angle)?;
        rx(&mut self.amps, qubit, angle);
        Ok(())
    }

    pub fn apply_ry(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        check_angle(angle)?;
        ry(&mut self.amps, qubit, angle);
        Ok(())
    }

    pub fn apply_cz(&mut self, (a, b): (usize, usize)) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::invalid("CZ needs two distinct qubits"));
        }
        cz(&mut self.amps, a, b);
        Ok(())
    }

    /// ⟨ψ|σ|ψ⟩ as a complex number; the imaginary part vanishes up to rounding.
    pub fn expectation(&self, p: &PauliString) -> Result<Complex64> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::invalid("Pauli string and state differ in qubit count"));
        }
        Ok(pauli_expectation(&self.amps, p))
    }

    /// ⟨ψ|H|ψ⟩.
    pub fn energy(&self, h: &Hamiltonian) -> Result<f64> {
        if h.n_qubits() != self.n_qubits {
            return Err(Error::invalid("Hamiltonian and state differ in qubit count"));
        }
        Ok(h
            .terms()
            .iter()
            .map(|(c, p)| c * pauli_expectation(&self.amps, p).re)
            .sum())
    }

    /// H|ψ⟩ as a plain amplitude vector (not normalized).
    pub fn apply_hamiltonian(&self, h: &Hamiltonian) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.amps.len()];
        for (c, p) in h.terms() {
            let (flip, phase_mask) = p.masks();
            let base = y_phase(p) * (c * p.sign());
            for (b, &a) in self.amps.iter().enumerate() {
                out[b ^ flip] += parity(b & phase_mask) * base * a;
            }
        }
        out
    }
}

fn check_angle(angle: f64) -> Result<()> {
    if !angle.is_finite() {
        return Err(Error::invalid("rotation angle must be finite"));
    }
    Ok(())
}

/// i^(number of Y factors).
fn y_phase(p: &PauliString) -> Complex64 {
    match p.count(Pauli::Y) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn parity(bits: usize) -> f64 {
    if bits.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn pauli_expectation(amps: &[Complex64], p: &PauliString) -> Complex64 {
    let (flip, phase_mask) = p.masks();
    let sum: Complex64 = amps
        .iter()
        .enumerate()
        .map(|(b, &a)| amps[b ^ flip].conj() * a * parity(b & phase_mask))
        .sum();
    sum * y_phase(p) * p.sign()
}

fn rx(amps: &mut [Complex64], q: usize, angle: f64) {
    let (s, c) = (0.5 * angle).sin_cos();
    let mis = Complex64::new(0.0, -s);
    let m = 1 << q;
    for i in (0..amps.len()).filter(|i| i & m == 0) {
        let (a, b) = (amps[i], amps[i | m]);
        amps[i] = a * c + b * mis;
        amps[i | m] = a * mis + b * c;
    }
}

fn ry(amps: &mut [Complex64], q: usize, angle: f64) {
    let (s, c) = (0.5 * angle).sin_cos();
    let m = 1 << q;
    for i in (0..amps.len()).filter(|i| i & m == 0) {
        let (a, b) = (amps[i], amps[i | m]);
        amps[i] = a * c - b * s;
        amps[i | m] = a * s + b * c;
    }
}

fn cz(amps: &mut [Complex64], a: usize, b: usize) {
    let m = (1 << a) | (1 << b);
    for (i, v) in amps.iter_mut().enumerate() {
        if i & m == m {
            *v = -*v;
        }
    }
}

/// ⟨λ|X_q|ψ⟩.
fn x_overlap(lambda: &[Complex64], psi: &[Complex64], q: usize) -> Complex64 {
    let m = 1 << q;
    lambda
        .iter()
        .enumerate()
        .map(|(b, l)| l.conj() * psi[b ^ m])
        .sum()
}

/// ⟨λ|Y_q|ψ⟩.
fn y_overlap(lambda: &[Complex64], psi: &[Complex64], q: usize) -> Complex64 {
    let m = 1 << q;
    lambda
        .iter()
        .enumerate()
        .map(|(b, l)| {
            // (Yψ)_b = −i ψ_{b|m} when bit q of b is 0, +i ψ_{b&!m} otherwise.
            let y = if b & m == 0 {
                Complex64::new(0.0, -1.0) * psi[b | m]
            } else {
                Complex64::new(0.0, 1.0) * psi[b & !m]
            };
            l.conj() * y
        })
        .sum()
}

fn check_params(spec: &AnsatzSpec, params: &[f64]) -> Result<()> {
    if params.len() != spec.n_params() {
        return Err(Error::invalid(format!(
            "expected {} parameters, got {}",
            spec.n_params(),
            params.len()
        )));
    }
    Ok(())
}

fn check_hamiltonian(spec: &AnsatzSpec, h: &Hamiltonian) -> Result<()> {
    if h.n_qubits() != spec.n_qubits() {
        return Err(Error::invalid(format!(
            "Hamiltonian has {} qubits, ansatz has {}",
            h.n_qubits(),
            spec.n_qubits()
        )));
    }
    Ok(())
}

fn apply_gate(amps: &mut [Complex64], gate: Gate, params: &[f64], inverse: bool) {
    let sign = if inverse { -1.0 } else { 1.0 };
    match gate {
        Gate::Cz(a, b) => cz(amps, a, b),
        Gate::Rx { qubit, param } => rx(amps, qubit, sign * params[param]),
        Gate::Ry { qubit, param } => ry(amps, qubit, sign * params[param]),
    }
}

/// U(θ)|0…0⟩.
pub fn run_circuit(spec: &AnsatzSpec, params: &ParamVector) -> Result<StateVector> {
    run_raw(spec, params)
}

fn run_raw(spec: &AnsatzSpec, params: &[f64]) -> Result<StateVector> {
    check_params(spec, params)?;
    let mut state = StateVector::zero_state(spec.n_qubits())?;
    for gate in spec.gates() {
        apply_gate(&mut state.amps, gate, params, false);
    }
    Ok(state)
}

/// C(θ) = ⟨ψ(θ)|H|ψ(θ)⟩.
pub fn cost(spec: &AnsatzSpec, params: &ParamVector, h: &Hamiltonian) -> Result<f64> {
    cost_raw(spec, params, h)
}

pub(crate) fn cost_raw(spec: &AnsatzSpec, params: &[f64], h: &Hamiltonian) -> Result<f64> {
    check_hamiltonian(spec, h)?;
    run_raw(spec, params)?.energy(h)
}

/// Exact gradient of C(θ) by one forward and one reverse sweep.
pub fn adjoint_gradient(spec: &AnsatzSpec, params: &ParamVector, h: &Hamiltonian) -> Result<Vec<f64>> {
    Ok(cost_and_gradient(spec, params, h)?.1)
}

/// C(θ) together with ∇C(θ).
pub fn cost_and_gradient(spec: &AnsatzSpec, params: &[f64], h: &Hamiltonian) -> Result<(f64, Vec<f64>)> {
    check_hamiltonian(spec, h)?;
    let mut psi = run_raw(spec, params)?;
    let value = psi.energy(h)?;
    let mut lambda = psi.apply_hamiltonian(h);
    let mut grad = vec![0.0; params.len()];
    let gates: Vec<Gate> = spec.gates().collect();
    for &gate in gates.iter().rev() {
        // dC/dθ = Im⟨λ|P|ψ⟩ for a gate exp(−iθP/2), with ψ the state just after
        // the gate and λ the back-propagated H|ψ_final⟩.
        match gate {
            Gate::Rx { qubit, param } => grad[param] = x_overlap(&lambda, &psi.amps, qubit).im,
            Gate::Ry { qubit, param } => grad[param] = y_overlap(&lambda, &psi.amps, qubit).im,
            Gate::Cz(..) => {}
        }
        apply_gate(&mut psi.amps, gate, params, true);
        apply_gate(&mut lambda, gate, params, true);
    }
    Ok((value, grad))
}
