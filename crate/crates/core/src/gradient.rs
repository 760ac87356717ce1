//! Gradient oracles and Monte Carlo statistics of the gradient at initialization.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::ansatz::{AnsatzSpec, ParamVector};
use crate::error::{Error, Result};
use crate::init::{sample_params, InitSpec, SeededRng};
use crate::pauli::Hamiltonian;
use crate::statevector::{cost_and_gradient, cost_raw};

/// ∂C/∂θ_v = (C(θ + π/2·e_v) − C(θ − π/2·e_v))/2, exact for RX/RY.
pub fn parameter_shift_gradient(spec: &AnsatzSpec, params: &ParamVector, h: &Hamiltonian) -> Result<Vec<f64>> {
    shifted_differences(spec, params, h, FRAC_PI_2, 0.5)
}

/// Central differences (C(θ + δe_v) − C(θ − δe_v))/(2δ).
pub fn central_difference_gradient(
    spec: &AnsatzSpec,
    params: &ParamVector,
    h: &Hamiltonian,
    step: f64,
) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    shifted_differences(spec, params, h, step, 0.5 / step)
}

fn shifted_differences(
    spec: &AnsatzSpec,
    params: &ParamVector,
    h: &Hamiltonian,
    shift: f64,
    scale: f64,
) -> Result<Vec<f64>> {
    let mut work = params.to_vec();
    let mut grad = Vec::with_capacity(work.len());
    for v in 0..work.len() {
        let orig = work[v];
        work[v] = orig + shift;
        let plus = cost_raw(spec, &work, h)?;
        work[v] = orig - shift;
        let minus = cost_raw(spec, &work, h)?;
        work[v] = orig;
        grad.push(scale * (plus - minus));
    }
    // Zero parameters still validate the instance.
    if work.is_empty() {
        cost_raw(spec, &work, h)?;
    }
    Ok(grad)
}

/// Summation by recursive halving; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// Mean and sample standard deviation by the two-pass algorithm.
pub fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    (mean, (pairwise_sum(&dev) / (n - 1) as f64).sqrt())
}

/// Monte Carlo estimate of E‖∇C‖².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradNormEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Full gradients at `n_samples` initial points; sample i uses stream i of `seed`.
/// Returned in sample order whatever the thread count.
pub fn sample_gradients(
    spec: &AnsatzSpec,
    h: &Hamiltonian,
    init: &InitSpec,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    init.validate()?;
    if h.n_qubits() != spec.n_qubits() {
        return Err(Error::invalid(format!(
            "Hamiltonian acts on {} qubits, circuit has {}",
            h.n_qubits(),
            spec.n_qubits()
        )));
    }
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(seed, i as u64);
            let params = sample_params(spec, init, &mut rng)?;
            Ok(cost_and_gradient(spec, &params, h)?.1)
        })
        .collect()
}

pub fn mc_grad_norm_sq(
    spec: &AnsatzSpec,
    h: &Hamiltonian,
    init: &InitSpec,
    n_samples: usize,
    seed: u64,
) -> Result<GradNormEstimate> {
    if n_samples < 2 {
        return Err(Error::invalid("need at least 2 samples"));
    }
    let norms: Vec<f64> = sample_gradients(spec, h, init, n_samples, seed)?
        .iter()
        .map(|g| pairwise_sum(&g.iter().map(|d| d * d).collect::<Vec<_>>()))
        .collect();
    let (mean, std) = mean_and_std(&norms);
    Ok(GradNormEstimate {
        mean,
        stderr: std / (n_samples as f64).sqrt(),
        n_samples,
        seed,
    })
}

/// Monte Carlo moments of one partial derivative ∂C/∂θ_{q,n} (1-based q, n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialStats {
    pub q: usize,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
    pub stderr_mean: f64,
    pub stderr_variance: f64,
    pub stderr_second_moment: f64,
}

fn partial_stats_from(q: usize, n: usize, xs: &[f64]) -> PartialStats {
    let count = xs.len() as f64;
    let (mean, std) = mean_and_std(xs);
    let squares: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let (second_moment, sq_std) = mean_and_std(&squares);
    let centered: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let (_, c_std) = mean_and_std(&centered);
    // Plug-in (1/n) variance, so variance = second_moment − mean² up to rounding.
    let variance = pairwise_sum(&centered) / count;
    PartialStats {
        q,
        n,
        mean,
        variance,
        second_moment,
        stderr_mean: std / count.sqrt(),
        stderr_variance: c_std / count.sqrt(),
        stderr_second_moment: sq_std / count.sqrt(),
    }
}

pub fn mc_partial_stats(
    spec: &AnsatzSpec,
    h: &Hamiltonian,
    init: &InitSpec,
    q: usize,
    n: usize,
    n_samples: usize,
    seed: u64,
) -> Result<PartialStats> {
    let index = spec.param_index(q, n)?;
    if n_samples < 2 {
        return Err(Error::invalid("need at least 2 samples"));
    }
    let xs: Vec<f64> = sample_gradients(spec, h, init, n_samples, seed)?
        .iter()
        .map(|g| g[index])
        .collect();
    Ok(partial_stats_from(q, n, &xs))
}

/// Statistics for every parameter from one shared set of samples, in flat order.
pub fn mc_partial_stats_all(
    spec: &AnsatzSpec,
    h: &Hamiltonian,
    init: &InitSpec,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<PartialStats>> {
    if n_samples < 2 {
        return Err(Error::invalid("need at least 2 samples"));
    }
    let grads = sample_gradients(spec, h, init, n_samples, seed)?;
    let n_qubits = spec.n_qubits();
    Ok((0..spec.n_params())
        .map(|v| {
            let xs: Vec<f64> = grads.iter().map(|g| g[v]).collect();
            partial_stats_from(v / n_qubits + 1, v % n_qubits + 1, &xs)
        })
        .collect())
}
