//! Initialization strategies and the depth-dependent choice of the reduced
//! domain half-width a.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{AnsatzSpec, ParamVector};
use crate::error::{Error, Result};

/// Distribution of every initial angle (drawn independently).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitSpec {
    /// 𝒰[−π, π].
    Uniform,
    /// 𝒰[−aπ, aπ] with 0 < a < 1.
    Reduced { a: f64 },
    /// 𝒩(0, σ²).
    Gaussian { sigma2: f64 },
    /// 𝒰[center − aπ, center + aπ] with 0 < a < 1.
    Translated { a: f64, center: f64 },
}

impl InitSpec {
    pub fn validate(&self) -> Result<()> {
        let check_a = |a: f64| {
            if a > 0.0 && a < 1.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("domain parameter a = {a} must lie in (0, 1)")))
            }
        };
        match *self {
            InitSpec::Uniform => Ok(()),
            InitSpec::Reduced { a } => check_a(a),
            InitSpec::Gaussian { sigma2 } => {
                if sigma2 > 0.0 && sigma2.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid(format!("sigma2 = {sigma2} must be positive")))
                }
            }
            InitSpec::Translated { a, center } => {
                if !center.is_finite() {
                    return Err(Error::invalid("center must be finite"));
                }
                check_a(a)
            }
        }
    }

    /// Short name used in config files and CSV columns.
    pub fn name(&self) -> &'static str {
        match self {
            InitSpec::Uniform => "uniform",
            InitSpec::Reduced { .. } => "reduced",
            InitSpec::Gaussian { .. } => "gaussian",
            InitSpec::Translated { .. } => "translated",
        }
    }

    /// Draws one angle.
    pub fn sample(&self, rng: &mut SeededRng) -> f64 {
        match *self {
            InitSpec::Uniform => PI * rng.symmetric_unit(),
            InitSpec::Reduced { a } => a * PI * rng.symmetric_unit(),
            InitSpec::Gaussian { sigma2 } => sigma2.sqrt() * rng.standard_normal(),
            InitSpec::Translated { a, center } => center + a * PI * rng.symmetric_unit(),
        }
    }

    /// `len` independent angles.
    pub fn sample_angles(&self, len: usize, rng: &mut SeededRng) -> Vec<f64> {
        (0..len).map(|_| self.sample(rng)).collect()
    }
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InitSpec::Uniform => write!(f, "uniform"),
            InitSpec::Reduced { a } => write!(f, "reduced(a={a})"),
            InitSpec::Gaussian { sigma2 } => write!(f, "gaussian(sigma2={sigma2})"),
            InitSpec::Translated { a, center } => write!(f, "translated(a={a},center={center})"),
        }
    }
}

/// Reproducible random stream identified by (seed, stream id).
///
/// Backed by ChaCha8, a portable algorithm with no platform-dependent state, so a given
/// (seed, stream) yields the same numbers on every platform.
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng { inner }
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform in [−1, 1).
    pub fn symmetric_unit(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }

    /// Standard normal via the cosine branch of Box–Muller (two uniforms per draw).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.random::<u64>()
    }
}

/// 2NL independent angles for `spec`.
pub fn sample_params(spec: &AnsatzSpec, init: &InitSpec, rng: &mut SeededRng) -> Result<ParamVector> {
    init.validate()?;
    ParamVector::new(init.sample_angles(spec.n_params(), rng))
}

/// Closed-form domain width that maximizes the ZZ-chain gradient bound for depth L.
pub fn solve_a_theorem1(n_blocks: usize) -> Result<f64> {
    if n_blocks == 0 {
        return Err(Error::invalid("L must be at least 1"));
    }
    let l = n_blocks as f64;
    let radical = (1600.0 * l * l - 400.0 * l + 49.0).sqrt();
    Ok(((40.0 * l + 7.0 - radical) / l).sqrt() / (4.0 * PI))
}

/// The a ∈ (0, 0.5] with sin(2aπ)/(2aπ) = (S(2L−1) − 2)/(S(2L+1)).
pub fn solve_a_theorem2(locality: usize, n_blocks: usize) -> Result<f64> {
    if locality == 0 || n_blocks == 0 {
        return Err(Error::invalid("S and L must be at least 1"));
    }
    let (s, l) = (locality as f64, n_blocks as f64);
    let target = (s * (2.0 * l - 1.0) - 2.0) / (s * (2.0 * l + 1.0));
    let x = solve_sinc(target)?;
    Ok(x / (2.0 * PI))
}

/// Edge-qubit variance condition sin(aπ)/(aπ) = (2L − 1)/L.
///
/// The right side is 1 at L = 1 and exceeds 1 for every L > 1, so this always
/// fails; the error carries the computed target.
pub fn solve_a_theorem3_edge(n_blocks: usize) -> Result<f64> {
    if n_blocks == 0 {
        return Err(Error::invalid("L must be at least 1"));
    }
    let l = n_blocks as f64;
    solve_a_sinc_target((2.0 * l - 1.0) / l)
}

/// The a ∈ (0, 1) with sin(aπ)/(aπ) = `target`.
pub fn solve_a_sinc_target(target: f64) -> Result<f64> {
    Ok(solve_sinc(target)? / PI)
}

/// sin(x)/x, continuous at 0.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Root of sin(x)/x = t on (0, π), where sinc falls strictly from 1 to 0.
fn solve_sinc(target: f64) -> Result<f64> {
    if target.is_nan() {
        return Err(Error::invalid("target is NaN"));
    }
    if target == 1.0 {
        return Err(Error::NoValidHyperparameter {
            target,
            reason: "degenerate target 1 (only a → 0 solves it)".into(),
        });
    }
    if target > 1.0 {
        return Err(Error::NoValidHyperparameter {
            target,
            reason: "sin(x)/x never exceeds 1".into(),
        });
    }
    if target < 0.0 {
        return Err(Error::NoValidHyperparameter {
            target,
            reason: "target below 0 has no root in the monotone region".into(),
        });
    }
    let (mut lo, mut hi) = (0.0f64, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sinc(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// σ² = 1/(8SL), the Gaussian baseline variance.
pub fn gaussian_sigma_default(locality: usize, n_blocks: usize) -> f64 {
    1.0 / (8.0 * locality as f64 * n_blocks as f64)
}
