//! The layered ansatz: L blocks, each an entangling CZ layer followed by an RX
//! layer and an RY layer on every qubit.
//!
//! Parameters are numbered by rotation layer q ∈ [1, 2L] and qubit n ∈ [1, N]
//! (1-based at the API boundary). Odd q are RX layers, even q are RY layers, and
//! the flat storage index is (q − 1)·N + (n − 1).

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Entangling pattern of each CZ layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    /// Nearest neighbours with a closed boundary: (0,1), (1,2), …, (N−1,0).
    ChainClosed,
    /// Every pair (i, j) with i < j.
    Full,
    /// Explicit pair lists, one per block.
    Custom(Vec<Vec<(usize, usize)>>),
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain_closed" => Ok(Topology::ChainClosed),
            "full" => Ok(Topology::Full),
            other => parse_custom_topology(other),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::ChainClosed => write!(f, "chain_closed"),
            Topology::Full => write!(f, "full"),
            Topology::Custom(blocks) => {
                let text: Vec<String> = blocks
                    .iter()
                    .map(|pairs| {
                        pairs
                            .iter()
                            .map(|(a, b)| format!("{a}-{b}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                write!(f, "custom:{}", text.join(";"))
            }
        }
    }
}

/// Parses `custom:0-1 1-2;0-2` (blocks separated by `;`, pairs by whitespace).
fn parse_custom_topology(s: &str) -> Result<Topology> {
    let body = s
        .strip_prefix("custom:")
        .ok_or_else(|| Error::invalid(format!("unknown topology `{s}`")))?;
    let blocks = body
        .split(';')
        .map(|block| {
            block
                .split_whitespace()
                .map(|pair| {
                    let (a, b) = pair
                        .split_once('-')
                        .ok_or_else(|| Error::invalid(format!("bad CZ pair `{pair}`")))?;
                    let a = a.parse().map_err(|_| Error::invalid(format!("bad CZ pair `{pair}`")))?;
                    let b = b.parse().map_err(|_| Error::invalid(format!("bad CZ pair `{pair}`")))?;
                    Ok((a, b))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Topology::Custom(blocks))
}

/// One gate of the expanded circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Cz(usize, usize),
    Rx { qubit: usize, param: usize },
    Ry { qubit: usize, param: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzSpec {
    n_qubits: usize,
    n_blocks: usize,
    cz_layers: Vec<Vec<(usize, usize)>>,
}

impl AnsatzSpec {
    pub fn build(n_qubits: usize, n_blocks: usize, topology: &Topology) -> Result<Self> {
        if n_qubits == 0 || n_blocks == 0 {
            return Err(Error::invalid("ansatz needs N ≥ 1 and L ≥ 1"));
        }
        let cz_layers = match topology {
            Topology::ChainClosed => {
                if n_qubits < 2 {
                    return Err(Error::invalid("chain_closed topology needs N ≥ 2"));
                }
                let mut pairs: Vec<(usize, usize)> = (0..n_qubits - 1).map(|i| (i, i + 1)).collect();
                // With two qubits the wrap-around pair would repeat (0, 1).
                if n_qubits > 2 {
                    pairs.push((n_qubits - 1, 0));
                }
                vec![pairs; n_blocks]
            }
            Topology::Full => {
                let pairs: Vec<(usize, usize)> = (0..n_qubits)
                    .flat_map(|i| (i + 1..n_qubits).map(move |j| (i, j)))
                    .collect();
                vec![pairs; n_blocks]
            }
            Topology::Custom(blocks) => {
                if blocks.len() != n_blocks {
                    return Err(Error::invalid(format!(
                        "custom topology has {} blocks, expected {n_blocks}",
                        blocks.len()
                    )));
                }
                for &(a, b) in blocks.iter().flatten() {
                    if a == b || a >= n_qubits || b >= n_qubits {
                        return Err(Error::invalid(format!(
                            "CZ pair ({a}, {b}) invalid for {n_qubits} qubits"
                        )));
                    }
                }
                blocks.clone()
            }
        };
        Ok(AnsatzSpec {
            n_qubits,
            n_blocks,
            cz_layers,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn cz_layers(&self) -> &[Vec<(usize, usize)>] {
        &self.cz_layers
    }

    /// 2·N·L.
    pub fn n_params(&self) -> usize {
        2 * self.n_qubits * self.n_blocks
    }

    /// Flat index of θ_{q,n} with 1-based q ∈ [1, 2L] and n ∈ [1, N].
    pub fn param_index(&self, q: usize, n: usize) -> Result<usize> {
        if q == 0 || q > 2 * self.n_blocks || n == 0 || n > self.n_qubits {
            return Err(Error::invalid(format!(
                "parameter (q={q}, n={n}) outside [1, {}]×[1, {}]",
                2 * self.n_blocks,
                self.n_qubits
            )));
        }
        Ok((q - 1) * self.n_qubits + (n - 1))
    }

    /// Gates in application order: for each block the CZ layer, then RX on every
    /// qubit, then RY on every qubit.
    pub fn gates(&self) -> impl Iterator<Item = Gate> + '_ {
        let n = self.n_qubits;
        self.cz_layers.iter().enumerate().flat_map(move |(l, pairs)| {
            let cz = pairs.iter().map(|&(a, b)| Gate::Cz(a, b));
            let rx = (0..n).map(move |q| Gate::Rx {
                qubit: q,
                param: 2 * l * n + q,
            });
            let ry = (0..n).map(move |q| Gate::Ry {
                qubit: q,
                param: (2 * l + 1) * n + q,
            });
            cz.chain(rx).chain(ry)
        })
    }
}

/// Rotation angles in flat order; every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("parameter {i} is not finite")));
        }
        Ok(ParamVector(values))
    }

    pub fn zeros(len: usize) -> Self {
        ParamVector(vec![0.0; len])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl Deref for ParamVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_closed_pairs() {
        let spec = AnsatzSpec::build(4, 3, &Topology::ChainClosed).unwrap();
        assert_eq!(spec.cz_layers()[0], vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(spec.cz_layers().iter().all(|l| l == &spec.cz_layers()[0]));
        assert_eq!(spec.n_params(), 24);

        let two = AnsatzSpec::build(2, 1, &Topology::ChainClosed).unwrap();
        assert_eq!(two.cz_layers()[0], vec![(0, 1)]);
        assert!(AnsatzSpec::build(1, 1, &Topology::ChainClosed).is_err());
    }

    #[test]
    fn full_pairs() {
        let spec = AnsatzSpec::build(4, 2, &Topology::Full).unwrap();
        assert_eq!(spec.cz_layers()[0].len(), 6);
        assert_eq!(spec.cz_layers()[1][5], (2, 3));
    }

    #[test]
    fn single_qubit_custom() {
        let spec = AnsatzSpec::build(1, 3, &Topology::Custom(vec![vec![]; 3])).unwrap();
        assert_eq!(spec.n_params(), 6);
        assert!(spec.gates().all(|g| !matches!(g, Gate::Cz(..))));
    }

    #[test]
    fn custom_validation() {
        assert!(AnsatzSpec::build(2, 2, &Topology::Custom(vec![vec![(0, 1)]])).is_err());
        assert!(AnsatzSpec::build(2, 1, &Topology::Custom(vec![vec![(0, 0)]])).is_err());
        assert!(AnsatzSpec::build(2, 1, &Topology::Custom(vec![vec![(0, 2)]])).is_err());
        assert!(AnsatzSpec::build(0, 1, &Topology::Full).is_err());
        assert!(AnsatzSpec::build(2, 0, &Topology::Full).is_err());
    }

    #[test]
    fn topology_names_round_trip() {
        for t in ["chain_closed", "full", "custom:0-1 1-2;0-2"] {
            let parsed: Topology = t.parse().unwrap();
            assert_eq!(parsed.to_string(), t);
        }
        assert!("ring".parse::<Topology>().is_err());
        assert!("custom:0+1".parse::<Topology>().is_err());
    }

    #[test]
    fn parameter_indexing() {
        let spec = AnsatzSpec::build(4, 2, &Topology::ChainClosed).unwrap();
        assert_eq!(spec.param_index(1, 1).unwrap(), 0);
        assert_eq!(spec.param_index(2, 1).unwrap(), 4);
        assert_eq!(spec.param_index(4, 4).unwrap(), 15);
        assert!(spec.param_index(0, 1).is_err());
        assert!(spec.param_index(5, 1).is_err());
        assert!(spec.param_index(1, 5).is_err());
    }

    #[test]
    fn gate_trace_order() {
        let spec = AnsatzSpec::build(3, 2, &Topology::ChainClosed).unwrap();
        let trace: Vec<String> = spec
            .gates()
            .map(|g| match g {
                Gate::Cz(a, b) => format!("CZ{a}{b}"),
                Gate::Rx { qubit, param } => format!("RX{qubit}:{param}"),
                Gate::Ry { qubit, param } => format!("RY{qubit}:{param}"),
            })
            .collect();
        let expected = [
            "CZ01", "CZ12", "CZ20", "RX0:0", "RX1:1", "RX2:2", "RY0:3", "RY1:4", "RY2:5",
            "CZ01", "CZ12", "CZ20", "RX0:6", "RX1:7", "RX2:8", "RY0:9", "RY1:10", "RY2:11",
        ];
        assert_eq!(trace, expected);
        // Every parameter index agrees with the 1-based (q, n) map.
        for g in spec.gates() {
            match g {
                Gate::Rx { qubit, param } => {
                    let q = param / 3 + 1;
                    assert_eq!(q % 2, 1);
                    assert_eq!(spec.param_index(q, qubit + 1).unwrap(), param);
                }
                Gate::Ry { qubit, param } => {
                    let q = param / 3 + 1;
                    assert_eq!(q % 2, 0);
                    assert_eq!(spec.param_index(q, qubit + 1).unwrap(), param);
                }
                Gate::Cz(..) => {}
            }
        }
    }

    #[test]
    fn build_is_deterministic() {
        let a = AnsatzSpec::build(5, 2, &Topology::Full).unwrap();
        let b = AnsatzSpec::build(5, 2, &Topology::Full).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn param_vector_rejects_non_finite() {
        assert!(ParamVector::new(vec![0.0, f64::NAN]).is_err());
        assert!(ParamVector::new(vec![0.0, f64::INFINITY]).is_err());
        assert_eq!(ParamVector::zeros(3).len(), 3);
    }
}
