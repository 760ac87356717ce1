//! Trainability laboratory for parameterized quantum circuits.
//!
//! The crate simulates the hardware-efficient ansatz built from blocks of
//! (CZ layer, RX layer, RY layer) exactly on a statevector, evaluates Pauli-sum
//! cost functions and their gradients, and studies how the initial parameter
//! distribution controls the gradient norm at the first training step.
//!
//! Main pieces:
//!
//! - [`pauli`]: Pauli strings, Hamiltonians, CZ conjugation rules.
//! - [`ansatz`]: circuit layout and parameter indexing.
//! - [`statevector`]: exact simulation, cost and adjoint gradient.
//! - [`init`]: initialization strategies and hyperparameter solvers.
//! - [`bounds`]: closed-form gradient-norm lower bounds and moment identities.
//! - [`gradient`]: parameter-shift oracle and Monte Carlo estimators.
//! - [`training`]: RMSProp, VQE training, the closed-form QNN loss, ground energies.
//! - [`experiment`]: configuration, CSV output and the experiment drivers behind
//!   the `pqclab` binary.

pub mod ansatz;
pub mod bounds;
pub mod error;
pub mod experiment;
pub mod gradient;
pub mod init;
pub mod pauli;
pub mod quadrature;
pub mod statevector;
pub mod training;

#[cfg(test)]
mod proptests;

pub use ansatz::{AnsatzSpec, ParamVector, Topology};
pub use error::{Error, Result};
pub use init::{InitSpec, SeededRng};
pub use pauli::{Hamiltonian, PauliString};
pub use statevector::StateVector;
