//! Circuit layout, parameter indexing and a forward simulation.

use pqclab::statevector::{cost, run_circuit};
use pqclab::ansatz::Gate;
use pqclab::pauli::zz_chain;
use pqclab::{AnsatzSpec, ParamVector, Topology};

fn main() -> pqclab::Result<()> {
    let spec = AnsatzSpec::build(3, 2, &Topology::ChainClosed)?;
    println!("{} qubits, {} blocks, {} parameters", spec.n_qubits(), spec.n_blocks(), spec.n_params());
    for gate in spec.gates() {
        match gate {
            Gate::Cz(a, b) => println!("  CZ({a},{b})"),
            Gate::Rx { qubit, param } => println!("  RX(theta[{param}]) on {qubit}"),
            Gate::Ry { qubit, param } => println!("  RY(theta[{param}]) on {qubit}"),
        }
    }
    // Block q (1-based), qubit n (1-based).
    println!("theta_(q=2, n=3) is entry {}", spec.param_index(2, 3)?);

    let params = ParamVector::new((0..spec.n_params()).map(|i| 0.1 * i as f64).collect())?;
    let psi = run_circuit(&spec, &params)?;
    println!("norm after the circuit: {:.15}", psi.norm_sqr());
    println!("cost under the ZZ chain: {:.12}", cost(&spec, &params, &zz_chain(3)?)?);

    let full = AnsatzSpec::build(4, 1, &Topology::Full)?;
    println!("full topology on 4 qubits: {:?}", full.cz_layers()[0]);
    Ok(())
}
