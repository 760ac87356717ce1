//! Pauli strings, Hamiltonians and CZ conjugation rules.

use pqclab::pauli::{cz_table_from_matrices, heisenberg_chain, parse_hamiltonian, zz_chain, CZ_TABLE};
use pqclab::{PauliString, StateVector};

fn main() -> pqclab::Result<()> {
    let h = parse_hamiltonian("# a 3-qubit example\n1.0 ZZI\n-0.5 IXY\n")?;
    println!("parsed {} terms on {} qubits, locality {}", h.n_terms(), h.n_qubits(), h.locality());
    print!("{}", h.to_text());

    // CZ on qubits (0, 1) maps X⊗I to X⊗Z and leaves Z strings alone.
    for word in ["XII", "YXI", "ZZZ", "YYI"] {
        let s = PauliString::from_word(word)?;
        println!("CZ(0,1) {word} CZ(0,1) = {}", s.cz_conjugate((0, 1))?.word());
    }

    let (derived, residual) = cz_table_from_matrices();
    println!("CZ table rebuilt from 4x4 matrices matches the built-in one: {} (residual {residual:.1e})", derived == CZ_TABLE);

    let psi = StateVector::zero_state(4)?;
    for (name, h) in [("zz", zz_chain(4)?), ("heisenberg", heisenberg_chain(4)?)] {
        println!("<0000| H_{name} |0000> = {}", psi.energy(&h)?);
    }
    Ok(())
}
