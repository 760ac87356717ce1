//! Adjoint gradient against parameter-shift and central differences.

use pqclab::gradient::{central_difference_gradient, parameter_shift_gradient};
use pqclab::init::sample_params;
use pqclab::pauli::heisenberg_chain;
use pqclab::statevector::adjoint_gradient;
use pqclab::{AnsatzSpec, InitSpec, SeededRng, Topology};

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn main() -> pqclab::Result<()> {
    let spec = AnsatzSpec::build(5, 3, &Topology::ChainClosed)?;
    let h = heisenberg_chain(5)?;
    let params = sample_params(&spec, &InitSpec::Uniform, &mut SeededRng::new(7, 0))?;

    let adjoint = adjoint_gradient(&spec, &params, &h)?;
    let shift = parameter_shift_gradient(&spec, &params, &h)?;
    let fd = central_difference_gradient(&spec, &params, &h, 1e-5)?;
    println!("{} partial derivatives", adjoint.len());
    println!("first three (adjoint): {:?}", &adjoint[..3]);
    println!("max |adjoint - parameter shift| = {:.2e}", max_abs_diff(&adjoint, &shift));
    println!("max |adjoint - central diff|    = {:.2e}", max_abs_diff(&adjoint, &fd));
    Ok(())
}
