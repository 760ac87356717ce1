//! RMSProp VQE training on the ZZ chain from three initializations.

use pqclab::init::{gaussian_sigma_default, solve_a_theorem1};
use pqclab::pauli::zz_chain;
use pqclab::training::{ground_energy, train_vqe_rounds, RmspropConfig, VqeProblem};
use pqclab::{AnsatzSpec, InitSpec, Topology};

fn main() -> pqclab::Result<()> {
    let (n, l) = (6, 8);
    let h = zz_chain(n)?;
    println!("ground energy of the {n}-qubit ZZ chain: {}", ground_energy(&h)?);
    let problem = VqeProblem::new(AnsatzSpec::build(n, l, &Topology::ChainClosed)?, h)?;
    let inits = [
        InitSpec::Uniform,
        InitSpec::Gaussian { sigma2: gaussian_sigma_default(2, l) },
        InitSpec::Reduced { a: solve_a_theorem1(l)? },
    ];
    for init in &inits {
        let traces = train_vqe_rounds(&problem, init, 4, 200, RmspropConfig::vqe(), 3)?;
        let at = |k: usize| traces.iter().map(|t| t.records[k].relative_cost).sum::<f64>() / traces.len() as f64;
        println!(
            "{init:<28} mean gap: iter 0 {:.3e}, iter 20 {:.3e}, iter 200 {:.3e}; converged {}/{}",
            at(0),
            at(20),
            at(200),
            traces.iter().filter(|t| t.converged).count(),
            traces.len()
        );
    }
    Ok(())
}
