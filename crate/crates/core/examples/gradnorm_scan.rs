//! Monte Carlo gradient norms under uniform, Gaussian and reduced-domain starts.

use pqclab::bounds::{bound_theorem1, floor_theorem1};
use pqclab::gradient::mc_grad_norm_sq;
use pqclab::init::{gaussian_sigma_default, solve_a_theorem1};
use pqclab::pauli::zz_chain;
use pqclab::{AnsatzSpec, InitSpec, Topology};

fn main() -> pqclab::Result<()> {
    let samples = 200;
    println!("{:>2} {:>3} {:>22} {:>22} {:>22} {:>9}", "N", "L", "uniform", "gaussian", "reduced", "floor");
    for n in [2, 4, 6] {
        let l = 5 * n;
        let spec = AnsatzSpec::build(n, l, &Topology::ChainClosed)?;
        let h = zz_chain(n)?;
        let a = solve_a_theorem1(l)?;
        let inits = [
            InitSpec::Uniform,
            InitSpec::Gaussian { sigma2: gaussian_sigma_default(2, l) },
            InitSpec::Reduced { a },
        ];
        let mut cells = Vec::new();
        for init in &inits {
            let e = mc_grad_norm_sq(&spec, &h, init, samples, 1)?;
            cells.push(format!("{:.3} +- {:.3}", e.mean, e.stderr));
        }
        println!(
            "{n:>2} {l:>3} {:>22} {:>22} {:>22} {:>9.4}",
            cells[0],
            cells[1],
            cells[2],
            floor_theorem1(n)
        );
        println!("       bound at a={a:.4}: {:.4}", bound_theorem1(n, l, a)?);
    }
    Ok(())
}
