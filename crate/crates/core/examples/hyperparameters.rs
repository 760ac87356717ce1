//! Choosing the reduced-domain parameter a and the Gaussian variance.

use pqclab::bounds::moments;
use pqclab::init::{gaussian_sigma_default, solve_a_theorem1, solve_a_theorem2, solve_a_theorem3_edge};

fn main() -> pqclab::Result<()> {
    println!("{:>4} {:>10} {:>10} {:>10}", "L", "a (ZZ)", "a (S=2)", "sigma^2");
    for l in [2, 4, 8, 16, 32, 64] {
        println!(
            "{l:>4} {:>10.6} {:>10.6} {:>10.6}",
            solve_a_theorem1(l)?,
            solve_a_theorem2(2, l)?,
            gaussian_sigma_default(2, l)
        );
    }
    let a = solve_a_theorem1(8)?;
    let m = moments(a)?;
    println!("L=8: a={a:.4}, alpha={:.6}, beta={:.6}, gamma={:.6}", m.alpha, m.beta, m.gamma);

    // The edge-qubit rule asks sinc to exceed 1, which has no solution.
    match solve_a_theorem3_edge(2) {
        Ok(a) => println!("unexpected a = {a}"),
        Err(e) => println!("edge rule at L=2: {e}"),
    }
    Ok(())
}
