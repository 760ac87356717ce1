//! Gradient-norm lower bounds and their depth-optimized limits.

use std::f64::consts::{E, PI};

use pqclab::bounds::{bound_theorem2_optimized, floor_theorem1, g_theorem1, reports_for, theorem2_limit_sequence};
use pqclab::init::solve_a_theorem1;
use pqclab::pauli::{heisenberg_chain, zz_chain};

fn main() -> pqclab::Result<()> {
    for (name, h) in [("zz", zz_chain(6)?), ("heisenberg", heisenberg_chain(6)?)] {
        println!("{name} chain, N=6, L=8:");
        for r in reports_for(&h, 8)? {
            println!("  theorem {:<6} a={:<10.6} bound={:.4e}", r.theorem, r.a.unwrap_or(f64::NAN), r.bound);
        }
    }

    // At the solved a, g decreases in L towards (2N-3)/e.
    println!("\nN=6, floor (2N-3)/e = {:.6}", floor_theorem1(6));
    for l in [1, 2, 4, 8, 16, 32, 64] {
        let x = (solve_a_theorem1(l)? * PI).powi(2);
        println!("  L={l:>2}: g = {:.6}", g_theorem1(6, l, x));
    }

    println!("\nS=2 optimized bound ratio between L and 2L (limit 2^-S = 0.25):");
    for l in [4, 16, 64, 256] {
        let ratio = bound_theorem2_optimized(15, 2, 2 * l)? / bound_theorem2_optimized(15, 2, l)?;
        println!("  L={l:>3}: {ratio:.5}");
    }
    println!("\nS=2 limit sequence, decreasing towards e^-(S+1) = {:.6}:", E.powi(-3));
    for l in [2, 8, 32, 64] {
        println!("  L={l:>2}: {:.6}", theorem2_limit_sequence(2, l));
    }
    Ok(())
}
