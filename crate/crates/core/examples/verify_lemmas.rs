//! Numerical checks of the moment identities, the two lemmas and the CZ rules.

use pqclab::bounds::{lemma1_check, lemma2_check, lemma_moment_oracle, moment_residual, moments, LemmaTrial};
use pqclab::pauli::{cz_table_residual, CZ_TABLE};
use pqclab::SeededRng;

fn main() -> pqclab::Result<()> {
    for a in [0.1, 0.5, 1.0] {
        let q = lemma_moment_oracle(a)?;
        let m = moments(a)?;
        println!(
            "a={a}: E[cos^2]={:.12} alpha={:.12} E[cos]={:.12} gamma={:.12} residual {:.1e}",
            q.e_cos2,
            m.alpha,
            q.e_cos,
            m.gamma,
            moment_residual(a)?
        );
    }
    let mut worst = (0.0f64, 0.0f64);
    for t in 0..25 {
        let trial = LemmaTrial::random(&mut SeededRng::new(2, t));
        for a in [0.1, 0.5, 1.0] {
            worst.0 = worst.0.max(lemma1_check(a, &trial)?);
            worst.1 = worst.1.max(lemma2_check(a, &trial)?);
        }
    }
    println!("25 random trials: lemma 1 residual {:.1e}, lemma 2 residual {:.1e}", worst.0, worst.1);

    let mut broken = CZ_TABLE;
    broken.entries[1][2].2 = !broken.entries[1][2].2;
    println!("CZ table residual: built-in {:.1e}, with one sign flipped {:.1e}", cz_table_residual(&CZ_TABLE), cz_table_residual(&broken));
    Ok(())
}
