//! Global convergence of the closed-form QNN loss under uniform and reduced starts.

use pqclab::training::{count_qnn_minima, qnn_half_period, train_qnn, QnnModel, RmspropConfig};
use pqclab::InitSpec;

fn main() -> pqclab::Result<()> {
    println!("local minima per period: p=1 -> {}, p=2 -> {}", count_qnn_minima(1)?, count_qnn_minima(2)?);
    let rounds = 200;
    let inits = [
        ("uniform", qnn_half_period(&InitSpec::Uniform)),
        ("reduced a=0.1", qnn_half_period(&InitSpec::Reduced { a: 0.1 })),
        (
            "translated a=0.1",
            qnn_half_period(&InitSpec::Translated { a: 0.1, center: std::f64::consts::FRAC_PI_4 }),
        ),
    ];
    for p in [4, 8, 12] {
        let model = QnnModel::new(p)?;
        for (name, init) in &inits {
            let mut hits = 0;
            for r in 0..rounds {
                hits += train_qnn(&model, init, 200, RmspropConfig::qnn(), 11, r)?.converged as usize;
            }
            println!("p={p:>2} {name:<17} {hits}/{rounds} rounds reach the global minimum");
        }
    }
    Ok(())
}
