//! Erasing which-path information after the value stage.

use toolate_sim::experiments::{run_erasure, ExperimentConfig, Protocol};

fn main() -> toolate_sim::Result<()> {
    let config = ExperimentConfig {
        trials: 10_000,
        master_seed: 3,
        ..ExperimentConfig::new(Protocol::Erasure)
    };
    let r = run_erasure(&config)?;
    println!("{:<10} {:>9} {:>9} {:>9}", "condition", "success", "bits", "fidelity");
    for row in &r.swap.rows {
        println!(
            "{:<10} {:>9.5} {:>9.5} {:>9.5}",
            row.condition, row.success_prob, row.entanglement_bits, row.fidelity_to_singlet
        );
    }
    let c = &r.swap.contrast;
    println!(
        "{}: success {:.5}, max bits {:.5}",
        c.model, c.values.success_prob, c.values.max_entanglement_bits
    );
    for s in &r.sampled {
        println!(
            "{:<10} sampled {:.4} ± {:.4} (exact {:.4})",
            s.condition, s.estimate, s.stderr, s.exact
        );
    }
    Ok(())
}
