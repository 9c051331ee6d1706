//! Source-level models can copy any detector table; interference still
//! gives them away.

use toolate_sim::experiments::{run_lhv_compare, ExperimentConfig, Protocol};

fn main() -> toolate_sim::Result<()> {
    let r = run_lhv_compare(&ExperimentConfig::new(Protocol::LhvCompare))?;
    println!(
        "CHSH quantum {:.6}, local max {}, gap {:.6}",
        r.chsh.quantum, r.chsh.lhv_max, r.chsh.gap
    );
    for c in &r.conspiracy {
        println!(
            "{:<16} table distance {:.4}  ports {:?}  tv {:.4}  excluded {}",
            c.model,
            c.exit_table_tv,
            c.model_ports.probs(),
            c.discrimination.tv_distance,
            c.excluded
        );
    }
    Ok(())
}
