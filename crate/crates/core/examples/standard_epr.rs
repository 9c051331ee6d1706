//! Singlet correlations at a few setting pairs, exact and sampled.

use toolate_sim::experiments::{run_epr, ExperimentConfig, Protocol};

fn main() -> toolate_sim::Result<()> {
    let config = ExperimentConfig {
        angles: Some([0.0f64, 90.0, 45.0, 135.0].map(f64::to_radians).to_vec()),
        trials: 50_000,
        master_seed: 2024,
        ..ExperimentConfig::new(Protocol::EprStandard)
    };
    let table = run_epr(&config)?;
    print!("{}", table.to_csv());
    for row in &table.rows {
        println!("{:<24} within 3 sigma: {}", row.label, row.within(3.0));
    }
    Ok(())
}
