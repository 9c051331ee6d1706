//! Seeded trials: same seed, same numbers, regardless of thread count.

use toolate_sim::experiments::{chi_square, mix64, run_toolate, ExperimentConfig, Protocol};
use toolate_sim::spinlab::SpinValue;

fn main() -> toolate_sim::Result<()> {
    let config = ExperimentConfig {
        trials: 40_000,
        master_seed: 99,
        ..ExperimentConfig::new(Protocol::Toolate)
    };
    println!("trial 0 seed {:#018x}", mix64(config.master_seed, 0));

    let run = run_toolate(&config)?;
    let again = run_toolate(&config)?;
    println!("rerun identical: {}", run == again);

    let mut counts = [0u64; 4];
    for r in &run.records {
        counts[r.value_a.index() * 2 + r.value_b.index()] += 1;
    }
    let fit = chi_square(&counts, &[0.25; 4])?;
    for (i, c) in counts.iter().enumerate() {
        println!("{}_{}: {c}", SpinValue::BOTH[i / 2], SpinValue::BOTH[i % 2]);
    }
    println!("chi-square {:.3} on {} df, p = {:.3}", fit.statistic, fit.df, fit.p);
    Ok(())
}
