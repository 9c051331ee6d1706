//! Audits the written single-particle, pair and pre-value states against
//! states derived from the prepared singlet.

use toolate_sim::toolate::{verify_states, ParticleLayout};

fn main() -> toolate_sim::Result<()> {
    let report = verify_states(&ParticleLayout::default())?;
    for e in &report.equations {
        println!(
            "{:<12} written norm {:.12}  fidelity {:.12}",
            e.name, e.literal_norm, e.fidelity_vs_oracle
        );
    }
    println!("\nprepared pair in the exit basis:");
    for entry in report.amplitude_table.iter().filter(|e| e.magnitude > 1e-12) {
        println!("  {:<11} {:<11} {:+.5}", entry.exit_a, entry.exit_b, entry.re);
    }
    println!("\nzero checks pass: {}", report.zero_checks_pass());
    for note in &report.notes {
        println!("note: {note}");
    }
    Ok(())
}
