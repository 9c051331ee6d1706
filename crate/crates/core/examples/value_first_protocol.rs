//! Values first, orientations later: one trial step by step, then the
//! conditional orientation table.

use toolate_sim::experiments::{run_toolate, trial_rng, ExperimentConfig, Protocol};
use toolate_sim::toolate::{prepare_joint, Apparatus, ExitName, Particle};

fn main() -> toolate_sim::Result<()> {
    let config = ExperimentConfig {
        trials: 20_000,
        master_seed: 7,
        ..ExperimentConfig::new(Protocol::Toolate)
    };
    let layout = config.layout()?;
    let app = Apparatus::new(&layout)?;

    let mut rng = trial_rng(config.master_seed, 0);
    let state = prepare_joint(&layout);
    let (va, state, pa) = app.measure_value(&state, Particle::A, &mut rng)?;
    println!("t2: A reads {va} (p = {pa:.3})");
    let (vb, state, pb) = app.measure_value(&state, Particle::B, &mut rng)?;
    println!("t2: B reads {vb} (p = {pb:.3})");
    let (ea, state) = app.measure_orientation(&state, Particle::A, &mut rng)?;
    let (eb, _) = app.measure_orientation(&state, Particle::B, &mut rng)?;
    println!(
        "t3: A exits {}, B exits {}",
        ExitName(&layout.trine, &ea),
        ExitName(&layout.trine, &eb)
    );

    let run = run_toolate(&config)?;
    for row in run.table.rows.iter().filter(|r| r.label.ends_with("|up;up)")) {
        println!(
            "{:<28} exact {:.4}  sampled {:.4}",
            row.label,
            row.exact.unwrap(),
            row.estimate.unwrap_or(f64::NAN)
        );
    }
    let same = run
        .records
        .iter()
        .filter(|r| r.value_a == r.value_b && r.exit_a.orientation == r.exit_b.orientation)
        .count();
    println!("equal values with equal orientations: {same} of {}", run.records.len());
    Ok(())
}
