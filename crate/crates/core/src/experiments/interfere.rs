use rand::distributions::{Distribution, WeightedIndex};
use serde::{Deserialize, Serialize};

use super::{binomial_stderr, chi_square, run_trials, trial_rng, ChiSquare, ExperimentConfig, Protocol};
use crate::error::{Error, Result};
use crate::interference::{interference_discriminator, recombine, Discrimination, PortDistribution, Verdict};
use crate::lhv::{conspiracy_predictions, ConspiracyModel};
use crate::qcore::{apply_unitary, sample_on, Operator, Partition, StateVector};
use crate::spinlab::SpinValue;
use crate::toolate::{
    exit_labels, exit_vector, joint_distribution, literal_single, particle_register, prepare_joint, three_port_bs,
    EXITS, PATH_DIM,
};

/// Significance, in standard errors, required of a sampled port difference.
pub const SAMPLED_SIGMAS: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortSample {
    pub counts: [u64; 3],
    pub frequencies: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledDiscrimination {
    pub n: u64,
    pub quantum: PortSample,
    pub model: PortSample,
    /// Largest per-port difference in units of its standard error.
    pub max_z: f64,
    pub sigmas: f64,
    pub verdict: Verdict,
    /// Quantum counts tested against the uniform spread of a definite path;
    /// absent when too few trials leave no testable cells.
    pub quantum_vs_uniform: Option<ChiSquare>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterferenceReport {
    /// Ports of the single-particle up-conditioned state.
    pub quantum: PortDistribution,
    /// Ports predicted by a source-level model copying the prepared exit table.
    pub model: PortDistribution,
    pub exact: Discrimination,
    pub sampled: Option<SampledDiscrimination>,
    pub notes: Vec<String>,
}

fn port_partition() -> Result<Partition> {
    Partition::new(
        (0..PATH_DIM)
            .map(|k| Operator::projector(&StateVector::basis(PATH_DIM, k)))
            .collect::<Result<_>>()?,
    )
}

fn port_sample(ports: &[usize]) -> PortSample {
    let mut counts = [0u64; 3];
    for &p in ports {
        counts[p] += 1;
    }
    let n = ports.len().max(1) as f64;
    PortSample {
        counts,
        frequencies: counts.map(|c| c as f64 / n),
    }
}

/// Recombination test: the up-conditioned single-particle state against a
/// definite-path model with the same detector statistics.
///
/// With `trials > 0` both sides are also sampled, `trials` each. Quantum
/// trials measure the port after the inverse splitter; model trials draw an
/// exit pair from the table and recombine particle A's exit.
pub fn run_interference(config: &ExperimentConfig) -> Result<InterferenceReport> {
    if config.protocol != Protocol::Interference {
        return Err(Error::Config(format!(
            "run_interference called with {:?}",
            config.protocol
        )));
    }
    config.validate()?;
    let layout = config.layout()?;
    let single = literal_single(SpinValue::Up, &layout)?;
    let quantum = recombine(&single.state)?;
    let model = ConspiracyModel::new(joint_distribution(&prepare_joint(&layout))?)?;
    let predicted = conspiracy_predictions(&model, &layout)?;
    let exact = interference_discriminator(&quantum, &predicted.ports_a, config.threshold);

    let n = config.trials;
    let sampled = if n == 0 {
        None
    } else {
        let register = particle_register();
        let inverse = three_port_bs().adjoint();
        let rotate = |s: &StateVector| apply_unitary(&inverse, s, &register, 0..1);
        let ports = port_partition()?;
        let q_state = rotate(&single.state)?;
        let exits = exit_labels(&layout.trine)
            .iter()
            .map(|e| rotate(&exit_vector(&layout, e)?))
            .collect::<Result<Vec<_>>>()?;
        let pair_weights = WeightedIndex::new(model.table().iter().flatten().copied())
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;

        let draw = |s: &StateVector, rng: &mut rand_chacha::ChaCha8Rng| -> Result<usize> {
            Ok(sample_on(s, &ports, &register, 0..1, rng)?.0)
        };
        let q = run_trials(0, n, |t| draw(&q_state, &mut trial_rng(config.master_seed, t)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let m = run_trials(n, n, |t| {
            let mut rng = trial_rng(config.master_seed, t);
            let pair = pair_weights.sample(&mut rng);
            draw(&exits[pair / EXITS], &mut rng)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

        let (quantum_s, model_s) = (port_sample(&q), port_sample(&m));
        let max_z = (0..3)
            .map(|k| {
                let (p, r) = (quantum_s.frequencies[k], model_s.frequencies[k]);
                let se = (binomial_stderr(p, n).powi(2) + binomial_stderr(r, n).powi(2)).sqrt();
                if se > 0.0 {
                    (p - r).abs() / se
                } else if p != r {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        Some(SampledDiscrimination {
            n,
            max_z,
            sigmas: SAMPLED_SIGMAS,
            verdict: if max_z > SAMPLED_SIGMAS {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            quantum_vs_uniform: match chi_square(&quantum_s.counts, &PortDistribution::UNIFORM.probs()) {
                Ok(c) => Some(c),
                Err(Error::AllCellsPooled) => None,
                Err(e) => return Err(e),
            },
            quantum: quantum_s,
            model: model_s,
        })
    };

    let notes = vec![
        "pass means the distributions are distinguishable, which excludes the definite-path model".to_string(),
        format!("single-particle state written with norm {:.15}", single.literal_norm),
    ];
    Ok(InterferenceReport {
        quantum,
        model: predicted.ports_a,
        exact,
        sampled,
        notes,
    })
}
