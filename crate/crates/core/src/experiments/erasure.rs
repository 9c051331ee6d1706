use serde::{Deserialize, Serialize};

use super::{binomial_stderr, run_trials, trial_rng, ExperimentConfig, Protocol};
use crate::error::{Error, Result};
use crate::interference::{swap_report, SwapReport};
use crate::qcore::{sample, Operator, Partition, StateVector};
use crate::spinlab::SpinValue;
use crate::toolate::{oracle_conditional_state, prepare_joint, JointState, PATH_DIM, SPIN_DIM};

/// Monte Carlo check of one erasure success probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledSuccess {
    pub condition: String,
    pub exact: f64,
    pub successes: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErasureReport {
    #[serde(flatten)]
    pub swap: SwapReport,
    pub sampled: Vec<SampledSuccess>,
}

/// `{P, I − P}` with `P` projecting both paths onto the uniform vector.
fn erasure_partition() -> Result<Partition> {
    let local = Operator::projector(&StateVector::uniform(PATH_DIM))?.kron(&Operator::identity(SPIN_DIM));
    let p = local.kron(&local);
    let rest = Operator::identity(p.dim()).sub(&p)?;
    Partition::new(vec![p, rest])
}

/// Erasure on the prepared pair and each value-conditioned pair. With
/// `trials > 0`, each condition is also sampled `trials` times with the
/// two-outcome erasure measurement.
pub fn run_erasure(config: &ExperimentConfig) -> Result<ErasureReport> {
    if config.protocol != Protocol::Erasure {
        return Err(Error::Config(format!("run_erasure called with {:?}", config.protocol)));
    }
    config.validate()?;
    let layout = config.layout()?;
    let swap = swap_report(&layout)?;
    let n = config.trials;
    let mut sampled = Vec::new();
    if n > 0 {
        let partition = erasure_partition()?;
        let mut states: Vec<JointState> = vec![prepare_joint(&layout)];
        for va in SpinValue::BOTH {
            for vb in SpinValue::BOTH {
                states.push(oracle_conditional_state(va, vb, &layout)?);
            }
        }
        for (k, (row, state)) in swap.rows.iter().zip(&states).enumerate() {
            let first = k as u64 * n;
            let hits = run_trials(first, n, |t| -> Result<u64> {
                let mut rng = trial_rng(config.master_seed, t);
                Ok((sample(state.state(), &partition, &mut rng)?.0 == 0) as u64)
            })
            .into_iter()
            .sum::<Result<u64>>()?;
            let estimate = hits as f64 / n as f64;
            sampled.push(SampledSuccess {
                condition: row.condition.clone(),
                exact: row.success_prob,
                successes: hits,
                estimate,
                stderr: binomial_stderr(estimate, n),
                n,
            });
        }
    }
    Ok(ErasureReport { swap, sampled })
}
