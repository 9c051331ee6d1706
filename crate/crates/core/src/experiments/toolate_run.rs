use serde::{Deserialize, Serialize};

use super::{binomial_stderr, run_trials, trial_rng, EstimateRow, EstimateTable, ExperimentConfig, Protocol};
use crate::error::{Error, Result};
use crate::spinlab::{SpinValue, TRINE_LABELS};
use crate::toolate::{
    exit_index, joint_distribution, prepare_joint, Apparatus, ExitLabel, JointTable, Particle, EXITS,
};

/// Protocol stages in the order they are executed within a trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// t1: both particles pass their beam splitter.
    BeamSplit,
    /// t2: spin values measured on all paths at once.
    Value,
    /// t3: detectors reveal the orientation.
    Orientation,
}

/// One trial of the value-first protocol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub trial: u64,
    pub seed: u64,
    pub stages: [Stage; 3],
    pub value_a: SpinValue,
    pub value_b: SpinValue,
    pub exit_a: ExitLabel,
    pub exit_b: ExitLabel,
}

/// The JSON-lines form: `trial,seed,value_A,value_B,orient_A,orient_B`.
#[derive(Serialize)]
struct RecordLine<'a> {
    trial: u64,
    seed: u64,
    #[serde(rename = "value_A")]
    value_a: SpinValue,
    #[serde(rename = "value_B")]
    value_b: SpinValue,
    #[serde(rename = "orient_A")]
    orient_a: &'a str,
    #[serde(rename = "orient_B")]
    orient_b: &'a str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToolateRun {
    pub table: EstimateTable,
    pub records: Vec<OutcomeRecord>,
    /// Exact single-shot exit-pair table of the prepared pair.
    pub exact: JointTable,
}

impl ToolateRun {
    pub fn records_jsonl(&self, config: &ExperimentConfig) -> Result<String> {
        let trine = config.trine()?;
        let name = |e: &ExitLabel| -> Result<&'static str> {
            trine
                .index_of(e.orientation)
                .map(|i| TRINE_LABELS[i])
                .ok_or(Error::OrientationNotInTrine(e.orientation.theta()))
        };
        let mut out = String::new();
        for r in &self.records {
            let line = RecordLine {
                trial: r.trial,
                seed: r.seed,
                value_a: r.value_a,
                value_b: r.value_b,
                orient_a: name(&r.exit_a)?,
                orient_b: name(&r.exit_b)?,
            };
            out.push_str(&serde_json::to_string(&line)?);
            out.push('\n');
        }
        Ok(out)
    }
}

fn one_trial(app: &Apparatus, config: &ExperimentConfig, trial: u64) -> Result<OutcomeRecord> {
    let seed = super::mix64(config.master_seed, trial);
    let mut rng = trial_rng(config.master_seed, trial);
    // t1
    let state = prepare_joint(app.layout());
    // t2
    let (value_a, state, _) = app.measure_value(&state, Particle::A, &mut rng)?;
    let (value_b, state, _) = app.measure_value(&state, Particle::B, &mut rng)?;
    // t3
    let (exit_a, state) = app.measure_orientation(&state, Particle::A, &mut rng)?;
    let (exit_b, _) = app.measure_orientation(&state, Particle::B, &mut rng)?;
    Ok(OutcomeRecord {
        trial,
        seed,
        stages: [Stage::BeamSplit, Stage::Value, Stage::Orientation],
        value_a,
        value_b,
        exit_a,
        exit_b,
    })
}

fn value_label(va: SpinValue, vb: SpinValue) -> String {
    format!("P(vA={va};vB={vb})")
}

fn conditional_label(oa: usize, ob: usize, va: SpinValue, vb: SpinValue) -> String {
    format!("P(oA={};oB={}|{va};{vb})", TRINE_LABELS[oa], TRINE_LABELS[ob])
}

/// Value-first protocol: beam split, value stage on both particles,
/// orientation stage on both. Tabulates value-pair frequencies, the
/// orientation-pair table conditioned on each value pair, and the
/// orientation marginals, each against its exact value.
pub fn run_toolate(config: &ExperimentConfig) -> Result<ToolateRun> {
    if config.protocol != Protocol::Toolate {
        return Err(Error::Config(format!("run_toolate called with {:?}", config.protocol)));
    }
    config.validate()?;
    let layout = config.layout()?;
    let trine = layout.trine;
    let app = Apparatus::new(&layout)?;
    let exact = joint_distribution(&prepare_joint(&layout))?;

    let records = run_trials(0, config.trials, |t| one_trial(&app, config, t))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    // counts[exit_A][exit_B]
    let mut counts = [[0u64; EXITS]; EXITS];
    for r in &records {
        debug_assert_eq!(r.exit_a.value, r.value_a);
        debug_assert_eq!(r.exit_b.value, r.value_b);
        counts[exit_index(&trine, &r.exit_a)?][exit_index(&trine, &r.exit_b)?] += 1;
    }
    let n = config.trials;
    let sampled = n > 0;

    let mut table = EstimateTable::default();
    let value_total = |table: &[[f64; EXITS]; EXITS], va: SpinValue, vb: SpinValue| -> f64 {
        (0..3)
            .flat_map(|oa| (0..3).map(move |ob| (oa, ob)))
            .map(|(oa, ob)| table[2 * oa + va.index()][2 * ob + vb.index()])
            .sum()
    };
    let countf = counts.map(|row| row.map(|c| c as f64));

    for va in SpinValue::BOTH {
        for vb in SpinValue::BOTH {
            let mut row = EstimateRow::exact(value_label(va, vb), value_total(&exact, va, vb));
            if sampled {
                let p = value_total(&countf, va, vb) / n as f64;
                row = row.with_estimate(p, binomial_stderr(p, n), n);
            }
            table.push(row);
        }
    }
    for va in SpinValue::BOTH {
        for vb in SpinValue::BOTH {
            let pv = value_total(&exact, va, vb);
            let nv = value_total(&countf, va, vb) as u64;
            for oa in 0..3 {
                for ob in 0..3 {
                    let (ea, eb) = (2 * oa + va.index(), 2 * ob + vb.index());
                    let mut row = EstimateRow::exact(conditional_label(oa, ob, va, vb), exact[ea][eb] / pv);
                    if sampled && nv > 0 {
                        let p = countf[ea][eb] / nv as f64;
                        row = row.with_estimate(p, binomial_stderr(p, nv), nv);
                    }
                    table.push(row);
                }
            }
        }
    }
    for (particle, name) in [(0usize, "oA"), (1, "oB")] {
        for o in 0..3 {
            let marginal = |t: &[[f64; EXITS]; EXITS]| -> f64 {
                let mut s = 0.0;
                for a in 0..EXITS {
                    for b in 0..EXITS {
                        let exit = if particle == 0 { a } else { b };
                        if exit / 2 == o {
                            s += t[a][b];
                        }
                    }
                }
                s
            };
            let mut row = EstimateRow::exact(format!("P({name}={})", TRINE_LABELS[o]), marginal(&exact));
            if sampled {
                let p = marginal(&countf) / n as f64;
                row = row.with_estimate(p, binomial_stderr(p, n), n);
            }
            table.push(row);
        }
    }
    Ok(ToolateRun { table, records, exact })
}
