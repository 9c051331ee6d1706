//! Local hidden-variable baselines.
//!
//! Two families:
//!
//! - [`DeterministicStrategy`]: each particle carries a pre-assigned ±1 for
//!   every setting it might be asked about. Mixtures of these are the
//!   classical models a CHSH test rules out.
//! - [`ConspiracyModel`]: the source fixes both orientations and both values
//!   per trial. Such a model can copy any exit-pair table, including the
//!   quantum one, so CHSH-style statistics cannot exclude it. Its paths are
//!   definite, which the interference test detects.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::{recombine, PortDistribution};
use crate::qcore::TOLERANCE;
use crate::spinlab::{chsh_combination, Orientation};
use crate::toolate::{exit_labels, exit_vector, JointTable, ParticleLayout, EXITS};

/// Pre-assigned ±1 answers for each particle, keyed by setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub a_settings: Vec<Orientation>,
    pub a_values: Vec<i8>,
    pub b_settings: Vec<Orientation>,
    pub b_values: Vec<i8>,
}

impl DeterministicStrategy {
    pub fn new(
        a_settings: Vec<Orientation>,
        a_values: Vec<i8>,
        b_settings: Vec<Orientation>,
        b_values: Vec<i8>,
    ) -> Result<Self> {
        if a_settings.len() != a_values.len() || b_settings.len() != b_values.len() {
            return Err(Error::Config("strategy must assign a value to every setting".into()));
        }
        if a_values.iter().chain(&b_values).any(|&v| v != 1 && v != -1) {
            return Err(Error::Config("strategy values must be ±1".into()));
        }
        Ok(Self {
            a_settings,
            a_values,
            b_settings,
            b_values,
        })
    }

    pub fn value_a(&self, o: Orientation) -> Option<i8> {
        self.a_settings.iter().position(|&s| s == o).map(|i| self.a_values[i])
    }

    pub fn value_b(&self, o: Orientation) -> Option<i8> {
        self.b_settings.iter().position(|&s| s == o).map(|i| self.b_values[i])
    }

    /// Product of the two pre-assigned answers.
    pub fn correlation(&self, a: Orientation, b: Orientation) -> Option<i32> {
        Some(self.value_a(a)? as i32 * self.value_b(b)? as i32)
    }

    /// Exact CHSH sum on the strategy's first two settings per side.
    pub fn chsh(&self) -> Option<i32> {
        let (a, a2) = (*self.a_settings.first()?, *self.a_settings.get(1)?);
        let (b, b2) = (*self.b_settings.first()?, *self.b_settings.get(1)?);
        Some(self.correlation(a, b)? - self.correlation(a, b2)? + self.correlation(a2, b)? + self.correlation(a2, b2)?)
    }
}

/// All `2⁴` strategies over `{a,a'} × {b,b'}`, in binary order.
pub fn all_chsh_strategies(
    a: Orientation,
    a2: Orientation,
    b: Orientation,
    b2: Orientation,
) -> Vec<DeterministicStrategy> {
    (0..16u8)
        .map(|bits| {
            let v = |k: u8| if bits >> k & 1 == 0 { 1 } else { -1 };
            DeterministicStrategy {
                a_settings: vec![a, a2],
                a_values: vec![v(0), v(1)],
                b_settings: vec![b, b2],
                b_values: vec![v(2), v(3)],
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshMax {
    /// Largest `|S|` over all strategies, in exact integer arithmetic.
    pub max_s: i32,
    pub argmax: DeterministicStrategy,
}

pub fn enumerate_chsh_max(a: Orientation, a2: Orientation, b: Orientation, b2: Orientation) -> ChshMax {
    all_chsh_strategies(a, a2, b, b2)
        .into_iter()
        .map(|s| {
            let v = s.chsh().expect("two settings per side").abs();
            (v, s)
        })
        .fold(None::<(i32, DeterministicStrategy)>, |best, (v, s)| match best {
            Some((bv, _)) if bv >= v => best,
            _ => Some((v, s)),
        })
        .map(|(max_s, argmax)| ChshMax { max_s, argmax })
        .expect("sixteen strategies")
}

/// Weighted mixture of deterministic strategies (shared randomness).
#[derive(Clone, Debug)]
pub struct StrategyMixture {
    strategies: Vec<DeterministicStrategy>,
    weights: WeightedIndex<f64>,
    raw_weights: Vec<f64>,
}

impl StrategyMixture {
    pub fn new(strategies: Vec<DeterministicStrategy>, weights: Vec<f64>) -> Result<Self> {
        if strategies.len() != weights.len() || strategies.is_empty() {
            return Err(Error::InvalidDistribution("one weight per strategy required".into()));
        }
        let index = WeightedIndex::new(&weights).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        Ok(Self {
            strategies,
            weights: index,
            raw_weights: weights,
        })
    }

    pub fn single(s: DeterministicStrategy) -> Self {
        Self::new(vec![s], vec![1.0]).expect("one positive weight")
    }

    pub fn strategies(&self) -> &[DeterministicStrategy] {
        &self.strategies
    }

    /// Exact mixture correlation.
    pub fn correlation(&self, a: Orientation, b: Orientation) -> Option<f64> {
        let total: f64 = self.raw_weights.iter().sum();
        let mut e = 0.0;
        for (s, w) in self.strategies.iter().zip(&self.raw_weights) {
            e += w * s.correlation(a, b)? as f64;
        }
        Some(e / total)
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> &DeterministicStrategy {
        &self.strategies[self.weights.sample(rng)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub a: Orientation,
    pub b: Orientation,
    pub estimate: f64,
    pub stderr: f64,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LhvEstimates {
    /// Ordered `(a,b), (a,b'), (a',b), (a',b')`.
    pub pairs: Vec<CorrelationEstimate>,
    pub s_estimate: f64,
    pub s_stderr: f64,
}

/// Monte Carlo CHSH run against a strategy mixture: `n` trials per setting
/// pair, each trial drawing one strategy.
pub fn lhv_epr_sample<R: Rng + ?Sized>(
    mixture: &StrategyMixture,
    angles: [Orientation; 4],
    rng: &mut R,
    n: u64,
) -> Result<LhvEstimates> {
    if n == 0 {
        return Err(Error::Config("lhv sampling needs at least one trial".into()));
    }
    let [a, a2, b, b2] = angles;
    let mut pairs = Vec::with_capacity(4);
    for (x, y) in [(a, b), (a, b2), (a2, b), (a2, b2)] {
        let mut sum = 0i64;
        for _ in 0..n {
            let s = mixture.draw(rng);
            sum += s
                .correlation(x, y)
                .ok_or_else(|| Error::Config(format!("strategy has no answer for ({x}, {y})")))?
                as i64;
        }
        let estimate = sum as f64 / n as f64;
        pairs.push(CorrelationEstimate {
            a: x,
            b: y,
            estimate,
            stderr: ((1.0 - estimate * estimate).max(0.0) / n as f64).sqrt(),
            n,
        });
    }
    let e: [f64; 4] = std::array::from_fn(|i| pairs[i].estimate);
    let s_stderr = pairs.iter().map(|p| p.stderr * p.stderr).sum::<f64>().sqrt();
    Ok(LhvEstimates {
        s_estimate: chsh_combination(e),
        s_stderr,
        pairs,
    })
}

/// Source-level joint distribution over exit pairs
/// `table[exit_A][exit_B]`, each exit fixing an orientation and a value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConspiracyModel {
    table: JointTable,
}

impl ConspiracyModel {
    pub fn new(table: JointTable) -> Result<Self> {
        let total: f64 = table.iter().flatten().sum();
        if table.iter().flatten().any(|&p| p.is_nan() || p < 0.0) || (total - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidDistribution(format!("conspiracy table sums to {total}")));
        }
        Ok(Self { table })
    }

    pub fn uniform() -> Self {
        Self {
            table: [[1.0 / (EXITS * EXITS) as f64; EXITS]; EXITS],
        }
    }

    pub fn table(&self) -> &JointTable {
        &self.table
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConspiracyPrediction {
    pub exit_table: JointTable,
    pub ports_a: PortDistribution,
    pub ports_b: PortDistribution,
}

/// What a conspiracy model predicts for detection and for recombination.
/// Each trial's particle sits in one definite exit, so recombination is the
/// weighted mixture of single-exit recombinations.
pub fn conspiracy_predictions(model: &ConspiracyModel, layout: &ParticleLayout) -> Result<ConspiracyPrediction> {
    let single: Vec<[f64; 3]> = exit_labels(&layout.trine)
        .iter()
        .map(|e| Ok(recombine(&exit_vector(layout, e)?)?.probs()))
        .collect::<Result<_>>()?;
    let mut ports_a = [0.0; 3];
    let mut ports_b = [0.0; 3];
    for (a, row) in model.table.iter().enumerate() {
        for (b, &w) in row.iter().enumerate() {
            for k in 0..3 {
                ports_a[k] += w * single[a][k];
                ports_b[k] += w * single[b][k];
            }
        }
    }
    Ok(ConspiracyPrediction {
        exit_table: model.table,
        ports_a: PortDistribution::new(ports_a)?,
        ports_b: PortDistribution::new(ports_b)?,
    })
}
