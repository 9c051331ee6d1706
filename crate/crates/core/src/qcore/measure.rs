use std::ops::Range;

use rand::Rng;

use super::{apply_local, Layout, Operator, StateVector, TOLERANCE, ZERO_PROBABILITY};
use crate::error::{Error, Result};

/// Born probability of `p` on `state` and the renormalized post-measurement
/// state.
pub fn project(p: &Operator, state: &StateVector) -> Result<(f64, StateVector)> {
    debug_assert!(p.is_projector(TOLERANCE), "not a projector");
    collapse(p.apply(state)?)
}

/// Like [`project`] but with `p` acting on `target` factors of `layout`.
pub fn project_on(
    p: &Operator,
    state: &StateVector,
    layout: &Layout,
    target: Range<usize>,
) -> Result<(f64, StateVector)> {
    collapse(apply_local(p, state, layout, target)?)
}

fn collapse(mut projected: StateVector) -> Result<(f64, StateVector)> {
    let prob = projected.norm_sqr();
    if prob <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(prob));
    }
    projected.normalize()?;
    Ok((prob.min(1.0), projected))
}

/// A complete set of mutually orthogonal projectors, checked once at
/// construction.
#[derive(Clone, Debug)]
pub struct Partition {
    projectors: Vec<Operator>,
}

impl Partition {
    pub fn new(projectors: Vec<Operator>) -> Result<Self> {
        let Some(first) = projectors.first() else {
            return Err(Error::InvalidPartition("no projectors".into()));
        };
        let dim = first.dim();
        let mut total = Operator::zeros(dim);
        for (i, p) in projectors.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::InvalidPartition(format!("projector {i} has dim {}", p.dim())));
            }
            if !p.is_projector(TOLERANCE) {
                return Err(Error::InvalidPartition(format!("element {i} is not a projector")));
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                let overlap = p.matmul(q)?.max_abs_diff(&Operator::zeros(dim));
                if overlap > TOLERANCE {
                    return Err(Error::InvalidPartition(format!(
                        "elements {i} and {j} overlap ({overlap:e})"
                    )));
                }
            }
            total = total.add(p)?;
        }
        let defect = total.max_abs_diff(&Operator::identity(dim));
        if defect > TOLERANCE {
            return Err(Error::InvalidPartition(format!(
                "sum deviates from identity by {defect:e}"
            )));
        }
        Ok(Self { projectors })
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }
}

/// Draws one outcome of `partition` with Born weights. Consumes exactly one
/// `f64` from `rng`, so a fixed seed fixes the outcome sequence.
pub fn sample<R: Rng + ?Sized>(
    state: &StateVector,
    partition: &Partition,
    rng: &mut R,
) -> Result<(usize, StateVector)> {
    let branches = partition
        .projectors()
        .iter()
        .map(|p| p.apply(state))
        .collect::<Result<Vec<_>>>()?;
    pick(branches, rng)
}

/// [`sample`] with the partition acting on `target` factors of `layout`.
pub fn sample_on<R: Rng + ?Sized>(
    state: &StateVector,
    partition: &Partition,
    layout: &Layout,
    target: Range<usize>,
    rng: &mut R,
) -> Result<(usize, StateVector)> {
    let branches = partition
        .projectors()
        .iter()
        .map(|p| apply_local(p, state, layout, target.clone()))
        .collect::<Result<Vec<_>>>()?;
    pick(branches, rng)
}

fn pick<R: Rng + ?Sized>(branches: Vec<StateVector>, rng: &mut R) -> Result<(usize, StateVector)> {
    let probs: Vec<f64> = branches.iter().map(|b| b.norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    let u: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut chosen = None;
    for (i, &p) in probs.iter().enumerate() {
        if p <= ZERO_PROBABILITY {
            continue;
        }
        acc += p;
        chosen = Some(i);
        if u < acc {
            break;
        }
    }
    let index = chosen.ok_or(Error::ZeroProbability(total))?;
    let mut post = branches.into_iter().nth(index).expect("index in range");
    post.normalize()?;
    Ok((index, post))
}
