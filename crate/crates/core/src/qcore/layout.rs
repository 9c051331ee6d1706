use std::ops::Range;

use crate::error::{Error, Result};

/// Factor dimensions of a composite register, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout(Vec<usize>);

impl Layout {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::LayoutMismatch(format!("bad factor dims {dims:?}")));
        }
        Ok(Self(dims))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn factors(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Splits the register into `(left, target, right)` dimensions for a
    /// contiguous run of factors.
    pub fn split(&self, target: Range<usize>) -> Result<(usize, usize, usize)> {
        if target.start >= target.end || target.end > self.0.len() {
            return Err(Error::LayoutMismatch(format!(
                "target factors {target:?} not inside {} factors",
                self.0.len()
            )));
        }
        let left = self.0[..target.start].iter().product();
        let mid = self.0[target.clone()].iter().product();
        let right = self.0[target.end..].iter().product();
        Ok((left, mid, right))
    }

    /// Mixed-radix digits of a flat index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }
}
