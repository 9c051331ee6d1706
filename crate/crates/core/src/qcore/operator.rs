use std::ops::Range;

use super::{Layout, StateVector, C64, TOLERANCE};
use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<C64>,
}

impl Operator {
    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| C64::new(if r == c { 1.0 } else { 0.0 }, 0.0))
    }

    /// `|ket⟩⟨bra|`
    pub fn outer(ket: &StateVector, bra: &StateVector) -> Result<Self> {
        ket.check_dim(bra.dim())?;
        let (k, b) = (ket.amps(), bra.amps());
        Ok(Self::from_fn(ket.dim(), |r, c| k[r] * b[c].conj()))
    }

    /// Rank-1 projector onto the (normalized) direction of `v`.
    pub fn projector(v: &StateVector) -> Result<Self> {
        let mut v = v.clone();
        v.normalize()?;
        Self::outer(&v, &v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[r * self.dim + c]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn matmul(&self, rhs: &Operator) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    entries[r * n + c] += a * rhs.entries[k * n + c];
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    pub fn kron(&self, rhs: &Operator) -> Self {
        let (m, n) = (self.dim, rhs.dim);
        Self::from_fn(m * n, |r, c| self.get(r / n, c / n) * rhs.get(r % n, c % n))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `self |state⟩` on the full register.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        state.check_dim(self.dim)?;
        let n = self.dim;
        let v = state.amps();
        let out = (0..n)
            .map(|r| self.entries[r * n..(r + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect();
        StateVector::new(out)
    }

    /// Identity-padded copy acting on `target` factors of `layout`.
    pub fn embed(&self, layout: &Layout, target: Range<usize>) -> Result<Self> {
        let (left, mid, right) = layout.split(target)?;
        if mid != self.dim {
            return Err(Error::DimensionMismatch {
                expected: mid,
                got: self.dim,
            });
        }
        Ok(Operator::identity(left).kron(self).kron(&Operator::identity(right)))
    }

    pub fn max_abs_diff(&self, rhs: &Operator) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint().matmul(self).expect("square");
        g.max_abs_diff(&Operator::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `P² = P` and `P† = P` within `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        let sq = self.matmul(self).expect("square");
        self.is_hermitian(tol) && sq.max_abs_diff(self) <= tol
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: dim,
            });
        }
        Ok(())
    }
}

/// Applies `op` to a contiguous run of factors, identity elsewhere.
/// No structural check is made on `op`.
pub fn apply_local(op: &Operator, state: &StateVector, layout: &Layout, target: Range<usize>) -> Result<StateVector> {
    state.check_dim(layout.total())?;
    let (left, mid, right) = layout.split(target)?;
    if op.dim() != mid {
        return Err(Error::DimensionMismatch {
            expected: mid,
            got: op.dim(),
        });
    }
    let src = state.amps();
    let mut out = vec![C64::new(0.0, 0.0); src.len()];
    for l in 0..left {
        for m in 0..mid {
            let row = &op.entries()[m * mid..(m + 1) * mid];
            for (k, &a) in row.iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let s = (l * mid + k) * right;
                let d = (l * mid + m) * right;
                for r in 0..right {
                    out[d + r] += a * src[s + r];
                }
            }
        }
    }
    StateVector::new(out)
}

/// `(I ⊗ U ⊗ I)|state⟩` with `U` on the `target` factors. `U` must be
/// unitary within the default tolerance.
pub fn apply_unitary(u: &Operator, state: &StateVector, layout: &Layout, target: Range<usize>) -> Result<StateVector> {
    let defect = u.unitarity_defect();
    if defect > TOLERANCE {
        return Err(Error::NotUnitary(defect));
    }
    apply_local(u, state, layout, target)
}
