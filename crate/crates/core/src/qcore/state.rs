use serde::{Deserialize, Serialize};

use super::{C64, TOLERANCE};
use crate::error::{Error, Result};

/// A ket over a fixed computational basis.
///
/// Amplitudes are always finite. A `StateVector` is not forced to be
/// normalized because the literal constructors in [`crate::toolate`] need to
/// report the norm of expressions as written before renormalizing them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if let Some(index) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { amps })
    }

    /// Builds the state and rescales it to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let mut s = Self::new(amps)?;
        s.normalize()?;
        Ok(s)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero-dimensional state");
        Self {
            amps: vec![C64::new(0.0, 0.0); dim],
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut s = Self::zeros(dim);
        s.amps[index] = C64::new(1.0, 0.0);
        s
    }

    /// Uniform superposition with real positive amplitudes.
    pub fn uniform(dim: usize) -> Self {
        let a = 1.0 / (dim as f64).sqrt();
        Self {
            amps: vec![C64::new(a, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE {
            return Err(Error::ZeroProbability(n * n));
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(())
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_dim(other.dim())?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scaled(&self, k: C64) -> StateVector {
        Self {
            amps: self.amps.iter().map(|a| a * k).collect(),
        }
    }

    /// Amplitude-wise `self + k·other`.
    pub fn add_scaled(&mut self, k: C64, other: &StateVector) -> Result<()> {
        self.check_dim(other.dim())?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += k * b;
        }
        Ok(())
    }

    /// Kronecker product without any normalization requirement.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }

    /// Largest amplitude-wise deviation from `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: dim,
            });
        }
        Ok(())
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if !self.is_normalized(TOLERANCE) {
            return Err(Error::NotNormalized(self.norm_sqr()));
        }
        Ok(())
    }
}

/// `u ⊗ v` for normalized inputs, u-index outermost.
pub fn tensor(u: &StateVector, v: &StateVector) -> Result<StateVector> {
    u.require_normalized()?;
    v.require_normalized()?;
    Ok(u.kron(v))
}

/// Squared overlap `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}
