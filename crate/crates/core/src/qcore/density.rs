use super::{hermitian_eigenvalues, Layout, StateVector, C64, ZERO_PROBABILITY};
use crate::error::{Error, Result};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        state.require_normalized()?;
        let a = state.amps();
        let n = a.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(a[r] * a[c].conj());
            }
        }
        Ok(Self { dim: n, entries })
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

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// `Tr ρ²`; 1 for pure states.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.dim, &self.entries)
    }
}

/// Partial trace of `|state⟩⟨state|` over every factor not listed in `keep`.
/// Kept factors retain their relative order.
pub fn reduced_density(state: &StateVector, layout: &Layout, keep: &[usize]) -> Result<DensityMatrix> {
    state.check_dim(layout.total()).map_err(|_| {
        Error::LayoutMismatch(format!(
            "layout {:?} has {} states, vector has {}",
            layout.dims(),
            layout.total(),
            state.dim()
        ))
    })?;
    let dims = layout.dims();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::LayoutMismatch(format!(
            "keep {keep:?} outside {} factors",
            dims.len()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let kdim: usize = kept.iter().map(|&i| dims[i]).product();
    let tdim: usize = traced.iter().map(|&i| dims[i]).product();

    // Reshape ψ into M[k][t], then ρ = M M†.
    let mut m = vec![C64::new(0.0, 0.0); kdim * tdim];
    let radix = |digits: &[usize], which: &[usize]| which.iter().fold(0usize, |acc, &f| acc * dims[f] + digits[f]);
    for (i, a) in state.amps().iter().enumerate() {
        let d = layout.digits(i);
        m[radix(&d, &kept) * tdim + radix(&d, &traced)] = *a;
    }
    let norm = state.norm_sqr();
    let mut entries = vec![C64::new(0.0, 0.0); kdim * kdim];
    for r in 0..kdim {
        for c in 0..kdim {
            let s: C64 = (0..tdim).map(|t| m[r * tdim + t] * m[c * tdim + t].conj()).sum();
            entries[r * kdim + c] = s / norm;
        }
    }
    Ok(DensityMatrix { dim: kdim, entries })
}

/// Von Neumann entropy in bits. Eigenvalues at or below `1e-12` contribute 0.
pub fn entanglement_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > ZERO_PROBABILITY)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}
