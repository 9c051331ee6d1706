//! Dense complex linear algebra for small quantum registers.
//!
//! Everything here is layout-agnostic: composite states are flat vectors in
//! row-major order (first factor outermost), and callers describe the factor
//! structure with a [`Layout`].

mod density;
mod eigen;
mod layout;
mod measure;
mod operator;
mod state;

pub use density::{entanglement_entropy, reduced_density, DensityMatrix};
pub use eigen::{hermitian_eigenvalues, symmetric_jacobi_eigenvalues};
pub use layout::Layout;
pub use measure::{project, project_on, sample, sample_on, Partition};
pub use operator::{apply_local, apply_unitary, Operator};
pub use state::{fidelity, tensor, StateVector};

pub use num_complex::Complex64 as C64;

/// Default numerical tolerance for structural checks (normalization,
/// unitarity, projector identities).
pub const TOLERANCE: f64 = 1e-10;

/// Outcomes with Born probability at or below this are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-12;

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
