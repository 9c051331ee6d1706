//! Eigenvalues of small Hermitian matrices.
//!
//! 2×2 uses the closed form. Larger matrices are mapped to the real symmetric
//! embedding `[[Re H, −Im H], [Im H, Re H]]`, whose spectrum is the spectrum
//! of `H` with every eigenvalue doubled, and diagonalized by cyclic Jacobi
//! rotations.

use super::C64;

const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues of the Hermitian matrix `h` (row-major, `n×n`), ascending.
/// Only the lower triangle's Hermitian partner is trusted implicitly; the
/// input should already be Hermitian.
pub fn hermitian_eigenvalues(n: usize, h: &[C64]) -> Vec<f64> {
    assert_eq!(h.len(), n * n, "matrix is not {n}×{n}");
    match n {
        0 => Vec::new(),
        1 => vec![h[0].re],
        2 => {
            let (a, d) = (h[0].re, h[3].re);
            let b = h[1];
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - r, mean + r]
        }
        _ => {
            let m = 2 * n;
            let mut real = vec![0.0; m * m];
            for i in 0..n {
                for j in 0..n {
                    let z = h[i * n + j];
                    real[i * m + j] = z.re;
                    real[(i + n) * m + j + n] = z.re;
                    real[i * m + j + n] = -z.im;
                    real[(i + n) * m + j] = z.im;
                }
            }
            let doubled = symmetric_jacobi_eigenvalues(m, real);
            doubled.into_iter().step_by(2).collect()
        }
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps, ascending.
pub fn symmetric_jacobi_eigenvalues(n: usize, mut a: Vec<f64>) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cos = 1.0 / (t * t + 1.0).sqrt();
                let sin = t * cos;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cos * akp - sin * akq;
                    a[k * n + q] = sin * akp + cos * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cos * apk - sin * aqk;
                    a[q * n + k] = sin * apk + cos * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::c;

    #[test]
    fn two_by_two_closed_form() {
        // Pauli-Y has eigenvalues ±1.
        let y = [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
        let e = hermitian_eigenvalues(2, &y);
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_matrix() {
        let mut h = vec![c(0.0, 0.0); 9];
        h[0] = c(3.0, 0.0);
        h[4] = c(-1.0, 0.0);
        h[8] = c(0.5, 0.0);
        assert_eq!(hermitian_eigenvalues(3, &h), vec![-1.0, 0.5, 3.0]);
    }

    #[test]
    fn jacobi_agrees_with_closed_form() {
        let h = [c(0.7, 0.0), c(0.2, -0.3), c(0.2, 0.3), c(0.3, 0.0)];
        let closed = hermitian_eigenvalues(2, &h);
        let mut real = vec![0.0; 16];
        for i in 0..2 {
            for j in 0..2 {
                let z = h[i * 2 + j];
                real[i * 4 + j] = z.re;
                real[(i + 2) * 4 + j + 2] = z.re;
                real[i * 4 + j + 2] = -z.im;
                real[(i + 2) * 4 + j] = z.im;
            }
        }
        let jac: Vec<f64> = symmetric_jacobi_eigenvalues(4, real).into_iter().step_by(2).collect();
        for (a, b) in closed.iter().zip(&jac) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
