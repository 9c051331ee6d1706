//! Pearson chi-square with the tail from the regularized incomplete gamma
//! function, plus seed mixing for per-trial generators.

use crate::error::{Error, Result};

/// Cells whose expected count is below this are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_MAX_ITER: usize = 10_000;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under `master`: `splitmix64(master ^ splitmix64(trial))`.
/// Depends only on the pair, so trial scheduling cannot change results.
pub fn mix64(master: u64, trial: u64) -> u64 {
    splitmix64(master ^ splitmix64(trial))
}

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0, "shape must be positive");
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let log_prefix = -x + a * x.ln() - ln_gamma(a);
    if x < a + 1.0 {
        // Series for P(a, x).
        let mut ap = a;
        let mut term = 1.0 / a;
        let mut sum = term;
        for _ in 0..GAMMA_MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * GAMMA_EPS {
                break;
            }
        }
        (1.0 - sum * log_prefix.exp()).clamp(0.0, 1.0)
    } else {
        // Continued fraction for Q(a, x), modified Lentz.
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..GAMMA_MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < GAMMA_EPS {
                break;
            }
        }
        (log_prefix.exp() * h).clamp(0.0, 1.0)
    }
}

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
pub fn chi_square_sf(statistic: f64, df: usize) -> f64 {
    gamma_q(df as f64 / 2.0, statistic / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub p: f64,
    pub df: usize,
}

/// Pearson goodness-of-fit. Cells with `expected·n < 5` are pooled into one
/// cell; if that pool is itself below 5 it is merged into the smallest
/// retained cell. Observed counts in cells of zero expectation give an
/// infinite statistic.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Result<ChiSquare> {
    if observed.len() != expected.len() {
        return Err(Error::DimensionMismatch {
            expected: expected.len(),
            got: observed.len(),
        });
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(Error::InvalidDistribution("no observations".into()));
    }
    let total_p: f64 = expected.iter().sum();
    if expected.iter().any(|&p| p.is_nan() || p < 0.0) || (total_p - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "expected probabilities sum to {total_p}"
        )));
    }
    if observed.iter().zip(expected).any(|(&o, &p)| p == 0.0 && o > 0) {
        return Ok(ChiSquare {
            statistic: f64::INFINITY,
            p: 0.0,
            df: expected.len().saturating_sub(1),
        });
    }

    let nf = n as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pool = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected) {
        let e = p * nf;
        if e >= MIN_EXPECTED {
            cells.push((o as f64, e));
        } else {
            pool.0 += o as f64;
            pool.1 += e;
        }
    }
    if pool.1 >= MIN_EXPECTED {
        cells.push(pool);
    } else if pool.1 > 0.0 || pool.0 > 0.0 {
        if let Some(smallest) = cells.iter_mut().min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite")) {
            smallest.0 += pool.0;
            smallest.1 += pool.1;
        }
    }
    if cells.len() < 2 {
        return Err(Error::AllCellsPooled);
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let df = cells.len() - 1;
    Ok(ChiSquare {
        statistic,
        p: chi_square_sf(statistic, df),
        df,
    })
}
