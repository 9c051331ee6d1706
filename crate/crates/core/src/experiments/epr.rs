use super::{run_trials, trial_rng, EstimateRow, EstimateTable, ExperimentConfig, Protocol};
use crate::error::{Error, Result};
use crate::qcore::{sample_on, Layout, Partition};
use crate::spinlab::{chsh_combination, chsh_value, correlation_exact, sgm_projectors, singlet, Orientation};

fn partition(o: Orientation) -> Result<Partition> {
    let (up, down) = sgm_projectors(o);
    Partition::new(vec![up, down])
}

/// Sampled `E(a,b)` on the singlet: A is measured first, then B on the
/// collapsed state. Returns the mean product over trials
/// `first..first + n`.
fn sample_correlation(a: Orientation, b: Orientation, seed: u64, first: u64, n: u64) -> Result<f64> {
    let layout = Layout::new([2, 2])?;
    let (pa, pb) = (partition(a)?, partition(b)?);
    let s = singlet();
    let products = run_trials(first, n, |t| -> Result<i64> {
        let mut rng = trial_rng(seed, t);
        let (ia, post) = sample_on(&s, &pa, &layout, 0..1, &mut rng)?;
        let (ib, _) = sample_on(&post, &pb, &layout, 1..2, &mut rng)?;
        Ok(if ia == ib { 1 } else { -1 })
    });
    let sum: i64 = products.into_iter().sum::<Result<i64>>()?;
    Ok(sum as f64 / n as f64)
}

fn label(a: Orientation, b: Orientation) -> String {
    format!("E(a={a};b={b})")
}

/// Singlet correlations for each setting pair, and the CHSH sum when four
/// angles `(a, a', b, b')` are given.
pub fn run_epr(config: &ExperimentConfig) -> Result<EstimateTable> {
    if config.protocol != Protocol::EprStandard {
        return Err(Error::Config(format!("run_epr called with {:?}", config.protocol)));
    }
    config.validate()?;
    let o = config.orientations();
    let pairs: Vec<(Orientation, Orientation)> = match o.as_slice() {
        [a, b] => vec![(*a, *b)],
        [a, a2, b, b2] => vec![(*a, *b), (*a, *b2), (*a2, *b), (*a2, *b2)],
        _ => unreachable!("validated"),
    };
    let n = config.trials;
    let mut table = EstimateTable::default();
    let mut estimates = Vec::new();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let mut row = EstimateRow::exact(label(a, b), correlation_exact(a, b));
        if n > 0 {
            let e = sample_correlation(a, b, config.master_seed, k as u64 * n, n)?;
            let stderr = ((1.0 - e * e).max(0.0) / n as f64).sqrt();
            row = row.with_estimate(e, stderr, n);
            estimates.push((e, stderr));
        }
        table.push(row);
    }
    if let [a, a2, b, b2] = o.as_slice() {
        let mut row = EstimateRow::exact("S", chsh_value(*a, *a2, *b, *b2));
        if n > 0 {
            let e: [f64; 4] = std::array::from_fn(|i| estimates[i].0);
            let var: f64 = estimates.iter().map(|(_, s)| s * s).sum();
            row = row.with_estimate(chsh_combination(e), var.sqrt(), 4 * n);
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(angles_deg: &[f64], trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            angles: Some(angles_deg.iter().map(|d| d.to_radians()).collect()),
            trials,
            master_seed: 17,
            ..ExperimentConfig::new(Protocol::EprStandard)
        }
    }

    #[test]
    fn equal_angles_anticorrelate() {
        let t = run_epr(&cfg(&[30.0, 30.0], 5000)).unwrap();
        let r = &t.rows[0];
        assert!((r.exact.unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(r.estimate, Some(-1.0));
        assert!(r.within(3.0));
    }

    #[test]
    fn chsh_row_exact_only() {
        let t = run_epr(&cfg(&[0.0, 90.0, 45.0, 135.0], 0)).unwrap();
        let s = t.get("S").unwrap();
        assert!((s.exact.unwrap().abs() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!(t.rows.iter().all(|r| r.estimate.is_none() && r.n == 0));
    }

    #[test]
    fn chsh_sampled_within_three_sigma() {
        let t = run_epr(&cfg(&[0.0, 90.0, 45.0, 135.0], 20_000)).unwrap();
        assert!(t.rows.iter().all(|r| r.within(3.0)), "{}", t.to_csv());
    }

    #[test]
    fn wrong_protocol_rejected() {
        assert!(run_epr(&ExperimentConfig::new(Protocol::Toolate)).is_err());
    }
}
