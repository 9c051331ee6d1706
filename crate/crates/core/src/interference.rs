//! Path recombination and which-path erasure.
//!
//! Recombination sends a particle's path register back through the inverse
//! splitter. A particle whose orientation is still coherently superposed
//! interferes; a particle with a definite (if unknown) path spreads evenly
//! over the three ports.
//!
//! Erasure projects both path registers onto the uniform path vector, the
//! outcome of a detector that cannot tell the paths apart, and looks at what
//! is left on the two spins.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lhv::ConspiracyModel;
use crate::qcore::{
    apply_unitary, entanglement_entropy, fidelity, reduced_density, Layout, StateVector, C64, TOLERANCE,
    ZERO_PROBABILITY,
};
use crate::spinlab::{singlet, SpinValue};
use crate::toolate::{
    exit_labels, exit_vector, joint_distribution, particle_register, prepare_joint, three_port_bs, JointState,
    ParticleLayout, PARTICLE_DIM, PATH_DIM, SPIN_DIM,
};

/// Default total-variation threshold above which the interference test
/// separates two port distributions.
pub const DEFAULT_THRESHOLD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortDistribution(pub [f64; 3]);

impl PortDistribution {
    pub const UNIFORM: PortDistribution = PortDistribution([1.0 / 3.0; 3]);

    pub fn new(p: [f64; 3]) -> Result<Self> {
        if p.iter().any(|&x| x.is_nan() || x < -TOLERANCE) || (p.iter().sum::<f64>() - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidDistribution(format!("{p:?}")));
        }
        Ok(Self(p))
    }

    pub fn probs(&self) -> [f64; 3] {
        self.0
    }

    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self(perm.map(|i| self.0[i]))
    }
}

/// Inverse splitter on the path register, spin traced out.
pub fn recombine(state: &StateVector) -> Result<PortDistribution> {
    state.check_dim(PARTICLE_DIM)?;
    state.require_normalized()?;
    let out = apply_unitary(&three_port_bs().adjoint(), state, &particle_register(), 0..1)?;
    let mut p = [0.0; 3];
    for (i, a) in out.amps().iter().enumerate() {
        p[i / SPIN_DIM] += a.norm_sqr();
    }
    PortDistribution::new(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The distributions are distinguishable.
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrimination {
    pub tv_distance: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn interference_discriminator(
    quantum: &PortDistribution,
    model: &PortDistribution,
    threshold: f64,
) -> Discrimination {
    let tv_distance = total_variation(&quantum.0, &model.0);
    Discrimination {
        tv_distance,
        threshold,
        verdict: if tv_distance > threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErasureResult {
    pub success_prob: f64,
    pub post_spin_state: StateVector,
    pub entanglement_bits: f64,
    pub fidelity_to_singlet: f64,
}

/// Two-spin amplitudes left after projecting both paths onto `u ⊗ u`.
fn erased_spins(state: &StateVector) -> StateVector {
    // ⟨u|p⟩ = 1/√3 for every port, so each path pair contributes 1/3.
    let weight = 1.0 / PATH_DIM as f64;
    let mut amps = vec![C64::new(0.0, 0.0); SPIN_DIM * SPIN_DIM];
    for (i, a) in state.amps().iter().enumerate() {
        let sb = i % SPIN_DIM;
        let sa = (i / PARTICLE_DIM) % SPIN_DIM;
        amps[sa * SPIN_DIM + sb] += a * weight;
    }
    StateVector::new(amps).expect("finite input")
}

pub fn erase_paths(state: &JointState) -> Result<ErasureResult> {
    let mut spins = erased_spins(state.state());
    let success_prob = spins.norm_sqr();
    if success_prob <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(success_prob));
    }
    spins.normalize()?;
    let rho = reduced_density(&spins, &Layout::new([SPIN_DIM, SPIN_DIM])?, &[0])?;
    Ok(ErasureResult {
        success_prob,
        entanglement_bits: entanglement_entropy(&rho),
        fidelity_to_singlet: fidelity(&spins, &singlet())?,
        post_spin_state: spins,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapRow {
    pub condition: String,
    pub success_prob: f64,
    pub entanglement_bits: f64,
    pub fidelity_to_singlet: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapContrast {
    pub model: String,
    pub values: SwapContrastValues,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapContrastValues {
    /// Weighted mean erasure success over the model's definite exit pairs.
    pub success_prob: f64,
    /// Largest post-erasure entanglement over those pairs.
    pub max_entanglement_bits: f64,
    pub mean_fidelity_to_singlet: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapReport {
    pub rows: Vec<SwapRow>,
    pub contrast: SwapContrast,
    pub notes: Vec<String>,
}

/// Erasure applied to a definite-path model: every trial is one exit pair
/// `|port a, v_a(a)⟩|port b, v_b(b)⟩`, so erasure can only leave a product
/// of two spin states.
pub fn erase_definite_paths(model: &ConspiracyModel, layout: &ParticleLayout) -> Result<SwapContrastValues> {
    let exits = exit_labels(&layout.trine)
        .iter()
        .map(|e| exit_vector(layout, e))
        .collect::<Result<Vec<_>>>()?;
    let mut success = 0.0;
    let mut max_bits: f64 = 0.0;
    let mut fid = 0.0;
    for (a, row) in model.table().iter().enumerate() {
        for (b, &w) in row.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            let pair = JointState::new(exits[a].kron(&exits[b]), *layout)?;
            let r = erase_paths(&pair)?;
            success += w * r.success_prob;
            max_bits = max_bits.max(r.entanglement_bits);
            fid += w * r.fidelity_to_singlet;
        }
    }
    Ok(SwapContrastValues {
        success_prob: success,
        max_entanglement_bits: max_bits,
        mean_fidelity_to_singlet: fid,
    })
}

/// Erasure on the prepared pair and on all four value-conditioned pairs,
/// contrasted with a definite-path model that copies the up-up exit
/// statistics.
pub fn swap_report(layout: &ParticleLayout) -> Result<SwapReport> {
    let mut rows = Vec::new();
    let prepared = prepare_joint(layout);
    let mut push = |condition: String, r: ErasureResult| {
        rows.push(SwapRow {
            condition,
            success_prob: r.success_prob,
            entanglement_bits: r.entanglement_bits,
            fidelity_to_singlet: r.fidelity_to_singlet,
        })
    };
    push("prepared".into(), erase_paths(&prepared)?);
    for va in SpinValue::BOTH {
        for vb in SpinValue::BOTH {
            let j = crate::toolate::oracle_conditional_state(va, vb, layout)?;
            push(format!("{va}_{vb}"), erase_paths(&j)?);
        }
    }
    let up_up = crate::toolate::oracle_conditional_state(SpinValue::Up, SpinValue::Up, layout)?;
    let model = ConspiracyModel::new(joint_distribution(&up_up)?)?;
    let contrast = SwapContrast {
        model: "definite_path_up_up".into(),
        values: erase_definite_paths(&model, layout)?,
    };
    let notes = vec![
        "residual spin registers stand in for the re-emitted photons".to_string(),
        "erasure keeps only the symmetric detector outcome; other outcomes count as failure".to_string(),
    ];
    Ok(SwapReport { rows, contrast, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinlab::TrineSet;
    use crate::toolate::{literal_single, oracle_conditional_state, PortBinding};
    use proptest::prelude::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() < tol)
    }

    /// Port probabilities computed by hand: amplitude in output port k is
    /// `Σ_p conj(U_pk) ψ_p` per spin component.
    fn recombine_by_hand(state: &StateVector) -> [f64; 3] {
        let s = 1.0 / 3f64.sqrt();
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            for spin in 0..2 {
                let mut z = C64::new(0.0, 0.0);
                for p in 0..3 {
                    let phase = C64::from_polar(s, -std::f64::consts::TAU * (p * k) as f64 / 3.0);
                    z += phase * state.amp(2 * p + spin);
                }
                *slot += z.norm_sqr();
            }
        }
        out
    }

    #[test]
    fn definite_port_spreads_uniformly() {
        let s = StateVector::basis(3, 0).kron(&StateVector::basis(2, 1));
        assert!(close(recombine(&s).unwrap().0, [1.0 / 3.0; 3], 1e-15));
    }

    #[test]
    fn coherent_paths_with_fixed_spin_return_to_port_one() {
        let s = StateVector::uniform(3).kron(&StateVector::from_real(&[0.6, 0.8]).unwrap());
        assert!(close(recombine(&s).unwrap().0, [1.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn single_up_literal_recombination() {
        // Hand evaluation: port 1 gets (1/9)|Σ_o up(o)|² = (1/9)(3 + 2·(½ − ½ + ½)) = 4/9,
        // the other two ports split the rest.
        for binding in PortBinding::all() {
            let layout = ParticleLayout::new(TrineSet::default(), binding);
            let lit = literal_single(SpinValue::Up, &layout).unwrap();
            let by_hand = recombine_by_hand(&lit.state);
            assert!(close(by_hand, [4.0 / 9.0, 5.0 / 18.0, 5.0 / 18.0], 1e-12));
            assert!(close(recombine(&lit.state).unwrap().0, by_hand, 1e-12));
        }
    }

    #[test]
    fn discriminator_examples() {
        let q = PortDistribution::new([4.0 / 9.0, 5.0 / 18.0, 5.0 / 18.0]).unwrap();
        let same = interference_discriminator(&q, &q, DEFAULT_THRESHOLD);
        assert_eq!(same.tv_distance, 0.0);
        assert_eq!(same.verdict, Verdict::Fail);
        let d = interference_discriminator(&q, &PortDistribution::UNIFORM, DEFAULT_THRESHOLD);
        assert!((d.tv_distance - 1.0 / 9.0).abs() < 1e-12);
        assert_eq!(d.verdict, Verdict::Pass);
        let perm = interference_discriminator(&q, &q.permuted([1, 0, 2]), DEFAULT_THRESHOLD);
        assert!((perm.tv_distance - (4.0 / 9.0 - 5.0 / 18.0)).abs() < 1e-12);
        assert_eq!(perm.verdict, Verdict::Pass);
    }

    #[test]
    fn invalid_distribution_rejected() {
        assert!(PortDistribution::new([0.5, 0.5, 0.5]).is_err());
        assert!(PortDistribution::new([1.5, -0.5, 0.0]).is_err());
        assert!(PortDistribution::new([f64::NAN, 0.5, 0.5]).is_err());
    }

    #[test]
    fn erasure_on_prepared_pair() {
        let r = erase_paths(&prepare_joint(&ParticleLayout::default())).unwrap();
        assert!((r.success_prob - 1.0).abs() < 1e-12);
        assert!((r.fidelity_to_singlet - 1.0).abs() < 1e-12);
        assert!((r.entanglement_bits - 1.0).abs() < 1e-10);
    }

    #[test]
    fn erasure_restores_singlet_from_equal_values() {
        for binding in PortBinding::all() {
            let layout = ParticleLayout::new(TrineSet::default(), binding);
            for v in SpinValue::BOTH {
                let j = oracle_conditional_state(v, v, &layout).unwrap();
                let r = erase_paths(&j).unwrap();
                assert!((r.fidelity_to_singlet - 1.0).abs() < 1e-10);
                assert!((r.entanglement_bits - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn erasure_fails_on_path_state_orthogonal_to_uniform() {
        let path =
            StateVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2, 0.0]).unwrap();
        let particle = path.kron(&StateVector::basis(2, 0));
        let other = StateVector::uniform(3).kron(&StateVector::basis(2, 1));
        let j = JointState::new(particle.kron(&other), ParticleLayout::default()).unwrap();
        assert!(matches!(erase_paths(&j), Err(Error::ZeroProbability(_))));
    }

    #[test]
    fn definite_path_contrast_is_separable() {
        let report = swap_report(&ParticleLayout::default()).unwrap();
        assert_eq!(report.rows.len(), 5);
        let c = &report.contrast.values;
        assert!((c.success_prob - 1.0 / 9.0).abs() < 1e-12);
        assert!(c.max_entanglement_bits.abs() < 1e-10);
        // |⟨singlet|up(a) up(b)⟩|² = sin²(Δ/2)/2 = 3/8 for unequal trine pairs.
        assert!((c.mean_fidelity_to_singlet - 3.0 / 8.0).abs() < 1e-12);
        assert_eq!(report, swap_report(&ParticleLayout::default()).unwrap());
    }

    proptest! {
        #[test]
        fn recombination_sums_to_one_and_ignores_global_phase(
            v in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
            phase in 0.0f64..std::f64::consts::TAU,
        ) {
            prop_assume!(v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3));
            let s = StateVector::normalized(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap();
            let p = recombine(&s).unwrap();
            prop_assert!((p.0.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            let rotated = recombine(&s.scaled(C64::from_polar(1.0, phase))).unwrap();
            prop_assert!(close(p.0, rotated.0, 1e-12));
        }

        #[test]
        fn erasure_weight_complements_failure(
            v in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36),
        ) {
            prop_assume!(v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3));
            let s = StateVector::normalized(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap();
            // Weight outside u⊗u computed from the orthogonal complement projector.
            let u = StateVector::uniform(3);
            let pu = crate::qcore::Operator::projector(&u).unwrap();
            let id2 = crate::qcore::Operator::identity(2);
            let p = pu.kron(&id2).kron(&pu).kron(&id2);
            let outside = crate::qcore::Operator::identity(36).sub(&p).unwrap().apply(&s).unwrap().norm_sqr();
            let success = erased_spins(&s).norm_sqr();
            prop_assert!((success + outside - 1.0).abs() < 1e-10);
        }
    }
}
