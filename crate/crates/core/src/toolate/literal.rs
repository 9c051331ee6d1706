//! The value-conditioned states exactly as they are usually written down in
//! the exit basis, next to the conditional states derived from the prepared
//! pair by projection.
//!
//! The written forms carry prefactors that do not normalize them; each
//! constructor reports the norm of the expression as written and returns the
//! renormalized state alongside it.

use super::layout::{
    exit_vector, prepare_joint, three_port_bs, ExitLabel, JointState, Particle, ParticleLayout, PARTICLE_DIM, PATH_DIM,
    SPIN_DIM,
};
use super::measure::{local_value_projectors, value_projectors};
use crate::error::Result;
use crate::qcore::{apply_unitary, project, Operator, StateVector, C64};
use crate::spinlab::{spin_eigenstates, SpinValue};

#[derive(Clone, Debug, PartialEq)]
pub struct LiteralState {
    /// The expression as written, unnormalized.
    pub raw: StateVector,
    /// `‖raw‖`
    pub literal_norm: f64,
    /// `raw / ‖raw‖`
    pub state: StateVector,
}

impl LiteralState {
    fn from_raw(raw: StateVector) -> Result<Self> {
        let literal_norm = raw.norm();
        let mut state = raw.clone();
        state.normalize()?;
        Ok(Self {
            raw,
            literal_norm,
            state,
        })
    }
}

fn exit(layout: &ParticleLayout, orientation_index: usize, value: SpinValue) -> StateVector {
    exit_vector(
        layout,
        &ExitLabel {
            orientation: layout.trine.get(orientation_index),
            value,
        },
    )
    .expect("orientation taken from the trine")
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Raw `(1/√3)(|α⟩_v + |β⟩_v + |γ⟩_v)`.
fn single_raw(layout: &ParticleLayout, value: SpinValue) -> StateVector {
    let mut psi = StateVector::zeros(PARTICLE_DIM);
    for i in 0..3 {
        psi.add_scaled(real(1.0 / 3f64.sqrt()), &exit(layout, i, value))
            .expect("dim 6");
    }
    psi
}

/// Raw `Σ_o |o^A⟩_v |o^B⟩_v` (the three same-orientation terms).
fn diagonal_raw(layout: &ParticleLayout, value: SpinValue) -> StateVector {
    let mut d = StateVector::zeros(PARTICLE_DIM * PARTICLE_DIM);
    for i in 0..3 {
        let e = exit(layout, i, value);
        d.add_scaled(real(1.0), &e.kron(&e)).expect("dim 36");
    }
    d
}

/// One particle with a fixed spin value, orientation still superposed:
/// `(1/√3)(|α⟩_v + |β⟩_v + |γ⟩_v)`.
pub fn literal_single(value: SpinValue, layout: &ParticleLayout) -> Result<LiteralState> {
    LiteralState::from_raw(single_raw(layout, value))
}

/// Both particles up, same-orientation pairs removed:
/// `(1/√6)[ψ_A↑ ψ_B↑ − (1/3)(αα + ββ + γγ)↑↑]`.
/// The third diagonal term is read as `|γ^A⟩|γ^B⟩`.
pub fn literal_pair_up_up(layout: &ParticleLayout) -> Result<LiteralState> {
    let up = single_raw(layout, SpinValue::Up);
    let mut raw = up.kron(&up);
    raw.add_scaled(real(-1.0 / 3.0), &diagonal_raw(layout, SpinValue::Up))?;
    LiteralState::from_raw(raw.scaled(real(1.0 / 6f64.sqrt())))
}

/// All four value pairs, same-orientation same-value pairs removed, with the
/// written `1/√30` prefactor.
pub fn literal_toolate(layout: &ParticleLayout) -> Result<LiteralState> {
    let mut raw = StateVector::zeros(PARTICLE_DIM * PARTICLE_DIM);
    for va in SpinValue::BOTH {
        for vb in SpinValue::BOTH {
            raw.add_scaled(real(1.0), &single_raw(layout, va).kron(&single_raw(layout, vb)))?;
        }
    }
    for v in SpinValue::BOTH {
        raw.add_scaled(real(-1.0 / 3.0), &diagonal_raw(layout, v))?;
    }
    LiteralState::from_raw(raw.scaled(real(1.0 / 30f64.sqrt())))
}

/// Conditional pair state after the value stage reported `(va, vb)`,
/// derived by projecting the prepared pair with the full 36×36 value
/// projectors.
pub fn oracle_conditional_state(va: SpinValue, vb: SpinValue, layout: &ParticleLayout) -> Result<JointState> {
    let prepared = prepare_joint(layout);
    let (a_up, a_down) = value_projectors(Particle::A, layout);
    let (b_up, b_down) = value_projectors(Particle::B, layout);
    let pa = if va == SpinValue::Up { a_up } else { a_down };
    let pb = if vb == SpinValue::Up { b_up } else { b_down };
    let (_, post) = project(&pb.matmul(&pa)?, prepared.state())?;
    JointState::new(post, *layout)
}

/// A single particle sent through the splitter from port 1, whose spin is
/// then rotated in each path onto that path's magnet axis (value `v` along
/// it), followed by the value test. Built from the splitter, a
/// path-controlled rotation and the value projector, without exit vectors.
pub fn oracle_single_state(value: SpinValue, layout: &ParticleLayout) -> Result<StateVector> {
    let reg = super::layout::particle_register();
    let start = StateVector::basis(PATH_DIM, 0).kron(&StateVector::basis(SPIN_DIM, value.index()));
    let split = apply_unitary(&three_port_bs(), &start, &reg, 0..1)?;
    // Block-diagonal rotation: in port p, |↑z⟩ ↦ up(o_p), |↓z⟩ ↦ down(o_p).
    let mut rotation = Operator::zeros(PARTICLE_DIM);
    for port in 0..PATH_DIM {
        let (up, down) = spin_eigenstates(layout.trine.get(layout.orientation_at_port(port)));
        let r = Operator::from_fn(SPIN_DIM, |i, j| if j == 0 { up.amp(i) } else { down.amp(i) });
        let proj = Operator::outer(&StateVector::basis(PATH_DIM, port), &StateVector::basis(PATH_DIM, port))?;
        rotation = rotation.add(&proj.kron(&r))?;
    }
    let rotated = apply_unitary(&rotation, &split, &reg, 0..2)?;
    let (up, down) = local_value_projectors(layout);
    let p = if value == SpinValue::Up { up } else { down };
    let (_, post) = project(&p, &rotated)?;
    Ok(post)
}
