use std::f64::consts::TAU;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{apply_unitary, Layout, Operator, StateVector, C64, TOLERANCE};
use crate::spinlab::{singlet, spin_eigenstate, Orientation, SpinValue, TrineSet, TRINE_LABELS};

pub const PATH_DIM: usize = 3;
pub const SPIN_DIM: usize = 2;
pub const PARTICLE_DIM: usize = PATH_DIM * SPIN_DIM;
/// Number of detector exits per particle: 3 orientations × 2 values.
pub const EXITS: usize = 6;

/// `[3, 2]`
pub fn particle_register() -> Layout {
    Layout::new([PATH_DIM, SPIN_DIM]).expect("static layout")
}

/// `[3, 2, 3, 2]`
pub fn joint_register() -> Layout {
    Layout::new([PATH_DIM, SPIN_DIM, PATH_DIM, SPIN_DIM]).expect("static layout")
}

/// Which beam-splitter port feeds the magnet of each trine orientation.
/// `ports()[i]` is the port for orientation `i` (α, β, γ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct PortBinding([usize; 3]);

impl PortBinding {
    pub const IDENTITY: PortBinding = PortBinding([0, 1, 2]);

    pub fn new(ports: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &p in &ports {
            if p >= 3 || seen[p] {
                return Err(Error::Config(format!(
                    "port binding {ports:?} is not a permutation of 0,1,2"
                )));
            }
            seen[p] = true;
        }
        Ok(Self(ports))
    }

    pub fn ports(&self) -> [usize; 3] {
        self.0
    }

    /// All six bindings.
    pub fn all() -> [PortBinding; 6] {
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]].map(PortBinding)
    }
}

impl Default for PortBinding {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl TryFrom<[usize; 3]> for PortBinding {
    type Error = Error;
    fn try_from(p: [usize; 3]) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PortBinding> for [usize; 3] {
    fn from(b: PortBinding) -> Self {
        b.0
    }
}

/// Trine plus port binding; fixed for one experiment and shared by both
/// particles.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ParticleLayout {
    pub trine: TrineSet,
    pub binding: PortBinding,
}

impl ParticleLayout {
    pub fn new(trine: TrineSet, binding: PortBinding) -> Self {
        Self { trine, binding }
    }

    pub fn port_of_index(&self, orientation_index: usize) -> usize {
        self.binding.0[orientation_index]
    }

    pub fn port_of(&self, o: Orientation) -> Result<usize> {
        let i = self.trine.index_of(o).ok_or(Error::OrientationNotInTrine(o.theta()))?;
        Ok(self.port_of_index(i))
    }

    /// Orientation index feeding `port`.
    pub fn orientation_at_port(&self, port: usize) -> usize {
        self.binding
            .0
            .iter()
            .position(|&p| p == port)
            .expect("binding is a permutation")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Particle {
    A,
    B,
}

impl Particle {
    /// Factor range of this particle inside [`joint_register`].
    pub fn factors(self) -> Range<usize> {
        match self {
            Particle::A => 0..2,
            Particle::B => 2..4,
        }
    }
}

/// One of the six detector exits `(orientation, value)` of a particle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExitLabel {
    pub orientation: Orientation,
    pub value: SpinValue,
}

/// Exit index `2·orientation_index + value_index`, so exits are ordered
/// α↑, α↓, β↑, β↓, γ↑, γ↓.
pub fn exit_index(trine: &TrineSet, e: &ExitLabel) -> Result<usize> {
    let i = trine
        .index_of(e.orientation)
        .ok_or(Error::OrientationNotInTrine(e.orientation.theta()))?;
    Ok(2 * i + e.value.index())
}

pub fn exit_label(trine: &TrineSet, index: usize) -> ExitLabel {
    ExitLabel {
        orientation: trine.get(index / 2),
        value: SpinValue::BOTH[index % 2],
    }
}

pub fn exit_labels(trine: &TrineSet) -> [ExitLabel; EXITS] {
    std::array::from_fn(|i| exit_label(trine, i))
}

/// Human-readable exit name such as `beta_up`.
pub struct ExitName<'a>(pub &'a TrineSet, pub &'a ExitLabel);

impl fmt::Display for ExitName<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.index_of(self.1.orientation) {
            Some(i) => write!(f, "{}_{}", TRINE_LABELS[i], self.1.value),
            None => write!(f, "{}_{}", self.1.orientation, self.1.value),
        }
    }
}

/// The balanced three-port splitter: `U_jk = ω^{jk}/√3`, `ω = e^{2πi/3}`.
pub fn three_port_bs() -> Operator {
    let s = 1.0 / 3f64.sqrt();
    Operator::from_fn(PATH_DIM, |j, k| {
        // Exact real parts for the j·k ≡ 0 (mod 3) entries.
        match (j * k) % 3 {
            0 => C64::new(s, 0.0),
            m => C64::from_polar(s, TAU * m as f64 / 3.0),
        }
    })
}

/// `|port(o)⟩ ⊗ |spin eigenstate of value v along o⟩` in the `path ⊗ spin_z`
/// basis.
pub fn exit_vector(layout: &ParticleLayout, e: &ExitLabel) -> Result<StateVector> {
    let port = layout.port_of(e.orientation)?;
    Ok(StateVector::basis(PATH_DIM, port).kron(&spin_eigenstate(e.orientation, e.value)))
}

/// A normalized 36-dimensional pair state together with its port binding.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    state: StateVector,
    layout: ParticleLayout,
}

impl JointState {
    pub fn new(state: StateVector, layout: ParticleLayout) -> Result<Self> {
        state.check_dim(PARTICLE_DIM * PARTICLE_DIM)?;
        state.require_normalized()?;
        Ok(Self { state, layout })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn layout(&self) -> &ParticleLayout {
        &self.layout
    }

    pub fn trine(&self) -> &TrineSet {
        &self.layout.trine
    }
}

/// Both particles pass the splitter from port 1, so their paths are uniform
/// and coherent; the spins are in the singlet. This is the state at t1,
/// before any measurement.
pub fn prepare_joint(layout: &ParticleLayout) -> JointState {
    let register = joint_register();
    let bs = three_port_bs();
    // |p1⟩_A |p1⟩_B ⊗ singlet, with the spin factors interleaved.
    let s = singlet();
    let mut amps = vec![C64::new(0.0, 0.0); PARTICLE_DIM * PARTICLE_DIM];
    for sa in 0..SPIN_DIM {
        for sb in 0..SPIN_DIM {
            amps[sa * PARTICLE_DIM + sb] = s.amp(sa * SPIN_DIM + sb);
        }
    }
    let before = StateVector::new(amps).expect("finite");
    let after_a = apply_unitary(&bs, &before, &register, 0..1).expect("unitary");
    let state = apply_unitary(&bs, &after_a, &register, 2..3).expect("unitary");
    debug_assert!(state.is_normalized(TOLERANCE));
    JointState { state, layout: *layout }
}
