//! Path ⊗ spin registers for the value-first protocol.
//!
//! Each particle is a 6-dimensional register `path ⊗ spin` with basis index
//! `2·port + spin_z`. The pair lives in `path_A ⊗ spin_A ⊗ path_B ⊗ spin_B`
//! (36 dimensions), particle A outermost.
//!
//! Ports are bound to trine orientations by a [`PortBinding`]; every
//! statistic in this module is indexed by orientation, so relabeling ports
//! must not change any of them.

mod layout;
mod literal;
mod measure;
mod verify;

pub use layout::{
    exit_index, exit_label, exit_labels, exit_vector, joint_register, particle_register, prepare_joint, three_port_bs,
    ExitLabel, ExitName, JointState, Particle, ParticleLayout, PortBinding, EXITS, PARTICLE_DIM, PATH_DIM, SPIN_DIM,
};
pub use literal::{
    literal_pair_up_up, literal_single, literal_toolate, oracle_conditional_state, oracle_single_state, LiteralState,
};
pub use measure::{
    exit_amplitudes, interleavings, joint_distribution, local_value_projectors, measure_orientation, measure_value,
    sequential_distribution, value_projectors, Apparatus, JointTable, Step,
};
pub use verify::{verify_states, AmplitudeEntry, EquationAudit, VerificationReport, ZeroCheck, ZERO_CHECK_TOLERANCE};
