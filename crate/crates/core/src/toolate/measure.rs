use rand::Rng;

use super::layout::{
    exit_label, exit_labels, exit_vector, joint_register, ExitLabel, JointState, Particle, ParticleLayout, EXITS,
    PARTICLE_DIM, PATH_DIM,
};
use crate::error::Result;
use crate::qcore::{apply_local, sample_on, Layout, Operator, Partition, StateVector, C64, ZERO_PROBABILITY};
use crate::spinlab::{sgm_projector, SpinValue};

/// Exact probabilities `table[exit_A][exit_B]`, exits ordered as in
/// [`super::exit_index`].
pub type JointTable = [[f64; EXITS]; EXITS];

/// Single-particle value projectors
/// `P_v = Σ_o |port(o)⟩⟨port(o)| ⊗ |v(o)⟩⟨v(o)|`: the spin value is tested on
/// all three paths at once without revealing which path.
pub fn local_value_projectors(layout: &ParticleLayout) -> (Operator, Operator) {
    let build = |v: SpinValue| {
        let mut total = Operator::zeros(PARTICLE_DIM);
        for (i, &o) in layout.trine.orientations().iter().enumerate() {
            let port = StateVector::basis(PATH_DIM, layout.port_of_index(i));
            let port_proj = Operator::outer(&port, &port).expect("dim 3");
            total = total.add(&port_proj.kron(&sgm_projector(o, v))).expect("dim 6");
        }
        total
    };
    (build(SpinValue::Up), build(SpinValue::Down))
}

/// [`local_value_projectors`] embedded on `particle`'s factors of the pair.
pub fn value_projectors(particle: Particle, layout: &ParticleLayout) -> (Operator, Operator) {
    let (up, down) = local_value_projectors(layout);
    let reg = joint_register();
    (
        up.embed(&reg, particle.factors()).expect("dim 6"),
        down.embed(&reg, particle.factors()).expect("dim 6"),
    )
}

/// Precomputed measurement partitions for one layout.
#[derive(Clone, Debug)]
pub struct Apparatus {
    layout: ParticleLayout,
    register: Layout,
    values: Partition,
    exits: Partition,
}

impl Apparatus {
    pub fn new(layout: &ParticleLayout) -> Result<Self> {
        let (up, down) = local_value_projectors(layout);
        let exits = exit_labels(&layout.trine)
            .iter()
            .map(|e| Operator::projector(&exit_vector(layout, e)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layout: *layout,
            register: joint_register(),
            values: Partition::new(vec![up, down])?,
            exits: Partition::new(exits)?,
        })
    }

    pub fn layout(&self) -> &ParticleLayout {
        &self.layout
    }

    /// The photon-probe stage: a two-outcome projective test of the spin
    /// value that leaves the orientation superposed.
    pub fn measure_value<R: Rng + ?Sized>(
        &self,
        state: &JointState,
        particle: Particle,
        rng: &mut R,
    ) -> Result<(SpinValue, JointState, f64)> {
        let (index, post) = sample_on(state.state(), &self.values, &self.register, particle.factors(), rng)?;
        let prob = state
            .state()
            .inner(&apply_local(
                &self.values.projectors()[index],
                state.state(),
                &self.register,
                particle.factors(),
            )?)?
            .re;
        Ok((SpinValue::BOTH[index], JointState::new(post, self.layout)?, prob))
    }

    /// Detector stage: one click among the six exits.
    pub fn measure_orientation<R: Rng + ?Sized>(
        &self,
        state: &JointState,
        particle: Particle,
        rng: &mut R,
    ) -> Result<(ExitLabel, JointState)> {
        let (index, post) = sample_on(state.state(), &self.exits, &self.register, particle.factors(), rng)?;
        Ok((
            exit_label(&self.layout.trine, index),
            JointState::new(post, self.layout)?,
        ))
    }

    fn branch(&self, state: &StateVector, step: Step, outcome: usize) -> Result<StateVector> {
        let (partition, particle) = match step {
            Step::Value(p) => (&self.values, p),
            Step::Orientation(p) => (&self.exits, p),
        };
        apply_local(
            &partition.projectors()[outcome],
            state,
            &self.register,
            particle.factors(),
        )
    }
}

pub fn measure_value<R: Rng + ?Sized>(
    state: &JointState,
    particle: Particle,
    rng: &mut R,
) -> Result<(SpinValue, JointState, f64)> {
    Apparatus::new(state.layout())?.measure_value(state, particle, rng)
}

pub fn measure_orientation<R: Rng + ?Sized>(
    state: &JointState,
    particle: Particle,
    rng: &mut R,
) -> Result<(ExitLabel, JointState)> {
    Apparatus::new(state.layout())?.measure_orientation(state, particle, rng)
}

/// `⟨exit_A ⊗ exit_B | state⟩` for all 36 exit pairs.
pub fn exit_amplitudes(state: &JointState) -> Result<[[C64; EXITS]; EXITS]> {
    let layout = state.layout();
    let exits = exit_labels(&layout.trine)
        .iter()
        .map(|e| exit_vector(layout, e))
        .collect::<Result<Vec<_>>>()?;
    let mut out = [[C64::new(0.0, 0.0); EXITS]; EXITS];
    for (a, ea) in exits.iter().enumerate() {
        for (b, eb) in exits.iter().enumerate() {
            out[a][b] = ea.kron(eb).inner(state.state())?;
        }
    }
    Ok(out)
}

/// Single-shot Born table over exit pairs.
pub fn joint_distribution(state: &JointState) -> Result<JointTable> {
    Ok(exit_amplitudes(state)?.map(|row| row.map(|a| a.norm_sqr())))
}

/// One stage of the value-first protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Value(Particle),
    Orientation(Particle),
}

/// Every ordering of the four stages in which each particle's value stage
/// precedes its orientation stage.
pub fn interleavings() -> Vec<[Step; 4]> {
    use Particle::{A, B};
    use Step::{Orientation as O, Value as V};
    vec![
        [V(A), V(B), O(A), O(B)],
        [V(A), V(B), O(B), O(A)],
        [V(B), V(A), O(A), O(B)],
        [V(B), V(A), O(B), O(A)],
        [V(A), O(A), V(B), O(B)],
        [V(B), O(B), V(A), O(A)],
    ]
}

/// Exact exit-pair table obtained by composing conditional Born
/// probabilities stage by stage in the given order.
pub fn sequential_distribution(state: &JointState, order: &[Step]) -> Result<JointTable> {
    let app = Apparatus::new(state.layout())?;
    let mut table = [[0.0; EXITS]; EXITS];
    let mut exits = [None, None];
    descend(&app, state.state().clone(), 1.0, order, &mut exits, &mut table)?;
    Ok(table)
}

fn descend(
    app: &Apparatus,
    state: StateVector,
    weight: f64,
    rest: &[Step],
    exits: &mut [Option<usize>; 2],
    table: &mut JointTable,
) -> Result<()> {
    let Some((&step, rest)) = rest.split_first() else {
        if let [Some(a), Some(b)] = *exits {
            table[a][b] += weight;
        }
        return Ok(());
    };
    let outcomes = match step {
        Step::Value(_) => 2,
        Step::Orientation(_) => EXITS,
    };
    for k in 0..outcomes {
        let mut branch = app.branch(&state, step, k)?;
        let p = branch.norm_sqr();
        if p <= ZERO_PROBABILITY {
            continue;
        }
        branch.normalize()?;
        let slot = match step {
            Step::Orientation(Particle::A) => Some(0),
            Step::Orientation(Particle::B) => Some(1),
            Step::Value(_) => None,
        };
        if let Some(s) = slot {
            exits[s] = Some(k);
        }
        descend(app, branch, weight * p, rest, exits, table)?;
        if let Some(s) = slot {
            exits[s] = None;
        }
    }
    Ok(())
}
