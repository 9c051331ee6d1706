//! Spin-1/2 conventions for coplanar Stern-Gerlach measurements.
//!
//! Orientations live in one fixed plane, so every spin eigenstate has real
//! amplitudes: `up(θ) = (cos θ/2, sin θ/2)`, `down(θ) = (−sin θ/2, cos θ/2)`
//! in the z basis.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{project, Operator, StateVector};

/// Measurement axis angle in radians, normalized to `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(into = "f64", from = "f64")]
pub struct Orientation(f64);

impl Orientation {
    pub fn new(theta: f64) -> Self {
        let t = theta.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs.
        Self(if t >= TAU { 0.0 } else { t })
    }

    pub fn from_degrees(deg: f64) -> Self {
        Self::new(deg.to_radians())
    }

    pub fn theta(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

impl From<f64> for Orientation {
    fn from(theta: f64) -> Self {
        Self::new(theta)
    }
}

impl From<Orientation> for f64 {
    fn from(o: Orientation) -> f64 {
        o.0
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = (self.degrees() * 1e6).round() / 1e6;
        write!(f, "{d}deg")
    }
}

/// Three distinct coplanar orientations, conventionally named α, β, γ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrineSet([Orientation; 3]);

pub const TRINE_LABELS: [&str; 3] = ["alpha", "beta", "gamma"];

impl TrineSet {
    pub fn new(a: Orientation, b: Orientation, c: Orientation) -> Result<Self> {
        if a == b || b == c || a == c {
            return Err(Error::Config(format!(
                "trine orientations must be distinct: {a}, {b}, {c}"
            )));
        }
        Ok(Self([a, b, c]))
    }

    pub fn from_radians(angles: &[f64]) -> Result<Self> {
        match angles {
            [a, b, c] => Self::new((*a).into(), (*b).into(), (*c).into()),
            _ => Err(Error::Config(format!("a trine needs 3 angles, got {}", angles.len()))),
        }
    }

    pub fn orientations(&self) -> [Orientation; 3] {
        self.0
    }

    pub fn get(&self, index: usize) -> Orientation {
        self.0[index]
    }

    /// Position of `o` in the set, by exact comparison.
    pub fn index_of(&self, o: Orientation) -> Option<usize> {
        self.0.iter().position(|&x| x == o)
    }
}

impl Default for TrineSet {
    /// `(0, 2π/3, 4π/3)`
    fn default() -> Self {
        Self([Orientation(0.0), Orientation(TAU / 3.0), Orientation(2.0 * TAU / 3.0)])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinValue {
    Up,
    Down,
}

impl SpinValue {
    pub const BOTH: [SpinValue; 2] = [SpinValue::Up, SpinValue::Down];

    /// +1 for up, −1 for down.
    pub fn sign(self) -> f64 {
        match self {
            SpinValue::Up => 1.0,
            SpinValue::Down => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            SpinValue::Up => 0,
            SpinValue::Down => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SpinValue::Up => "up",
            SpinValue::Down => "down",
        }
    }
}

impl fmt::Display for SpinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn spin_eigenstates(o: Orientation) -> (StateVector, StateVector) {
    let (s, c) = (0.5 * o.theta()).sin_cos();
    (
        StateVector::from_real(&[c, s]).expect("finite"),
        StateVector::from_real(&[-s, c]).expect("finite"),
    )
}

pub fn spin_eigenstate(o: Orientation, v: SpinValue) -> StateVector {
    let (up, down) = spin_eigenstates(o);
    match v {
        SpinValue::Up => up,
        SpinValue::Down => down,
    }
}

/// `(P_up, P_down)` for a Stern-Gerlach magnet along `o`.
pub fn sgm_projectors(o: Orientation) -> (Operator, Operator) {
    let (up, down) = spin_eigenstates(o);
    (
        Operator::outer(&up, &up).expect("dim 2"),
        Operator::outer(&down, &down).expect("dim 2"),
    )
}

pub fn sgm_projector(o: Orientation, v: SpinValue) -> Operator {
    let (up, down) = sgm_projectors(o);
    match v {
        SpinValue::Up => up,
        SpinValue::Down => down,
    }
}

/// `(|↑z↓z⟩ − |↓z↑z⟩)/√2`
pub fn singlet() -> StateVector {
    StateVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).expect("finite")
}

/// Born probability of the joint outcome `(va along a, vb along b)` on the
/// singlet.
pub fn joint_probability(a: Orientation, va: SpinValue, b: Orientation, vb: SpinValue) -> f64 {
    let p = sgm_projector(a, va).kron(&sgm_projector(b, vb));
    match project(&p, &singlet()) {
        Ok((prob, _)) => prob,
        Err(_) => 0.0,
    }
}

/// `E(a,b)` on the singlet by enumerating the four joint outcomes.
pub fn correlation_exact(a: Orientation, b: Orientation) -> f64 {
    let mut e = 0.0;
    for va in SpinValue::BOTH {
        for vb in SpinValue::BOTH {
            e += va.sign() * vb.sign() * joint_probability(a, va, b, vb);
        }
    }
    e
}

/// `S = E(a,b) − E(a,b') + E(a',b) + E(a',b')`
pub fn chsh_value(a: Orientation, a2: Orientation, b: Orientation, b2: Orientation) -> f64 {
    chsh_combination([
        correlation_exact(a, b),
        correlation_exact(a, b2),
        correlation_exact(a2, b),
        correlation_exact(a2, b2),
    ])
}

/// Combines correlations ordered `[E(a,b), E(a,b'), E(a',b), E(a',b')]`
/// into the CHSH sum.
pub fn chsh_combination(e: [f64; 4]) -> f64 {
    e[0] - e[1] + e[2] + e[3]
}
