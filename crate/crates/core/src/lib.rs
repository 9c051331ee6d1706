//! Simulation and audit toolkit for value-first EPR-Bell experiments.
//!
//! Two spin-1/2 particles share a singlet. Each one is sent through a
//! three-port beam splitter whose output ports feed Stern-Gerlach magnets at
//! three coplanar orientations (the trine). The value-first protocol measures
//! the spin *value* (up/down) on all three paths at once and only afterwards
//! reveals which orientation the particle went through.
//!
//! The crate is organized bottom-up:
//!
//! - [`qcore`]: dense complex states, operators, projective measurement and
//!   partial traces for dimensions up to 36.
//! - [`spinlab`]: spin-1/2 conventions, the singlet, CHSH quantities.
//! - [`toolate`]: the `path ⊗ spin ⊗ path ⊗ spin` registers, value-first
//!   measurement, literal state constructors and their audit.
//! - [`lhv`]: local hidden-variable and source-conspiracy baselines.
//! - [`interference`]: path recombination and which-path erasure.
//! - [`experiments`]: seeded Monte Carlo drivers and output formats.
//! - [`cli`]: the argument layer behind the `toolate` binary.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod interference;
pub mod lhv;
pub mod qcore;
pub mod spinlab;
pub mod toolate;

pub use error::{Error, Result};
