//! Executable model of the quantum measurement process.
//!
//! The crate separates a measurement into its two physical stages: a
//! reversible *pre-measurement* that correlates a system with pointer
//! registers, and an irreversible *decoherence* that copies the pointer into
//! an environment which is then traced out. On top of that sit the
//! Wigner's-friend scenarios and a small protocol language.
//!
//! - [`qcore`]: registers, pure and mixed states, unitaries, bases, Born rule.
//! - [`meas`]: pre-measurement, decoherence, full measurement, undo, MUB and dressed bases.
//! - [`scenarios`]: the named protocols with structured reports.
//! - [`protoparse`]: the `.wig` scenario language (parse, validate, execute).

pub mod error;
pub mod meas;
pub mod protoparse;
pub mod qcore;
pub mod scenarios;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use meas::{FriendPolicy, PremeasurementRecord};
pub use qcore::{
    born_probabilities, Basis, DensityOperator, Distribution, QuantumState, Register, StateVector,
    Unitary,
};
