//! Dense complex linear algebra over labeled registers.
//!
//! States are immutable values; every operation returns a new state. Register
//! lists are big-endian: the first register is the most significant index.

mod basis;
mod density;
mod register;
mod state;
mod unitary;

use num_complex::Complex64 as C64;
use serde::Serialize;

pub use basis::{gram_deviation, Basis, Outcome};
pub use density::DensityOperator;
pub use register::Register;
pub(crate) use register::Layout;
pub use state::StateVector;
pub use unitary::Unitary;

use crate::error::{Error, Result};

/// Tolerance for validity checks performed at construction.
pub const CONSTRUCTION_TOL: f64 = 1e-10;
/// Tolerance for equality assertions between computed quantities.
pub const EQUALITY_TOL: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Behaviour shared by pure and mixed states.
pub trait QuantumState: Clone {
    fn registers(&self) -> &[Register];

    /// Applies `u` on `targets` (in the given order) and the identity elsewhere.
    fn apply_unitary(&self, u: &Unitary, targets: &[&str]) -> Result<Self>;

    /// Reduced density operator on `targets`, ordered as given.
    fn reduced(&self, targets: &[&str]) -> Result<DensityOperator>;

    fn to_density(&self) -> DensityOperator;

    fn tensor(&self, other: &Self) -> Result<Self>;

    /// Born weight of every basis vector on `targets`.
    fn basis_weights(&self, basis: &Basis, targets: &[&str]) -> Result<Vec<f64>>;

    /// Symmetric, 1 iff equal up to global phase. Register order is canonicalized.
    fn fidelity(&self, other: &Self) -> Result<f64>;

    fn register(&self, label: &str) -> Result<&Register> {
        self.registers()
            .iter()
            .find(|r| r.label() == label)
            .ok_or_else(|| Error::UnknownRegister(label.to_string()))
    }

    fn labels(&self) -> Vec<&str> {
        self.registers().iter().map(Register::label).collect()
    }
}

pub fn tensor<S: QuantumState>(a: &S, b: &S) -> Result<S> {
    a.tensor(b)
}

pub fn apply_unitary<S: QuantumState>(state: &S, u: &Unitary, targets: &[&str]) -> Result<S> {
    state.apply_unitary(u, targets)
}

pub fn partial_trace(rho: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}

pub fn fidelity<S: QuantumState>(a: &S, b: &S) -> Result<f64> {
    a.fidelity(b)
}

/// A probability distribution over the outcomes of one basis measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub entries: Vec<Weighted>,
    /// Weight outside the span of a partial basis; `None` for complete bases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outside: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weighted {
    pub label: String,
    #[serde(skip)]
    pub value: f64,
    pub probability: f64,
}

impl Distribution {
    pub fn probability(&self, label: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.probability)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum::<f64>() + self.outside.unwrap_or(0.0)
    }

    /// `Σ value · p` over the basis outcomes (the outside part contributes 0).
    pub fn expectation(&self) -> f64 {
        self.entries.iter().map(|e| e.value * e.probability).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|e| (e.label.as_str(), e.probability))
    }
}

/// Born-rule distribution of measuring `basis` on `targets`.
pub fn born_probabilities<S: QuantumState>(state: &S, basis: &Basis, targets: &[&str]) -> Result<Distribution> {
    let weights = state.basis_weights(basis, targets)?;
    let entries = weights
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let o = basis.outcome(i);
            Weighted { label: o.label, value: o.value, probability: p }
        })
        .collect::<Vec<_>>();
    let outside = basis.is_partial().then(|| {
        let inside: f64 = entries.iter().map(|e| e.probability).sum();
        (1.0 - inside).max(0.0)
    });
    Ok(Distribution { entries, outside })
}
