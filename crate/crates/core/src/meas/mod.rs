//! The measurement-theory layer.
//!
//! A measurement is modeled in two stages. [`premeasure`] is a unitary that
//! copies the system's value in a chosen basis into ancilla registers (device,
//! friend). [`decohere`] copies a pointer value into a fresh environment
//! register and traces it out. [`full_measure`] composes both with a Born
//! readout of the pointer.

mod bases;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use bases::{dressed_basis, lab_basis, mub_basis, phase_basis, planar_basis};

use crate::error::{Error, Result};
use crate::qcore::{
    Basis, DensityOperator, Layout, QuantumState, Register, Unitary, CONSTRUCTION_TOL,
};

/// Fixed default seed for sampled readouts.
pub const DEFAULT_SEED: u64 = 42;

/// What a Friend does to her system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FriendPolicy {
    /// Reversible copy into device and friend registers; no environment.
    #[serde(rename = "premeasure")]
    PreMeasure,
    /// Pre-measurement followed by decoherence into a traced-out environment.
    #[serde(rename = "full")]
    FullMeasure,
}

impl std::str::FromStr for FriendPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "premeasure" | "pre" | "virtual" => Ok(Self::PreMeasure),
            "full" | "fullmeasure" | "measure" => Ok(Self::FullMeasure),
            other => Err(Error::Parameter(format!("unknown friend policy `{other}`"))),
        }
    }
}

impl std::fmt::Display for FriendPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::PreMeasure => "premeasure",
            Self::FullMeasure => "full",
        })
    }
}

/// Everything needed to reverse a pre-measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct PremeasurementRecord {
    system: String,
    basis: Basis,
    ancillas: Vec<String>,
    inverse_available: bool,
}

impl PremeasurementRecord {
    pub fn system(&self) -> &str {
        &self.system
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn ancillas(&self) -> &[String] {
        &self.ancillas
    }

    pub fn inverse_available(&self) -> bool {
        self.inverse_available
    }

    /// Registers whose decoherence makes this record irreversible.
    pub fn involves(&self, label: &str) -> bool {
        self.system == label || self.ancillas.iter().any(|a| a == label)
    }

    /// Marks the record irreversible if decoherence touched any involved register.
    pub fn note_decoherence(&mut self, decohered: &[&str]) {
        if decohered.iter().any(|l| self.involves(l)) {
            self.inverse_available = false;
        }
    }
}

/// A single readout branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementOutcome {
    pub label: String,
    pub probability: f64,
    #[serde(skip)]
    pub post_state: DensityOperator,
}

/// Result of [`full_measure`]: the outcome ensemble, one sampled branch, and the
/// decohered state (the probability-weighted mixture of the branches).
#[derive(Debug, Clone)]
pub struct FullMeasurement {
    pub sampled: MeasurementOutcome,
    pub ensemble: Vec<MeasurementOutcome>,
    pub state: DensityOperator,
    pub record: PremeasurementRecord,
}

/// `Σᵢ |bᵢ⟩⟨bᵢ| ⊗ Xⁱ` on (system, ancilla), where `X` is the cyclic shift.
///
/// With the ancilla in `|0⟩` this writes `|bᵢ⟩|0⟩ → |bᵢ⟩|i⟩`.
fn copy_unitary(basis: &Basis) -> Unitary {
    let d = basis.dim();
    let n = d * d;
    let mut data = vec![C64::new(0.0, 0.0); n * n];
    for (i, b) in basis.vectors().iter().enumerate() {
        for s_out in 0..d {
            for s_in in 0..d {
                let p = b[s_out] * b[s_in].conj();
                if p == C64::new(0.0, 0.0) {
                    continue;
                }
                for a_in in 0..d {
                    let a_out = (a_in + i) % d;
                    data[(s_out * d + a_out) * n + s_in * d + a_in] += p;
                }
            }
        }
    }
    Unitary::new(n, data).expect("copy operator of an orthonormal basis is unitary")
}

fn check_complete(basis: &Basis, dim: usize) -> Result<()> {
    if basis.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: basis.dim() });
    }
    if basis.is_partial() {
        return Err(Error::IncompleteBasis(dim));
    }
    Ok(())
}

/// Correlates `system` with each ancilla in `basis`:
/// `Σᵢ αᵢ|bᵢ⟩|0⟩…|0⟩ → Σᵢ αᵢ|bᵢ⟩|i⟩…|i⟩`.
///
/// Ancillas must be in `|0⟩` (the `init` state) and have the system's dimension.
pub fn premeasure<S: QuantumState>(
    state: &S,
    system: &str,
    basis: &Basis,
    ancillas: &[&str],
) -> Result<(S, PremeasurementRecord)> {
    let d = state.register(system)?.dim();
    check_complete(basis, d)?;
    if ancillas.is_empty() {
        return Err(Error::Parameter("pre-measurement needs at least one ancilla".into()));
    }
    for a in ancillas {
        let reg = state.register(a)?;
        if reg.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: reg.dim() });
        }
        if *a == system {
            return Err(Error::DuplicateRegister(a.to_string()));
        }
        let rho = state.reduced(&[a])?;
        if rho.get(0, 0).re < 1.0 - CONSTRUCTION_TOL {
            return Err(Error::AncillaNotInitial(a.to_string()));
        }
    }
    let u = copy_unitary(basis);
    let mut out = state.clone();
    for a in ancillas {
        out = out.apply_unitary(&u, &[system, a])?;
    }
    let record = PremeasurementRecord {
        system: system.to_string(),
        basis: basis.clone(),
        ancillas: ancillas.iter().map(|a| a.to_string()).collect(),
        inverse_available: true,
    };
    Ok((out, record))
}

/// Applies the inverse of a recorded pre-measurement.
pub fn undo_premeasure<S: QuantumState>(state: &S, record: &PremeasurementRecord) -> Result<S> {
    if !record.inverse_available {
        return Err(Error::InverseUnavailable);
    }
    force_inverse(state, record)
}

/// Applies the inverse unitary regardless of intervening decoherence.
///
/// On a decohered state this does not restore the input; it exists to
/// quantify how much of the original survives.
pub fn force_inverse<S: QuantumState>(state: &S, record: &PremeasurementRecord) -> Result<S> {
    let u = copy_unitary(&record.basis).dagger();
    let mut out = state.clone();
    for a in record.ancillas.iter().rev() {
        out = out.apply_unitary(&u, &[record.system.as_str(), a.as_str()])?;
    }
    Ok(out)
}

fn fresh_label(registers: &[Register], stem: &str) -> String {
    (0..)
        .map(|k| format!("{stem}{k}"))
        .find(|l| registers.iter().all(|r| r.label() != l))
        .unwrap()
}

/// Full decoherence of `pointers` in `pointer_basis`.
///
/// A fresh environment register receives a perfect copy of the pointer value
/// and is traced out; the result is block-diagonal in `pointer_basis`.
pub fn decohere<S: QuantumState>(state: &S, pointers: &[&str], pointer_basis: &Basis) -> Result<DensityOperator> {
    decohere_with_strength(state, pointers, pointer_basis, 1.0)
}

/// Partial decoherence: off-diagonal blocks in `pointer_basis` shrink by `1 − strength`.
pub fn decohere_with_strength<S: QuantumState>(
    state: &S,
    pointers: &[&str],
    pointer_basis: &Basis,
    strength: f64,
) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&strength) {
        return Err(Error::Parameter(format!("decoherence strength {strength} outside [0, 1]")));
    }
    if pointers.is_empty() {
        return Err(Error::EmptySelection);
    }
    let mut dp = 1;
    for p in pointers {
        dp *= state.register(p)?.dim();
    }
    check_complete(pointer_basis, dp)?;
    let rho = state.to_density();
    let env_label = fresh_label(rho.registers(), "env");
    let env = Register::new(env_label.clone(), dp)?;
    let env_state = DensityOperator::from_pure(&crate::qcore::StateVector::zero(vec![env])?);
    let joined = rho.tensor(&env_state)?;

    // Copy into the environment: the pointer is the "system" of a copy unitary
    // over the joint pointer space.
    let mut targets: Vec<&str> = pointers.to_vec();
    targets.push(&env_label);
    let copied = joined.apply_unitary(&copy_unitary(pointer_basis), &targets)?;

    let keep = rho.labels();
    let decohered = copied.partial_trace(&keep)?;
    if strength == 1.0 {
        return Ok(decohered);
    }
    DensityOperator::mixture(&[(1.0 - strength, &rho), (strength, &decohered)])
}

/// Projects `rho` onto digit `value` of register `target`, returning the weight
/// and the normalized branch (or `None` for a zero-weight branch).
pub fn project_register(rho: &DensityOperator, target: &str, value: usize) -> Result<(f64, Option<DensityOperator>)> {
    let layout = Layout::new(rho.registers(), &[target])?;
    if value >= layout.target_dim() {
        return Err(Error::DimensionMismatch { expected: layout.target_dim(), actual: value });
    }
    let d = rho.dim();
    let base = layout.target_offsets[value];
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    let mut weight = 0.0;
    for &r1 in &layout.rest_offsets {
        weight += rho.get(base + r1, base + r1).re;
        for &r2 in &layout.rest_offsets {
            data[(base + r1) * d + base + r2] = rho.get(base + r1, base + r2);
        }
    }
    if weight <= 0.0 {
        return Ok((0.0, None));
    }
    data.iter_mut().for_each(|x| *x /= weight);
    Ok((weight, Some(DensityOperator::from_raw(rho.registers().to_vec(), data))))
}

/// Pre-measurement, decoherence of the first ancilla (the pointer), and Born
/// readout. Returns the full ensemble and one branch sampled from `rng`.
pub fn full_measure<S: QuantumState, R: Rng + ?Sized>(
    state: &S,
    system: &str,
    basis: &Basis,
    ancillas: &[&str],
    rng: &mut R,
) -> Result<FullMeasurement> {
    let (pm, mut record) = premeasure(state, system, basis, ancillas)?;
    let pointer = ancillas[0];
    let d = basis.dim();
    let rho = decohere(&pm, &[pointer], &Basis::computational(d))?;
    record.note_decoherence(&[pointer]);

    let mut ensemble = Vec::with_capacity(d);
    for i in 0..d {
        let (p, branch) = project_register(&rho, pointer, i)?;
        ensemble.push(MeasurementOutcome {
            label: basis.labels()[i].clone(),
            probability: p,
            post_state: branch.unwrap_or_else(|| rho.clone()),
        });
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut pick = ensemble.iter().rposition(|o| o.probability > 0.0).unwrap_or(0);
    for (i, o) in ensemble.iter().enumerate() {
        acc += o.probability;
        if u < acc && o.probability > 0.0 {
            pick = i;
            break;
        }
    }
    Ok(FullMeasurement { sampled: ensemble[pick].clone(), ensemble, state: rho, record })
}
