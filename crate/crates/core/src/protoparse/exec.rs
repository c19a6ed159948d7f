use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

use super::ast::{Cmp, Program};
use super::validate::{compile, AssertionSpec, Protocol, QuantitySpec, Step};
use super::{Diagnostic, Span};
use crate::error::Result;
use crate::meas::{decohere_with_strength, premeasure, undo_premeasure, PremeasurementRecord};
use crate::qcore::{born_probabilities, Basis, DensityOperator, Distribution, QuantumState, Register, StateVector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementReport {
    pub name: String,
    pub registers: Vec<String>,
    pub distribution: Distribution,
    /// One outcome drawn from the seeded generator (`outside` for weight off a partial basis).
    pub sampled: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssertionOutcome {
    pub statement: String,
    pub line: u32,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    /// `actual − expected`
    pub delta: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExecutionReport {
    pub seed: u64,
    pub measurements: Vec<MeasurementReport>,
    pub assertions: Vec<AssertionOutcome>,
    pub warnings: Vec<Diagnostic>,
}

impl ExecutionReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

/// Validates and runs `program`.
pub fn execute(program: &Program, seed: u64) -> std::result::Result<ExecutionReport, Vec<Diagnostic>> {
    let protocol = compile(program)?;
    protocol
        .run(seed)
        .map_err(|e| vec![Diagnostic::error(Span::default(), format!("execution failed: {e}"))])
}

#[derive(Clone)]
enum Lab {
    Pure(StateVector),
    Mixed(DensityOperator),
}

macro_rules! on_lab {
    ($lab:expr, $s:ident => $body:expr) => {
        match $lab {
            Lab::Pure($s) => $body,
            Lab::Mixed($s) => $body,
        }
    };
}

/// Runs a step that keeps the representation (pure stays pure).
macro_rules! keep {
    ($lab:expr, $s:ident => $body:expr) => {
        match $lab {
            Lab::Pure($s) => Lab::Pure($body),
            Lab::Mixed($s) => Lab::Mixed($body),
        }
    };
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

impl Protocol {
    fn initial_state(&self) -> Result<Option<StateVector>> {
        if self.registers.is_empty() {
            return Ok(None);
        }
        let mut covered: Vec<&str> = Vec::new();
        let mut psi: Option<StateVector> = None;
        let mut join = |piece: StateVector| -> Result<()> {
            psi = Some(match psi.take() {
                None => piece,
                Some(p) => p.tensor(&piece)?,
            });
            Ok(())
        };
        for (_, regs, amps) in &self.states {
            let registers: Vec<Register> = regs
                .iter()
                .map(|l| self.registers.iter().find(|r| r.label() == l).cloned().expect("validated"))
                .collect();
            join(StateVector::new(registers, amps.clone())?)?;
            covered.extend(regs.iter().map(String::as_str));
        }
        let rest: Vec<Register> = self.registers.iter().filter(|r| !covered.contains(&r.label())).cloned().collect();
        if !rest.is_empty() {
            join(StateVector::zero(rest)?)?;
        }
        let order: Vec<&str> = self.registers.iter().map(Register::label).collect();
        psi.expect("at least one register").reorder(&order).map(Some)
    }

    /// Runs the steps, then evaluates measurements and assertions on the final state.
    pub fn run(&self, seed: u64) -> Result<ExecutionReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lab = self.initial_state()?.map(Lab::Pure);
        let mut records: HashMap<String, Vec<PremeasurementRecord>> = HashMap::new();
        for step in &self.steps {
            let Some(current) = lab.as_ref() else { break };
            let next = match step {
                Step::Premeasure { system, basis, ancillas } => {
                    let anc = strs(ancillas);
                    let (next, record) = match current {
                        Lab::Pure(s) => premeasure(s, system, basis, &anc).map(|(s, r)| (Lab::Pure(s), r))?,
                        Lab::Mixed(s) => premeasure(s, system, basis, &anc).map(|(s, r)| (Lab::Mixed(s), r))?,
                    };
                    records.entry(system.clone()).or_default().push(record);
                    next
                }
                Step::Decohere { registers, basis, strength } => {
                    let regs = strs(registers);
                    for r in records.values_mut().flatten() {
                        r.note_decoherence(&regs);
                    }
                    Lab::Mixed(on_lab!(current, s => decohere_with_strength(s, &regs, basis, *strength))?)
                }
                Step::Undo { system } => {
                    let record = records.get_mut(system).and_then(Vec::pop).expect("validated undo");
                    keep!(current, s => undo_premeasure(s, &record)?)
                }
                Step::Apply { unitary, targets } => keep!(current, s => s.apply_unitary(unitary, &strs(targets))?),
            };
            lab = Some(next);
        }

        let mut measurements = Vec::with_capacity(self.measurements.len());
        let mut assertions = Vec::with_capacity(self.assertions.len());
        if let Some(lab) = &lab {
            for m in &self.measurements {
                let distribution = on_lab!(lab, s => born_probabilities(s, &m.basis, &strs(&m.targets)))?;
                let sampled = sample(&distribution, rng.gen());
                measurements.push(MeasurementReport {
                    name: m.name.clone(),
                    registers: m.targets.clone(),
                    distribution,
                    sampled,
                });
            }
            for a in &self.assertions {
                let actual = self.quantity(lab, a)?;
                assertions.push(outcome(a, actual));
            }
        }
        Ok(ExecutionReport { seed, measurements, assertions, warnings: self.warnings.clone() })
    }

    fn joint(&self, idx: &[usize]) -> (Basis, Vec<&str>) {
        let mut basis: Option<Basis> = None;
        let mut targets = Vec::new();
        for &k in idx {
            let m = &self.measurements[k];
            basis = Some(match basis {
                None => m.basis.clone(),
                Some(b) => b.tensor(&m.basis),
            });
            targets.extend(m.targets.iter().map(String::as_str));
        }
        (basis.expect("non-empty selection"), targets)
    }

    fn quantity(&self, lab: &Lab, a: &AssertionSpec) -> Result<f64> {
        Ok(match &a.quantity {
            QuantitySpec::Prob(items) => {
                let idx: Vec<usize> = items.iter().map(|(m, _)| *m).collect();
                let (basis, targets) = self.joint(&idx);
                let d = on_lab!(lab, s => born_probabilities(s, &basis, &targets))?;
                let index = items.iter().fold(0, |acc, &(m, o)| acc * self.measurements[m].basis.len() + o);
                d.entries[index].probability
            }
            QuantitySpec::Corr(idx) => {
                let (basis, targets) = self.joint(idx);
                on_lab!(lab, s => born_probabilities(s, &basis, &targets))?.expectation()
            }
            QuantitySpec::Fidelity(k) => {
                let (_, regs, amps) = &self.states[*k];
                let targets = strs(regs);
                let rho = on_lab!(lab, s => s.reduced(&targets))?;
                let psi = StateVector::new(rho.registers().to_vec(), amps.clone())?;
                rho.fidelity_with_pure(&psi)?
            }
        })
    }
}

fn sample(d: &Distribution, u: f64) -> String {
    let mut acc = 0.0;
    for (label, p) in d.iter() {
        acc += p;
        if u < acc {
            return label.to_string();
        }
    }
    match d.outside {
        Some(p) if p > 0.0 => "outside".into(),
        _ => d.entries.iter().rev().find(|e| e.probability > 0.0).map(|e| e.label.clone()).unwrap_or_default(),
    }
}

fn outcome(a: &AssertionSpec, actual: f64) -> AssertionOutcome {
    let delta = actual - a.expected;
    let passed = match a.cmp {
        Cmp::Eq => delta.abs() <= a.tol,
        Cmp::Le => actual <= a.expected + a.tol,
        Cmp::Ge => actual >= a.expected - a.tol,
    };
    AssertionOutcome {
        statement: a.text.clone(),
        line: a.line,
        expected: a.expected,
        actual,
        tolerance: a.tol,
        delta,
        passed,
    }
}
