//! Three-station GHZ correlations with optional friends.

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use super::{num, ScenarioOutput, Table, Tabulate};
use crate::error::{Error, Result};
use crate::meas::{dressed_basis, phase_basis, premeasure};
use crate::qcore::{born_probabilities, Basis, Distribution, QuantumState, Register, StateVector};

/// Who reads station `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Agent {
    /// No friend; `φ_m` is measured on the qubit itself.
    Direct,
    /// A friend pre-measures in the friend basis; Wigner measures the dressed
    /// basis for `φ_m` on (qubit, friend).
    Wigner,
    /// The friend pre-measures in the `φ_m` basis and her record is read.
    Friend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzSettings {
    pub phi: [f64; 3],
    pub agents: [Agent; 3],
    /// Friend pre-measurement phase at Wigner stations (setting n = 3 by default).
    pub friend_phi: f64,
}

impl GhzSettings {
    pub fn direct(phi: [f64; 3]) -> Self {
        Self { phi, agents: [Agent::Direct; 3], friend_phi: FRAC_PI_2 }
    }

    pub fn with_agents(phi: [f64; 3], agents: [Agent; 3]) -> Self {
        Self { phi, agents, friend_phi: FRAC_PI_2 }
    }

    fn validate(&self) -> Result<()> {
        if self.phi.iter().chain([&self.friend_phi]).any(|p| !p.is_finite()) {
            return Err(Error::Parameter("GHZ phases must be finite".into()));
        }
        Ok(())
    }
}

/// `(|000⟩ + |111⟩)/√2` on `s1, s2, s3`.
pub(crate) fn ghz_state() -> StateVector {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0] = h;
    amps[7] = h;
    StateVector::new(["s1", "s2", "s3"].map(Register::qubit).to_vec(), amps).expect("GHZ state is normalized")
}

/// Joint distribution of the three ±1 outcomes, labels `"r,s,t"`.
pub fn ghz_distribution(settings: &GhzSettings) -> Result<Distribution> {
    settings.validate()?;
    let systems = ["s1", "s2", "s3"];
    let friends = ["F1", "F2", "F3"];
    let mut regs: Vec<Register> = Vec::new();
    for (m, a) in settings.agents.iter().enumerate() {
        if *a != Agent::Direct {
            regs.push(Register::qubit(friends[m]));
        }
    }
    let mut state = ghz_state();
    if !regs.is_empty() {
        state = state.tensor(&StateVector::zero(regs)?)?;
    }

    let record = Basis::computational(2).relabeled(["+", "-"])?;
    let mut basis: Option<Basis> = None;
    let mut targets: Vec<&str> = Vec::new();
    for m in 0..3 {
        let local = match settings.agents[m] {
            Agent::Direct => {
                targets.push(systems[m]);
                phase_basis(settings.phi[m])
            }
            Agent::Friend => {
                state = premeasure(&state, systems[m], &phase_basis(settings.phi[m]), &[friends[m]])?.0;
                targets.push(friends[m]);
                record.clone()
            }
            Agent::Wigner => {
                let pre = phase_basis(settings.friend_phi);
                state = premeasure(&state, systems[m], &pre, &[friends[m]])?.0;
                targets.extend([systems[m], friends[m]]);
                let q = Register::qubit(systems[m]);
                let f = Register::qubit(friends[m]);
                dressed_basis(&q, &f, &pre, &phase_basis(settings.phi[m]))?
            }
        };
        basis = Some(match basis {
            None => local,
            Some(b) => b.tensor(&local),
        });
    }
    born_probabilities(&state, &basis.expect("three stations"), &targets)
}

/// `E = Σ r·s·t·P(r, s, t)`.
pub fn run_ghz_correlation(settings: &GhzSettings) -> Result<f64> {
    Ok(ghz_distribution(settings)?.expectation())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzReport {
    pub settings: GhzSettings,
    pub distribution: Distribution,
    pub correlation: f64,
}

impl GhzReport {
    pub fn run(settings: GhzSettings) -> Result<Self> {
        let distribution = ghz_distribution(&settings)?;
        let correlation = distribution.expectation();
        Ok(Self { settings, distribution, correlation })
    }
}

impl Tabulate for GhzReport {
    fn tabulate(&self) -> ScenarioOutput {
        let mut table = Table::new(["outcome", "probability"]);
        for (label, p) in self.distribution.iter() {
            table.push(vec![json!(label), num(p)]);
        }
        let s = &self.settings;
        ScenarioOutput {
            scenario: "ghz".into(),
            parameters: BTreeMap::from([
                ("phi".to_string(), json!(s.phi.map(num))),
                ("agents".to_string(), json!(s.agents)),
                ("friend_phi".to_string(), num(s.friend_phi)),
            ]),
            tables: BTreeMap::from([("joint".to_string(), table)]),
            derived_quantities: BTreeMap::from([("correlation".to_string(), self.correlation)]),
        }
    }
}
