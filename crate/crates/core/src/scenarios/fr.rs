//! Two labs, two friends, two super-Wigners.
//!
//! The coin `g` and the system `s` start entangled as
//! `√(1/3)|H⟩|−1⟩ + √(2/3)|T⟩|+⟩`. Friend `F_g` (with device `D_g`) acts on
//! `g` in the `{H, T}` basis, friend `F_s` (with `D_s`) on `s` in the `{−1, +1}`
//! basis. Wigner `W_g` then measures `|±⟩_{L_g} = (|HHH⟩ ± |TTT⟩)/√2` and `W_s`
//! measures the analogous `|±⟩_{L_s}`. The "−" outcomes are `ok̄` (for `W_g`)
//! and `ok` (for `W_s`).

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;

use super::{num, ScenarioOutput, Table, Tabulate};
use crate::error::Result;
use crate::meas::{full_measure, lab_basis, phase_basis, premeasure, project_register, FriendPolicy, DEFAULT_SEED};
use crate::qcore::{born_probabilities, Basis, DensityOperator, QuantumState, Register, StateVector};

const LAB_G: [&str; 3] = ["g", "Dg", "Fg"];
const LAB_S: [&str; 3] = ["s", "Ds", "Fs"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrRow {
    /// Friend record this row is conditioned on, or `all`.
    pub condition: String,
    pub weight: f64,
    /// Joint `(W_g, W_s)` outcomes, plus `outside` when the lab bases miss weight.
    pub outcomes: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrReport {
    pub policy: FriendPolicy,
    /// `P(W_g = ok̄ ∧ W_s = ok)`
    pub p_ok_okbar: f64,
    /// `P(W_g = ok̄)`
    pub p_wg_minus: f64,
    /// `P(W_s = ok | W_g = ok̄)`
    pub p_ok_given_okbar: f64,
    /// `P(F_g = T ∧ s = −)`, measured on `s` directly before `F_s` acts.
    pub p_t_and_ok: f64,
    /// `P(W_s = ok | F_g = T)`; only defined when the friend holds a record.
    pub p_ok_given_t: Option<f64>,
    pub table: Vec<FrRow>,
}

fn coin_basis() -> Basis {
    Basis::computational(2).relabeled(["H", "T"]).unwrap()
}

fn spin_basis() -> Basis {
    Basis::computational(2).relabeled(["-1", "+1"]).unwrap()
}

/// `|init⟩_{gs}` with all devices and friends in `|0⟩`.
fn initial_state() -> Result<StateVector> {
    let third = (1.0f64 / 3.0).sqrt();
    // |H,−1⟩, |H,+1⟩, |T,−1⟩, |T,+1⟩; √(2/3)|+⟩ = √(1/3)(|−1⟩ + |+1⟩)
    let amps = [third, 0.0, third, third].map(|a| C64::new(a, 0.0)).to_vec();
    let gs = StateVector::new(vec![Register::qubit("g"), Register::qubit("s")], amps)?;
    let rest = StateVector::zero(["Dg", "Fg", "Ds", "Fs"].map(Register::qubit).to_vec())?;
    gs.tensor(&rest)?.reorder(&["g", "Dg", "Fg", "s", "Ds", "Fs"])
}

fn wigner_basis() -> Result<Basis> {
    let wg = lab_basis(&coin_basis(), &phase_basis(0.0), 2)?;
    let ws = lab_basis(&spin_basis(), &phase_basis(0.0), 2)?;
    Ok(wg.tensor(&ws))
}

fn joint_row<S: QuantumState>(state: &S, condition: &str, weight: f64) -> Result<FrRow> {
    let targets: Vec<&str> = LAB_G.iter().chain(&LAB_S).copied().collect();
    let d = born_probabilities(state, &wigner_basis()?, &targets)?;
    let mut outcomes: Vec<(String, f64)> = d.iter().map(|(l, p)| (l.to_string(), p)).collect();
    if let Some(out) = d.outside {
        outcomes.push(("outside".into(), out));
    }
    Ok(FrRow { condition: condition.into(), weight, outcomes })
}

fn pick(row: &FrRow, label: &str) -> f64 {
    row.outcomes.iter().find(|(l, _)| l == label).map(|(_, p)| *p).unwrap_or(0.0)
}

/// Situation 2 on the state right after `F_g` acts: `T` for `g` with `−` for `s`.
fn t_and_minus<S: QuantumState>(state: &S) -> Result<f64> {
    let basis = coin_basis().tensor(&phase_basis(0.0));
    let d = born_probabilities(state, &basis, &["Fg", "s"])?;
    Ok(d.probability("T,-").unwrap_or(0.0))
}

pub fn run_fr(policy: FriendPolicy) -> Result<FrReport> {
    let init = initial_state()?;
    let (table, p_t_and_ok) = match policy {
        FriendPolicy::PreMeasure => {
            let (after_g, _) = premeasure(&init, "g", &coin_basis(), &["Dg", "Fg"])?;
            let p_t = t_and_minus(&after_g)?;
            let (after_s, _) = premeasure(&after_g, "s", &spin_basis(), &["Ds", "Fs"])?;
            (vec![joint_row(&after_s, "all", 1.0)?], p_t)
        }
        FriendPolicy::FullMeasure => {
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
            let fg = full_measure(&init, "g", &coin_basis(), &["Dg", "Fg"], &mut rng)?;
            let p_t = t_and_minus(&fg.state)?;
            let fs = full_measure(&fg.state, "s", &spin_basis(), &["Ds", "Fs"], &mut rng)?;
            let mut rows = vec![joint_row(&fs.state, "all", 1.0)?];
            for (digit, label) in ["H", "T"].iter().enumerate() {
                let (w, branch) = project_register(&fs.state, "Fg", digit)?;
                if let Some(branch) = branch {
                    rows.push(joint_row::<DensityOperator>(&branch, &format!("Fg={label}"), w)?);
                }
            }
            (rows, p_t)
        }
    };
    let all = &table[0];
    let p_ok_okbar = pick(all, "-,-");
    let p_wg_minus = pick(all, "-,+") + pick(all, "-,-");
    let p_ok_given_t = table
        .iter()
        .find(|r| r.condition == "Fg=T")
        .map(|r| pick(r, "+,-") + pick(r, "-,-"));
    Ok(FrReport {
        policy,
        p_ok_okbar,
        p_wg_minus,
        p_ok_given_okbar: p_ok_okbar / p_wg_minus,
        p_t_and_ok,
        p_ok_given_t,
        table,
    })
}

impl Tabulate for FrReport {
    fn tabulate(&self) -> ScenarioOutput {
        let mut table = Table::new(["condition", "weight", "outcome", "probability"]);
        for row in &self.table {
            for (label, p) in &row.outcomes {
                table.push(vec![json!(row.condition), num(row.weight), json!(label), num(*p)]);
            }
        }
        let mut derived = BTreeMap::from([
            ("p_ok_okbar".to_string(), self.p_ok_okbar),
            ("p_wg_minus".to_string(), self.p_wg_minus),
            ("p_ok_given_okbar".to_string(), self.p_ok_given_okbar),
            ("p_T_and_ok".to_string(), self.p_t_and_ok),
        ]);
        if let Some(p) = self.p_ok_given_t {
            derived.insert("p_ok_given_T".into(), p);
        }
        ScenarioOutput {
            scenario: "fr".into(),
            parameters: BTreeMap::from([("policy".to_string(), json!(self.policy.to_string()))]),
            tables: BTreeMap::from([("joint".to_string(), table)]),
            derived_quantities: derived,
        }
    }
}
