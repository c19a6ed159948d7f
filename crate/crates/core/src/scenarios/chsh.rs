//! CHSH between two Wigners whose friends share a singlet.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use super::{num, ScenarioOutput, Table, Tabulate};
use crate::error::{Error, Result};
use crate::meas::{dressed_basis, full_measure, planar_basis, premeasure, FriendPolicy, DEFAULT_SEED};
use crate::qcore::{born_probabilities, Basis, DensityOperator, QuantumState, Register, StateVector};

/// Planar measurement angles for Alice (`a`, `a′`) and Bob (`b`, `b′`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshAngles {
    pub a: f64,
    pub a2: f64,
    pub b: f64,
    pub b2: f64,
}

impl ChshAngles {
    /// `a = 0, a′ = π/2, b = π/4, b′ = −π/4`.
    pub fn standard() -> Self {
        Self { a: 0.0, a2: FRAC_PI_2, b: FRAC_PI_4, b2: -FRAC_PI_4 }
    }
}

impl Default for ChshAngles {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshReport {
    pub policy: FriendPolicy,
    pub angles: ChshAngles,
    /// `E(a,b), E(a,b′), E(a′,b), E(a′,b′)`
    pub correlators: [f64; 4],
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshGridReport {
    pub step_deg: f64,
    pub points: usize,
    pub max_s: f64,
    pub argmax: ChshAngles,
}

fn chsh_value(e: [f64; 4]) -> f64 {
    (e[0] + e[1] + e[2] - e[3]).abs()
}

/// `(|01⟩ − |10⟩)/√2` on `A, B` with friends `FA, FB` in `|0⟩`.
fn initial_state() -> Result<StateVector> {
    let h = FRAC_1_SQRT_2;
    let amps = [0.0, h, -h, 0.0].map(|x| C64::new(x, 0.0)).to_vec();
    let singlet = StateVector::new(vec![Register::qubit("A"), Register::qubit("B")], amps)?;
    singlet.tensor(&StateVector::zero(vec![Register::qubit("FA"), Register::qubit("FB")])?)
}

/// Friends act in the computational basis per `policy`.
enum Lab {
    Pure(StateVector),
    Separable(DensityOperator),
}

fn prepare(policy: FriendPolicy) -> Result<Lab> {
    let init = initial_state()?;
    let z = Basis::computational(2);
    Ok(match policy {
        FriendPolicy::PreMeasure => {
            let (s, _) = premeasure(&init, "A", &z, &["FA"])?;
            Lab::Pure(premeasure(&s, "B", &z, &["FB"])?.0)
        }
        FriendPolicy::FullMeasure => {
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
            let a = full_measure(&init, "A", &z, &["FA"], &mut rng)?;
            let b = full_measure(&a.state, "B", &z, &["FB"], &mut rng)?;
            Lab::Separable(b.state.partial_trace(&["A", "B"])?)
        }
    })
}

fn correlator(lab: &Lab, a: f64, b: f64) -> Result<f64> {
    Ok(match lab {
        Lab::Pure(psi) => {
            let z = Basis::computational(2);
            let (q, f) = (Register::qubit("q"), Register::qubit("f"));
            let da = dressed_basis(&q, &f, &z, &planar_basis(a))?;
            let db = dressed_basis(&q, &f, &z, &planar_basis(b))?;
            born_probabilities(psi, &da.tensor(&db), &["A", "FA", "B", "FB"])?.expectation()
        }
        Lab::Separable(rho) => {
            born_probabilities(rho, &planar_basis(a).tensor(&planar_basis(b)), &["A", "B"])?.expectation()
        }
    })
}

pub fn run_brukner_chsh_with(policy: FriendPolicy, angles: ChshAngles) -> Result<ChshReport> {
    let lab = prepare(policy)?;
    let ChshAngles { a, a2, b, b2 } = angles;
    let correlators = [
        correlator(&lab, a, b)?,
        correlator(&lab, a, b2)?,
        correlator(&lab, a2, b)?,
        correlator(&lab, a2, b2)?,
    ];
    Ok(ChshReport { policy, angles, correlators, s: chsh_value(correlators) })
}

pub fn run_brukner_chsh(policy: FriendPolicy) -> Result<ChshReport> {
    run_brukner_chsh_with(policy, ChshAngles::standard())
}

/// Maximum `S` over all planar settings on a `step_deg` grid of `[0°, 360°)`,
/// with decohering friends.
pub fn chsh_grid(step_deg: f64) -> Result<ChshGridReport> {
    if !(step_deg > 0.0 && step_deg <= 180.0) {
        return Err(Error::Parameter(format!("grid step {step_deg}° outside (0, 180]")));
    }
    let n = (360.0 / step_deg).round() as usize;
    let angles: Vec<f64> = (0..n).map(|k| (k as f64 * step_deg).to_radians()).collect();
    let lab = prepare(FriendPolicy::FullMeasure)?;
    let mut e = vec![0.0; n * n];
    for (i, &a) in angles.iter().enumerate() {
        for (j, &b) in angles.iter().enumerate() {
            e[i * n + j] = correlator(&lab, a, b)?;
        }
    }
    let mut best = (f64::NEG_INFINITY, [0; 4]);
    for i in 0..n {
        for i2 in 0..n {
            for j in 0..n {
                let (x, y) = (e[i * n + j], e[i2 * n + j]);
                for j2 in 0..n {
                    let s = (x + e[i * n + j2] + y - e[i2 * n + j2]).abs();
                    if s > best.0 {
                        best = (s, [i, i2, j, j2]);
                    }
                }
            }
        }
    }
    let [i, i2, j, j2] = best.1;
    Ok(ChshGridReport {
        step_deg,
        points: n.pow(4),
        max_s: best.0,
        argmax: ChshAngles { a: angles[i], a2: angles[i2], b: angles[j], b2: angles[j2] },
    })
}

impl Tabulate for ChshReport {
    fn tabulate(&self) -> ScenarioOutput {
        let mut table = Table::new(["setting", "correlator"]);
        for (name, e) in ["a,b", "a,b'", "a',b", "a',b'"].iter().zip(self.correlators) {
            table.push(vec![json!(name), num(e)]);
        }
        let ChshAngles { a, a2, b, b2 } = self.angles;
        ScenarioOutput {
            scenario: "chsh".into(),
            parameters: BTreeMap::from([
                ("policy".to_string(), json!(self.policy.to_string())),
                ("angles".to_string(), json!([a, a2, b, b2].map(num))),
            ]),
            tables: BTreeMap::from([("correlators".to_string(), table)]),
            derived_quantities: BTreeMap::from([("S".to_string(), self.s)]),
        }
    }
}

impl Tabulate for ChshGridReport {
    fn tabulate(&self) -> ScenarioOutput {
        let ChshAngles { a, a2, b, b2 } = self.argmax;
        let mut table = Table::new(["a", "a'", "b", "b'", "S"]);
        table.push(vec![num(a), num(a2), num(b), num(b2), num(self.max_s)]);
        ScenarioOutput {
            scenario: "chsh".into(),
            parameters: BTreeMap::from([
                ("policy".to_string(), json!("full")),
                ("grid_deg".to_string(), num(self.step_deg)),
            ]),
            tables: BTreeMap::from([("argmax".to_string(), table)]),
            derived_quantities: BTreeMap::from([
                ("max_S".to_string(), self.max_s),
                ("grid_points".to_string(), self.points as f64),
            ]),
        }
    }
}
