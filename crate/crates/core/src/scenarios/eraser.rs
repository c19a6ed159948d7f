//! Mach-Zehnder quantum eraser with a polarizing entry splitter.
//!
//! `pol` holds the polarization (`h = 0`, `v = 1`), `path` the arm (`1st = 0`,
//! `2nd = 1`) and after the exit splitter the exit beam (`1 = 0`, `2 = 1`).
//! The photon enters diagonally polarized; `h` takes the first arm.

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use super::{num, phase_grid, visibility, ScenarioOutput, Table, Tabulate};
use crate::error::Result;
use crate::meas::{phase_basis, premeasure};
use crate::qcore::{born_probabilities, Basis, Register, StateVector, Unitary};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EraserConfig {
    pub phi: f64,
    /// Project the polarization onto `|d⟩` before detection.
    pub filter_on: bool,
    /// Copy the path into a traced-out marker before the exit splitter.
    pub which_path: bool,
    /// Number of phases in the visibility sweep over `[0, 2π]`.
    pub sweep_points: usize,
}

impl Default for EraserConfig {
    fn default() -> Self {
        Self { phi: 0.0, filter_on: false, which_path: false, sweep_points: 25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EraserReport {
    pub config: EraserConfig,
    pub p_detector1: f64,
    pub sweep: Vec<(f64, f64)>,
    pub visibility: f64,
}

fn exit_splitter() -> Unitary {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let ih = C64::new(0.0, FRAC_1_SQRT_2);
    Unitary::from_rows(vec![vec![h, ih], vec![ih, h]]).expect("beamsplitter is unitary")
}

/// Probability of a click in exit beam 1 (and, with the filter, of passing it).
pub fn eraser_detection_probability(phi: f64, filter_on: bool, which_path: bool) -> Result<f64> {
    let mut regs = vec![Register::qubit("pol"), Register::qubit("path")];
    if which_path {
        regs.push(Register::qubit("marker"));
    }
    let mut psi = StateVector::zero(regs)?;
    psi.apply_unitary_mut(&Unitary::hadamard(), &["pol"])?;
    // polarizing splitter: v is reflected into the second arm
    psi.apply_unitary_mut(&Unitary::cnot(), &["pol", "path"])?;
    let zero = C64::new(0.0, 0.0);
    let shifter = Unitary::from_rows(vec![vec![C64::from_polar(1.0, phi), zero], vec![zero, C64::new(1.0, 0.0)]])?;
    psi.apply_unitary_mut(&shifter, &["path"])?;
    if which_path {
        psi = premeasure(&psi, "path", &Basis::computational(2), &["marker"])?.0;
    }
    psi.apply_unitary_mut(&exit_splitter(), &["path"])?;
    let d = if filter_on {
        born_probabilities(&psi, &phase_basis(0.0).tensor(&Basis::computational(2)), &["pol", "path"])?
            .probability("+,0")
    } else {
        born_probabilities(&psi, &Basis::computational(2), &["path"])?.probability("0")
    };
    Ok(d.unwrap_or(0.0))
}

pub fn run_eraser_with(config: EraserConfig) -> Result<EraserReport> {
    let p_detector1 = eraser_detection_probability(config.phi, config.filter_on, config.which_path)?;
    let sweep = phase_grid(config.sweep_points)
        .into_iter()
        .map(|phi| Ok((phi, eraser_detection_probability(phi, config.filter_on, config.which_path)?)))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = sweep.iter().map(|(_, p)| *p).collect();
    Ok(EraserReport { config, p_detector1, visibility: visibility(&values), sweep })
}

pub fn run_eraser(phi: f64, filter_on: bool) -> Result<EraserReport> {
    run_eraser_with(EraserConfig { phi, filter_on, ..Default::default() })
}

impl Tabulate for EraserReport {
    fn tabulate(&self) -> ScenarioOutput {
        let mut table = Table::new(["phi", "p_detector1"]);
        for (phi, p) in &self.sweep {
            table.push(vec![num(*phi), num(*p)]);
        }
        let c = &self.config;
        ScenarioOutput {
            scenario: "eraser".into(),
            parameters: BTreeMap::from([
                ("phi".to_string(), num(c.phi)),
                ("filter_on".to_string(), json!(c.filter_on)),
                ("which_path".to_string(), json!(c.which_path)),
                ("sweep_points".to_string(), json!(c.sweep_points)),
            ]),
            tables: BTreeMap::from([("sweep".to_string(), table)]),
            derived_quantities: BTreeMap::from([
                ("p_detector1".to_string(), self.p_detector1),
                ("visibility".to_string(), self.visibility),
            ]),
        }
    }
}
