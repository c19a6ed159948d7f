//! The Wigner's-friend gedankenexperiments as parameterized protocols.
//!
//! Every `run_*` function is a pure computation returning a typed report;
//! [`Tabulate`] flattens any report into named tables and derived scalars for
//! serialization.

mod chsh;
mod concordant;
mod counterfactual;
mod cut;
mod eraser;
mod fr;
mod ghz;
mod sealed;

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

pub use chsh::{chsh_grid, run_brukner_chsh, run_brukner_chsh_with, ChshAngles, ChshGridReport, ChshReport};
pub use concordant::{run_concordant_wigner, ConcordantReport};
pub use counterfactual::{
    counterfactual_search, ghz_constraints, Constraint, CounterfactualAssignment, CounterfactualReport, Role,
    Var,
};
pub use cut::{heisenberg_cut, run_cut_scaling, run_cut_sweep, CutReport, CutScalingConfig, DEFAULT_MAX_QUBITS};
pub use eraser::{eraser_detection_probability, run_eraser, run_eraser_with, EraserConfig, EraserReport};
pub use fr::{run_fr, FrReport, FrRow};
pub use ghz::{ghz_distribution, run_ghz_correlation, Agent, GhzReport, GhzSettings};
pub use sealed::{run_sealed_lab, SealedLabReport, SealedLabSetting};

/// The scenario identifiers, in listing order.
pub const SCENARIOS: [&str; 8] =
    ["fr", "ghz", "counterfactual", "chsh", "eraser", "cut", "sealed-lab", "concordant"];

/// A rectangular table with named columns.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Flattened view of a scenario report.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScenarioOutput {
    pub scenario: String,
    pub parameters: BTreeMap<String, Value>,
    pub tables: BTreeMap<String, Table>,
    pub derived_quantities: BTreeMap<String, f64>,
}

pub trait Tabulate {
    fn tabulate(&self) -> ScenarioOutput;
}

/// `(max − min)/(max + min)`; zero for an all-zero fringe.
pub fn visibility(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() || max + min <= 0.0 {
        return 0.0;
    }
    (max - min) / (max + min)
}

/// `n` evenly spaced phases covering `[0, 2π]`, endpoints included.
pub fn phase_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| k as f64 * std::f64::consts::TAU / (n - 1) as f64).collect(),
    }
}

pub(crate) fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visibility_edge_cases() {
        assert_eq!(visibility(&[0.25, 0.25]), 0.0);
        assert_eq!(visibility(&[0.0, 0.5]), 1.0);
        assert_eq!(visibility(&[0.0, 0.0]), 0.0);
        assert_eq!(visibility(&[]), 0.0);
    }

    #[test]
    fn grid_includes_quarter_points() {
        let g = phase_grid(25);
        assert_eq!(g.len(), 25);
        assert!((g[6] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((g[24] - std::f64::consts::TAU).abs() < 1e-15);
    }
}
