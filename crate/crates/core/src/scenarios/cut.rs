//! Interference of a coin whose friend has `m` record qubits, some of which leak.
//!
//! The coin `g` starts in `(|H⟩ + e^{iφ}|T⟩)/√2` and is pre-measured in
//! `{H, T}` into a device `D` and friend qubits `F1 … Fm`. Each friend qubit
//! dephases with strength `p` in the `{H, T}` basis. Wigner then applies the
//! inverse of the pre-measurement and measures `g` in `{|±⟩}`.

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::time::Instant;

use super::{num, visibility, ScenarioOutput, Table, Tabulate};
use crate::error::{Error, Result};
use crate::meas::{force_inverse, phase_basis, premeasure};
use crate::qcore::{Basis, Layout, QuantumState, Register, StateVector};

/// Default cap on `m + 2` (a 2^24 amplitude vector is 256 MiB).
pub const DEFAULT_MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutScalingConfig {
    pub m: usize,
    pub leak: f64,
    pub phis: Vec<f64>,
    pub max_qubits: usize,
}

impl CutScalingConfig {
    /// `φ ∈ {0, π/2, π, 3π/2}`.
    pub fn new(m: usize, leak: f64) -> Self {
        Self { m, leak, phis: vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], max_qubits: DEFAULT_MAX_QUBITS }
    }

    fn validate(&self) -> Result<()> {
        if self.m + 2 > self.max_qubits {
            return Err(Error::MemoryCap(format!(
                "m = {} needs {} qubits, cap is {}",
                self.m,
                self.m + 2,
                self.max_qubits
            )));
        }
        if !(0.0..=1.0).contains(&self.leak) {
            return Err(Error::Parameter(format!("leak {} outside [0, 1]", self.leak)));
        }
        if self.phis.is_empty() || self.phis.iter().any(|p| !p.is_finite()) {
            return Err(Error::Parameter("phase grid must be non-empty and finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutReport {
    pub m: usize,
    pub leak: f64,
    /// `(φ, P(g = +))`
    pub points: Vec<(f64, f64)>,
    pub visibility: f64,
    pub seconds: f64,
}

fn labels(m: usize) -> Vec<String> {
    ["g".to_string(), "D".to_string()].into_iter().chain((1..=m).map(|k| format!("F{k}"))).collect()
}

/// `Π⁺` matrix elements between the two undone branches:
/// `out[x][y] = ⟨u_y|Π⁺|u_x⟩` with `u_x = U⁻¹ U |x⟩|0…0⟩` computed explicitly.
fn branch_overlaps(m: usize) -> Result<[[C64; 2]; 2]> {
    let names = labels(m);
    let regs: Vec<Register> = names.iter().map(Register::qubit).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let coin = Basis::computational(2).relabeled(["H", "T"])?;
    let plus = phase_basis(0.0);
    let plus = plus.vector(0);

    let mut projected: Vec<Vec<C64>> = Vec::with_capacity(2);
    let mut layout = None;
    for x in 0..2 {
        let mut digits = vec![0; m + 2];
        digits[0] = x;
        let input = StateVector::basis_state(regs.clone(), &digits)?;
        let (pm, record) = premeasure(&input, "g", &coin, &refs[1..])?;
        let u = force_inverse(&pm, &record)?;
        drop(pm);
        let layout = layout.get_or_insert(Layout::new(u.registers(), &["g"])?);
        let amps = u.amplitudes();
        // ⟨+|_g u_x, one amplitude per configuration of the other registers
        projected.push(
            layout
                .rest_offsets
                .iter()
                .map(|&r| plus[0].conj() * amps[layout.target_offsets[0] + r] + plus[1].conj() * amps[layout.target_offsets[1] + r])
                .collect(),
        );
    }
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            out[x][y] = projected[y].iter().zip(&projected[x]).map(|(a, b)| a.conj() * b).sum();
        }
    }
    Ok(out)
}

fn fringe(m: usize, leak: f64, phis: &[f64], overlaps: &[[C64; 2]; 2]) -> Vec<(f64, f64)> {
    // Every friend qubit differs between the H and T branches, so each
    // contributes one factor (1 − p) to the branch coherence.
    let coherence = (1.0 - leak).powi(m as i32);
    phis.iter()
        .map(|&phi| {
            let psi = [C64::new(FRAC_1_SQRT_2, 0.0), C64::from_polar(FRAC_1_SQRT_2, phi)];
            let mut p = C64::new(0.0, 0.0);
            for x in 0..2 {
                for y in 0..2 {
                    let c = psi[x] * psi[y].conj() * if x == y { 1.0 } else { coherence };
                    p += c * overlaps[x][y];
                }
            }
            (phi, p.re)
        })
        .collect()
}

fn report(m: usize, leak: f64, points: Vec<(f64, f64)>, seconds: f64) -> CutReport {
    let values: Vec<f64> = points.iter().map(|(_, p)| *p).collect();
    CutReport { m, leak, visibility: visibility(&values), points, seconds }
}

pub fn run_cut_scaling(config: &CutScalingConfig) -> Result<CutReport> {
    config.validate()?;
    let start = Instant::now();
    let overlaps = branch_overlaps(config.m)?;
    let points = fringe(config.m, config.leak, &config.phis, &overlaps);
    Ok(report(config.m, config.leak, points, start.elapsed().as_secs_f64()))
}

/// One report per `(m, leak)`, m-major. The branch simulation runs once per
/// `m`; each report's `seconds` includes it.
pub fn run_cut_sweep(ms: impl IntoIterator<Item = usize>, leaks: &[f64], max_qubits: usize) -> Result<Vec<CutReport>> {
    let mut out = Vec::new();
    for m in ms {
        for &leak in leaks {
            CutScalingConfig { max_qubits, ..CutScalingConfig::new(m, leak) }.validate()?;
        }
        let start = Instant::now();
        let overlaps = branch_overlaps(m)?;
        let shared = start.elapsed().as_secs_f64();
        for &leak in leaks {
            let t = Instant::now();
            let points = fringe(m, leak, &CutScalingConfig::new(m, leak).phis, &overlaps);
            out.push(report(m, leak, points, shared + t.elapsed().as_secs_f64()));
        }
    }
    Ok(out)
}

/// Smallest `m ≤ m_max` whose visibility falls below `threshold`.
pub fn heisenberg_cut(leak: f64, threshold: f64, m_max: usize) -> Result<Option<usize>> {
    for m in 0..=m_max {
        let mut config = CutScalingConfig::new(m, leak);
        config.max_qubits = config.max_qubits.max(m + 2);
        if run_cut_scaling(&config)?.visibility < threshold {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

impl Tabulate for CutReport {
    fn tabulate(&self) -> ScenarioOutput {
        let mut table = Table::new(["phi", "p_plus"]);
        for (phi, p) in &self.points {
            table.push(vec![num(*phi), num(*p)]);
        }
        ScenarioOutput {
            scenario: "cut".into(),
            parameters: BTreeMap::from([("m".to_string(), json!(self.m)), ("leak".to_string(), num(self.leak))]),
            tables: BTreeMap::from([("fringe".to_string(), table)]),
            derived_quantities: BTreeMap::from([("visibility".to_string(), self.visibility)]),
        }
    }
}
