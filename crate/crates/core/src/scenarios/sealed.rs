//! The sealed three-exit lab of an automaton friend.
//!
//! `pol` is the photon polarization (`h = 0`, `v = 1`); `path` is the exit
//! fiber (`0` = no-measurement channel, `1` = exit h, `2` = exit v). A friend
//! who pre-measures rotates the polarization with the device and routes it
//! through the h/v splitter; otherwise the photon keeps the original path.

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;

use super::{num, ScenarioOutput, Table, Tabulate};
use crate::error::{Error, Result};
use crate::meas::project_register;
use crate::qcore::{DensityOperator, QuantumState, Register, StateVector, Unitary};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SealedLabSetting {
    pub alpha: f64,
    pub phi: f64,
    /// Single-qubit polarization state fed into the lab.
    pub input: DensityOperator,
    /// Whether the friend routes the photon through her polarizer.
    pub friend_measures: bool,
}

impl SealedLabSetting {
    pub fn new(alpha: f64, phi: f64, input: DensityOperator) -> Self {
        Self { alpha, phi, input, friend_measures: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SealedLabReport {
    pub setting: SealedLabSetting,
    pub p_exit_h: f64,
    pub p_exit_v: f64,
    pub p_no_measurement: f64,
    /// Fidelity of the exit-h polarization with `|h⟩`, when that exit fires.
    pub exit_h_fidelity: Option<f64>,
    pub exit_v_fidelity: Option<f64>,
}

/// `|h⟩ → cos α|h⟩ + e^{iφ} sin α|v⟩`, `|v⟩ → −e^{−iφ} sin α|h⟩ + cos α|v⟩`.
pub(crate) fn device(alpha: f64, phi: f64) -> Unitary {
    let (s, c) = alpha.sin_cos();
    let e = C64::from_polar(1.0, phi);
    let rows = vec![vec![C64::new(c, 0.0), -e.conj() * s], vec![e * s, C64::new(c, 0.0)]];
    Unitary::from_rows(rows).expect("device is unitary")
}

/// Swaps `|h,0⟩ ↔ |h,1⟩` and `|v,0⟩ ↔ |v,2⟩` on `pol ⊗ path`.
fn router() -> Unitary {
    let perm = [1, 0, 2, 5, 4, 3];
    let data = (0..36)
        .map(|k| C64::new(if perm[k % 6] == k / 6 { 1.0 } else { 0.0 }, 0.0))
        .collect();
    Unitary::new(6, data).expect("permutation is unitary")
}

fn polarization(setting: &SealedLabSetting) -> Result<DensityOperator> {
    let rho = &setting.input;
    if rho.registers().len() != 1 || rho.dim() != 2 {
        return Err(Error::InvalidDensity("sealed-lab input must be one polarization qubit".into()));
    }
    if !setting.alpha.is_finite() || !setting.phi.is_finite() {
        return Err(Error::Parameter("device angles must be finite".into()));
    }
    DensityOperator::new(vec![Register::qubit("pol")], rho.matrix().to_vec())
}

pub fn run_sealed_lab(setting: &SealedLabSetting) -> Result<SealedLabReport> {
    let pol = polarization(setting)?;
    let path = DensityOperator::from_pure(&StateVector::zero(vec![Register::new("path", 3)?])?);
    let mut rho = pol.tensor(&path)?;
    if setting.friend_measures {
        rho = rho.apply_unitary(&device(setting.alpha, setting.phi), &["pol"])?;
        rho = rho.apply_unitary(&router(), &["pol", "path"])?;
    }
    let mut weights = [0.0; 3];
    let mut fid = [None, None];
    let pure = |d: usize| StateVector::basis_state(vec![Register::qubit("pol")], &[d]);
    for exit in 0..3 {
        let (w, branch) = project_register(&rho, "path", exit)?;
        weights[exit] = w;
        if exit > 0 {
            if let Some(b) = branch {
                fid[exit - 1] = Some(b.partial_trace(&["pol"])?.fidelity_with_pure(&pure(exit - 1)?)?);
            }
        }
    }
    Ok(SealedLabReport {
        setting: setting.clone(),
        p_no_measurement: weights[0],
        p_exit_h: weights[1],
        p_exit_v: weights[2],
        exit_h_fidelity: fid[0],
        exit_v_fidelity: fid[1],
    })
}

impl Tabulate for SealedLabReport {
    fn tabulate(&self) -> ScenarioOutput {
        let mut table = Table::new(["exit", "probability"]);
        for (name, p) in [("h", self.p_exit_h), ("v", self.p_exit_v), ("no-measurement", self.p_no_measurement)] {
            table.push(vec![json!(name), num(p)]);
        }
        let mut derived = BTreeMap::new();
        if let Some(f) = self.exit_h_fidelity {
            derived.insert("exit_h_fidelity_h".to_string(), f);
        }
        if let Some(f) = self.exit_v_fidelity {
            derived.insert("exit_v_fidelity_v".to_string(), f);
        }
        let s = &self.setting;
        ScenarioOutput {
            scenario: "sealed-lab".into(),
            parameters: BTreeMap::from([
                ("alpha".to_string(), num(s.alpha)),
                ("phi".to_string(), num(s.phi)),
                ("friend_measures".to_string(), json!(s.friend_measures)),
                ("input_purity".to_string(), num(s.input.purity())),
            ]),
            tables: BTreeMap::from([("exits".to_string(), table)]),
            derived_quantities: derived,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::arb_amplitudes;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn mixed() -> DensityOperator {
        DensityOperator::maximally_mixed(vec![Register::qubit("pol")]).unwrap()
    }

    fn pure(amps: Vec<C64>) -> DensityOperator {
        DensityOperator::from_pure(&StateVector::single(Register::qubit("pol"), amps).unwrap())
    }

    #[test]
    fn identity_setting_sends_h_to_exit_h() {
        let h = pure(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let r = run_sealed_lab(&SealedLabSetting::new(0.0, 1.3, h)).unwrap();
        assert!((r.p_exit_h - 1.0).abs() < 1e-12);
        assert_eq!(r.exit_v_fidelity, None);
    }

    #[test]
    fn no_measurement_channel() {
        let s = SealedLabSetting { friend_measures: false, ..SealedLabSetting::new(0.4, 0.2, mixed()) };
        let r = run_sealed_lab(&s).unwrap();
        assert!((r.p_no_measurement - 1.0).abs() < 1e-12);
        assert_eq!(r.exit_h_fidelity, None);
    }

    #[test]
    fn rejects_wrong_input() {
        let two = DensityOperator::maximally_mixed(vec![Register::qubit("a"), Register::qubit("b")]).unwrap();
        assert!(run_sealed_lab(&SealedLabSetting::new(0.0, 0.0, two)).is_err());
    }

    proptest! {
        #[test]
        fn mixed_input_hides_the_setting(alpha in -PI..PI, phi in -PI..PI) {
            let r = run_sealed_lab(&SealedLabSetting::new(alpha, phi, mixed())).unwrap();
            prop_assert!((r.p_exit_h - 0.5).abs() < 1e-12);
            prop_assert!((r.p_exit_v - 0.5).abs() < 1e-12);
            prop_assert!(r.p_no_measurement.abs() < 1e-12);
        }

        #[test]
        fn exit_polarizations_are_fixed(alpha in -PI..PI, phi in -PI..PI, amps in arb_amplitudes(2)) {
            let (s, c) = alpha.sin_cos();
            // oracle: ⟨h|M|ψ⟩ from the first row of the device matrix
            let a = C64::new(c, 0.0) * amps[0] - C64::from_polar(s, -phi) * amps[1];
            let r = run_sealed_lab(&SealedLabSetting::new(alpha, phi, pure(amps))).unwrap();
            prop_assert!((r.p_exit_h - a.norm_sqr()).abs() < 1e-12);
            prop_assert!((r.p_exit_h + r.p_exit_v - 1.0).abs() < 1e-12);
            if let Some(f) = r.exit_h_fidelity {
                prop_assert!((f - 1.0).abs() < 1e-9);
            }
            if let Some(f) = r.exit_v_fidelity {
                prop_assert!((f - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn device_is_unitary(alpha in -PI..PI, phi in -PI..PI) {
            prop_assert!(device(alpha, phi).unitarity_deviation() < 1e-12);
        }
    }
}
