//! A Wigner who measures the friend's lab in the friend's own basis.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;

use super::{num, ScenarioOutput, Table, Tabulate};
use crate::error::Result;
use crate::meas::{full_measure, lab_basis};
use crate::qcore::{born_probabilities, Basis, Register, StateVector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcordantReport {
    /// `[α, β]` for `α|H⟩ + β|T⟩`, each as `[re, im]`.
    pub amplitudes: [[f64; 2]; 2],
    /// `(friend record, P(record), P(Wigner agrees | record))`
    pub branches: Vec<(String, f64, f64)>,
    pub agreement: f64,
    pub samples: usize,
    pub sampled_agreements: usize,
    pub seed: u64,
}

/// The friend fully measures `α|H⟩ + β|T⟩`; Wigner then measures `g, D, F` in
/// `{|H⟩_L, |T⟩_L}`. Besides the exact agreement probability, `samples`
/// seeded runs are drawn.
pub fn run_concordant_wigner(alpha: C64, beta: C64, samples: usize, seed: u64) -> Result<ConcordantReport> {
    let regs = ["g", "D", "F"].map(Register::qubit).to_vec();
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0] = alpha;
    amps[4] = beta;
    let psi = StateVector::new(regs, amps)?;
    let coin = Basis::computational(2).relabeled(["H", "T"])?;
    let wigner = lab_basis(&coin, &coin, 2)?;
    let lab = ["g", "D", "F"];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let measured = full_measure(&psi, "g", &coin, &["D", "F"], &mut rng)?;
    let mut branches = Vec::new();
    let mut agreement = 0.0;
    for o in &measured.ensemble {
        if o.probability <= 0.0 {
            branches.push((o.label.clone(), 0.0, 1.0));
            continue;
        }
        let agree = born_probabilities(&o.post_state, &wigner, &lab)?.probability(&o.label).unwrap_or(0.0);
        agreement += o.probability * agree;
        branches.push((o.label.clone(), o.probability, agree));
    }

    let mut sampled_agreements = 0;
    for _ in 0..samples {
        let friend = full_measure(&psi, "g", &coin, &["D", "F"], &mut rng)?.sampled;
        let d = born_probabilities(&friend.post_state, &wigner, &lab)?;
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let pick = d.iter().find(|(_, p)| {
            acc += p;
            u < acc
        });
        if pick.map(|(l, _)| l) == Some(friend.label.as_str()) {
            sampled_agreements += 1;
        }
    }

    Ok(ConcordantReport {
        amplitudes: [[alpha.re, alpha.im], [beta.re, beta.im]],
        branches,
        agreement,
        samples,
        sampled_agreements,
        seed,
    })
}

impl Tabulate for ConcordantReport {
    fn tabulate(&self) -> ScenarioOutput {
        let mut table = Table::new(["friend_record", "probability", "p_wigner_agrees"]);
        for (label, p, a) in &self.branches {
            table.push(vec![json!(label), num(*p), num(*a)]);
        }
        let mut derived = BTreeMap::from([("agreement".to_string(), self.agreement)]);
        if self.samples > 0 {
            derived.insert("sampled_agreement".into(), self.sampled_agreements as f64 / self.samples as f64);
        }
        ScenarioOutput {
            scenario: "concordant".into(),
            parameters: BTreeMap::from([
                ("amplitudes".to_string(), json!(self.amplitudes.map(|a| a.map(num)))),
                ("samples".to_string(), json!(self.samples)),
                ("seed".to_string(), json!(self.seed)),
            ]),
            tables: BTreeMap::from([("branches".to_string(), table)]),
            derived_quantities: derived,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::arb_amplitudes;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn equal_superposition_always_agrees() {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let r = run_concordant_wigner(h, h, 200, 42).unwrap();
        assert!((r.agreement - 1.0).abs() < 1e-12);
        assert_eq!(r.sampled_agreements, 200);
        assert!((r.branches[0].1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn heads_only() {
        let r = run_concordant_wigner(C64::new(1.0, 0.0), C64::new(0.0, 0.0), 50, 7).unwrap();
        assert!((r.branches[0].1 - 1.0).abs() < 1e-12);
        assert_eq!(r.branches[1].1, 0.0);
        assert_eq!(r.sampled_agreements, 50);
    }

    #[test]
    fn rejects_unnormalized_amplitudes() {
        assert!(run_concordant_wigner(C64::new(1.0, 0.0), C64::new(1.0, 0.0), 0, 42).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn agreement_is_certain(amps in arb_amplitudes(2)) {
            let r = run_concordant_wigner(amps[0], amps[1], 0, 42).unwrap();
            prop_assert!((r.agreement - 1.0).abs() < 1e-12);
        }
    }
}
