//! Oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fs;
use std::path::PathBuf;

use wigner_core::protoparse::{check, run_source, ExecutionReport};
use wigner_core::scenarios::*;
use wigner_core::{DensityOperator, FriendPolicy, Register};

/// `P(g = +)` for the cut protocol, simulated with explicit environment
/// qubits. Bits: `g` = 0, `D` = 1, `F_k` = 1 + k, `E_k` = 1 + m + k. Each
/// leak is a controlled-Ry on `E_k` (control `F_k`) with `cos(θ/2) = 1 − p`.
pub fn cut_oracle(m: usize, p: f64, phi: f64) -> f64 {
    type Sparse = HashMap<u64, C64>;
    let f = |k: usize| 1 + k;
    let e = |k: usize| 1 + m + k;
    let cnot = |s: &Sparse, c: usize, t: usize| -> Sparse {
        s.iter().map(|(&k, &a)| (if k >> c & 1 == 1 { k ^ 1 << t } else { k }, a)).collect()
    };
    let copy = |mut s: Sparse| {
        for t in std::iter::once(1).chain((1..=m).map(f)) {
            s = cnot(&s, 0, t);
        }
        s
    };

    let mut s: Sparse = HashMap::new();
    s.insert(0, C64::new(FRAC_1_SQRT_2, 0.0));
    s.insert(1, C64::from_polar(FRAC_1_SQRT_2, phi));
    s = copy(s);

    let cos = 1.0 - p;
    let sin = (1.0 - cos * cos).max(0.0).sqrt();
    for k in 1..=m {
        let mut next: Sparse = HashMap::new();
        for (&key, &a) in &s {
            if key >> f(k) & 1 == 0 {
                *next.entry(key).or_default() += a;
                continue;
            }
            let (zero, one) = (key & !(1 << e(k)), key | 1 << e(k));
            if key >> e(k) & 1 == 0 {
                *next.entry(zero).or_default() += a * cos;
                *next.entry(one).or_default() += a * sin;
            } else {
                *next.entry(zero).or_default() -= a * sin;
                *next.entry(one).or_default() += a * cos;
            }
        }
        s = next;
    }

    s = copy(s);
    // ⟨+|_g, grouped by the remaining bits
    let mut rest: HashMap<u64, C64> = HashMap::new();
    for (&key, &a) in &s {
        *rest.entry(key >> 1).or_default() += a * FRAC_1_SQRT_2;
    }
    rest.values().map(C64::norm_sqr).sum()
}

pub fn programs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs")
}

pub fn wig_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(programs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "wig"))
        .collect();
    files.sort();
    files
}

pub fn run_program(name: &str) -> Result<ExecutionReport, String> {
    let src = fs::read_to_string(programs_dir().join(name)).map_err(|e| format!("{name}: {e}"))?;
    let diags = check(&src);
    if !diags.is_empty() {
        return Err(format!("{name}: {}", diags.iter().map(|d| d.render(name)).collect::<Vec<_>>().join("; ")));
    }
    let report = run_source(&src, 42).map_err(|d| format!("{name}: {d:?}"))?;
    if let Some(a) = report.assertions.iter().find(|a| !a.passed) {
        return Err(format!("{name}: `{}` gave {}", a.statement, a.actual));
    }
    Ok(report)
}

/// `(program, assertion index, native value)` for every native counterpart.
pub fn native_counterparts() -> Vec<(&'static str, usize, f64)> {
    let mut out = Vec::new();
    for (file, policy) in [("fr.wig", FriendPolicy::PreMeasure), ("fr-full.wig", FriendPolicy::FullMeasure)] {
        let r = run_fr(policy).unwrap();
        out.push((file, 0, r.p_ok_okbar));
        out.push((file, 1, r.p_wg_minus));
    }
    let half = FRAC_PI_2;
    for (file, settings) in [
        ("ghz.wig", GhzSettings::direct([0.0, half, half])),
        ("ghz-wff.wig", GhzSettings::with_agents([0.0, half, half], [Agent::Wigner, Agent::Friend, Agent::Friend])),
        ("ghz-www.wig", GhzSettings::with_agents([0.0; 3], [Agent::Wigner; 3])),
    ] {
        out.push((file, 0, run_ghz_correlation(&settings).unwrap()));
    }
    for (file, policy) in [("chsh.wig", FriendPolicy::PreMeasure), ("chsh-full.wig", FriendPolicy::FullMeasure)] {
        let r = run_brukner_chsh(policy).unwrap();
        for k in 0..4 {
            out.push((file, k, r.correlators[k]));
        }
    }
    let phi = PI / 6.0;
    out.push(("eraser.wig", 0, eraser_detection_probability(phi, true, false).unwrap()));
    out.push(("eraser.wig", 1, eraser_detection_probability(phi, false, false).unwrap()));
    out.push(("eraser-marker.wig", 0, eraser_detection_probability(phi, true, true).unwrap()));
    for (file, leak, k) in [("cut.wig", 0.0, 1), ("cut-leak.wig", 0.1, 0)] {
        let config = CutScalingConfig { phis: vec![0.0], ..CutScalingConfig::new(3, leak) };
        out.push((file, k, run_cut_scaling(&config).unwrap().points[0].1));
    }
    let input = DensityOperator::maximally_mixed(vec![Register::qubit("pol")]).unwrap();
    let sealed = run_sealed_lab(&SealedLabSetting::new(PI / 5.0, 0.7, input)).unwrap();
    out.push(("sealed.wig", 0, sealed.p_exit_h));
    out.push(("sealed.wig", 1, sealed.p_exit_v));
    out.push(("sealed.wig", 2, sealed.p_no_measurement));
    let alpha = C64::new((1.0f64 / 3.0).sqrt(), 0.0);
    let beta = C64::from_polar((2.0f64 / 3.0).sqrt(), PI / 4.0);
    let concordant = run_concordant_wigner(alpha, beta, 0, 42).unwrap();
    out.push(("concordant.wig", 2, concordant.branches[0].1));
    out.push(("concordant.wig", 3, concordant.branches[1].1));
    out
}

/// Random streams of the language's tokens plus junk.
pub fn fuzz_inputs(n: usize, seed: u64) -> Vec<String> {
    const TOKENS: &[&str] = &[
        "register", "state", "basis", "premeasure", "decohere", "undo", "measure", "apply", "assert", "qubit", "qutrit",
        "dim", "in", "into", "as", "on", "tol", "strength", "prob", "corr", "fidelity", "lab", "dressed", "phase", "mub",
        "planar", "computational", "pi", "i", "sqrt", "exp", "cos", "sin", "H", "X", "cnot", "g", "s", "D", "F", "W",
        ";", ",", "=", "==", "<=", ">=", "(", ")", "[", "]", "+", "-", "*", "/", "|0>", "|1>", "|01>", "|>", "|", ">",
        "<", "#", "//", "\n", "0", "1", "2", "1e", "1e999", "0.5", "3i", "1/0", "@", "é", "\"", "\t", "|12",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(0..48);
            let mut s = String::new();
            for _ in 0..len {
                s.push_str(TOKENS[rng.gen_range(0..TOKENS.len())]);
                if rng.gen_bool(0.7) {
                    s.push(' ');
                }
            }
            s
        })
        .collect()
}
