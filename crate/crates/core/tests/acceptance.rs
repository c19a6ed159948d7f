//! AC1–AC10 at their stated tolerances. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

mod common;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use wigner_core::meas::{decohere, full_measure, lab_basis, mub_basis, phase_basis, premeasure, undo_premeasure};
use wigner_core::protoparse::{check, run_source};
use wigner_core::scenarios::*;
use wigner_core::{born_probabilities, Basis, DensityOperator, FriendPolicy, QuantumState, Register, StateVector};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn near(what: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{what} = {got:.17}, want {want:.17} ± {tol:e}"))
}

fn within(what: &str, took: Duration, limit: Duration) -> Result<(), String> {
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn ac1() -> Check {
    let t = Instant::now();
    let r = run_fr(FriendPolicy::PreMeasure).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    near("P(ok̄ ∧ ok)", r.p_ok_okbar, 1.0 / 12.0, 1e-9)?;
    near("P(ok̄)", r.p_wg_minus, 1.0 / 6.0, 1e-9)?;
    near("P(ok | ok̄)", r.p_ok_given_okbar, 0.5, 1e-9)?;
    within("run_fr", took, Duration::from_secs(1))?;
    Ok(format!("1/12, 1/6, 1/2 in {took:?}"))
}

fn ac2() -> Check {
    let t = Instant::now();
    let c = |x: f64| C64::new(x, 0.0);
    let third = (1.0f64 / 3.0).sqrt();
    let gs = StateVector::new(
        vec![Register::qubit("g"), Register::qubit("s")],
        vec![c(third), c(0.0), c(third), c(third)],
    )
    .unwrap();
    let init = gs.tensor(&StateVector::zero(["Dg", "Fg", "Ds", "Fs"].map(Register::qubit).to_vec()).unwrap()).unwrap();
    let coin = Basis::computational(2).relabeled(["H", "T"]).unwrap();
    let spin = Basis::computational(2).relabeled(["-1", "+1"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let fg = full_measure(&init, "g", &coin, &["Dg", "Fg"], &mut rng).unwrap();
    let fs = full_measure(&fg.state, "s", &spin, &["Ds", "Fs"], &mut rng).unwrap();
    let mut worst: f64 = 0.0;
    for phi in [0.0, FRAC_PI_4, FRAC_PI_2] {
        for (pre, lab) in [(&coin, ["g", "Dg", "Fg"]), (&spin, ["s", "Ds", "Fs"])] {
            let basis = lab_basis(pre, &phase_basis(phi), 2).unwrap();
            let d = born_probabilities(&fs.state, &basis, &lab).unwrap();
            for (label, p) in d.iter() {
                near(&format!("P({label}) at φ={phi:.4} on {}", lab[0]), p, 0.5, 1e-12)?;
                worst = worst.max((p - 0.5).abs());
            }
        }
    }
    let took = t.elapsed();
    within("full-measure FR", took, Duration::from_secs(1))?;
    Ok(format!("(1/2, 1/2) for both labs at 3 phases, max dev {worst:.1e}, {took:?}"))
}

fn ghz_grid() -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    (0..39).map(|_| [0; 3].map(|_| rng.gen_range(0.0..TAU))).collect()
}

fn ac3() -> Check {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for phi in ghz_grid() {
        let e = run_ghz_correlation(&GhzSettings::direct(phi)).map_err(|e| e.to_string())?;
        let want = phi.iter().sum::<f64>().cos();
        near(&format!("E{phi:?}"), e, want, 1e-12)?;
        worst = worst.max((e - want).abs());
    }
    // settings n = 2 ↔ φ = 0 and n = 3 ↔ φ = π/2
    let h = FRAC_PI_2;
    let quadruple = [([0.0, 0.0, 0.0], 1.0), ([0.0, h, h], -1.0), ([h, 0.0, h], -1.0), ([h, h, 0.0], -1.0)];
    let mut got = Vec::new();
    for (phi, want) in quadruple {
        let d = ghz_distribution(&GhzSettings::direct(phi)).map_err(|e| e.to_string())?;
        let e = d.expectation();
        // exact: every outcome of the wrong parity has zero weight
        let wrong: f64 = d
            .entries
            .iter()
            .filter(|w| w.value != want)
            .map(|w| w.probability)
            .sum();
        near(&format!("E{phi:?}"), e, want, 1e-12)?;
        ensure(wrong < 1e-15, || format!("E{phi:?}: wrong-parity weight {wrong:e}"))?;
        got.push(e.round() as i32);
    }
    let took = t.elapsed();
    within("GHZ grid", took, Duration::from_secs(1))?;
    Ok(format!("39 points max dev {worst:.1e}; quadruple {got:?}; {took:?}"))
}

fn ac4() -> Check {
    let mut worst: f64 = 0.0;
    let (w, f) = (Agent::Wigner, Agent::Friend);
    for phi in ghz_grid() {
        let all = ghz_distribution(&GhzSettings::with_agents(phi, [w; 3])).map_err(|e| e.to_string())?;
        for agents in [[w, f, f], [f, w, f], [f, f, w]] {
            let d = ghz_distribution(&GhzSettings::with_agents(phi, agents)).map_err(|e| e.to_string())?;
            for (a, b) in d.entries.iter().zip(&all.entries) {
                ensure(a.label == b.label, || format!("label order {} vs {}", a.label, b.label))?;
                near(&format!("{agents:?} {phi:?} P({})", a.label), a.probability, b.probability, 1e-12)?;
                worst = worst.max((a.probability - b.probability).abs());
            }
        }
    }
    Ok(format!("WFF, FWF, FFW equal WWW on 39 settings, max dev {worst:.1e}"))
}

fn brute_force(constraints: &[Constraint]) -> Vec<CounterfactualAssignment> {
    let mut out = Vec::new();
    for w1 in [1, -1] {
        for w2 in [1, -1] {
            for w3 in [1, -1] {
                for f1 in [1, -1] {
                    for f2 in [1, -1] {
                        for f3 in [1, -1] {
                            let a = CounterfactualAssignment { w: [w1, w2, w3], f: [f1, f2, f3] };
                            let ok = constraints.iter().all(|c| {
                                c.vars().iter().map(|v| match v {
                                    Var::W(m) => a.w[*m as usize - 1],
                                    Var::F(m) => a.f[*m as usize - 1],
                                })
                                .product::<i8>()
                                    == c.product()
                            });
                            if ok {
                                out.push(a);
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn ac5() -> Check {
    let all = ghz_constraints();
    let mut best = Duration::MAX;
    for _ in 0..20 {
        let t = Instant::now();
        let found = counterfactual_search(&all);
        best = best.min(t.elapsed());
        ensure(found.is_empty(), || format!("{} assignments satisfy all four constraints", found.len()))?;
    }
    let mut sizes = Vec::new();
    for k in 0..all.len() {
        let mut three = all.clone();
        three.remove(k);
        let mut found = counterfactual_search(&three);
        found.sort();
        ensure(!found.is_empty(), || format!("dropping {} leaves no solution", all[k]))?;
        ensure(found == brute_force(&three), || format!("dropping {}: search disagrees with brute force", all[k]))?;
        sizes.push(found.len());
    }
    ensure(brute_force(&all).is_empty(), || "brute force finds a solution".into())?;
    within("search", best, Duration::from_millis(1))?;
    Ok(format!("empty with all four; {sizes:?} after dropping one; {best:?}"))
}

fn ac6() -> Check {
    let pre = run_brukner_chsh(FriendPolicy::PreMeasure).map_err(|e| e.to_string())?;
    let full = run_brukner_chsh(FriendPolicy::FullMeasure).map_err(|e| e.to_string())?;
    near("S (premeasure)", pre.s, 2.0 * SQRT_2, 1e-9)?;
    near("S (full)", full.s, SQRT_2, 1e-9)?;
    let t = Instant::now();
    let grid = chsh_grid(10.0).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    ensure(grid.max_s <= 2.0 + 1e-9, || format!("grid max S = {:.17}", grid.max_s))?;
    within("10° grid", took, Duration::from_secs(10))?;
    Ok(format!("S = {:.12}, {:.12}; grid max {:.12} in {took:?}", pre.s, full.s, grid.max_s))
}

fn ac7() -> Check {
    let run = |filter_on| {
        run_eraser_with(EraserConfig { phi: 0.0, filter_on, which_path: false, sweep_points: 25 }).map_err(|e| e.to_string())
    };
    let (off, on) = (run(false)?, run(true)?);
    ensure(off.sweep.len() == 25 && on.sweep.len() == 25, || "sweep is not 25 points".into())?;
    near("visibility (filter off)", off.visibility, 0.0, 1e-12)?;
    for (phi, p) in &off.sweep {
        near(&format!("p(φ={phi:.3}) filter off"), *p, 0.5, 1e-12)?;
    }
    near("visibility (filter on)", on.visibility, 1.0, 1e-12)?;
    near("filtered p(φ=0)", on.p_detector1, 0.25, 1e-12)?;
    Ok(format!("visibility {:.1e} / {:.15}; p(0) = {}", off.visibility, on.visibility, on.p_detector1))
}

fn ac8() -> Check {
    let leaks = [0.0, 0.01, 0.1, 0.35, 1.0];
    let sweep = run_cut_sweep(0..=20, &leaks, DEFAULT_MAX_QUBITS).map_err(|e| e.to_string())?;
    let at = |m: usize, k: usize| &sweep[m * leaks.len() + k];
    for m in 0..=20 {
        near(&format!("visibility m={m} p=0"), at(m, 0).visibility, 1.0, 1e-12)?;
    }
    let mut compared = 0;
    for m in 0..=12 {
        for k in 1..leaks.len() {
            for &(phi, p) in &at(m, k).points {
                near(&format!("P+ m={m} p={} φ={phi}", leaks[k]), p, common::cut_oracle(m, leaks[k], phi), 1e-10)?;
                compared += 1;
            }
        }
    }
    for k in 0..leaks.len() {
        for m in 0..20 {
            let (a, b) = (at(m, k).visibility, at(m + 1, k).visibility);
            ensure(b <= a + 1e-12, || format!("p={}: visibility rises from m={m} ({a}) to m={} ({b})", leaks[k], m + 1))?;
        }
    }
    for m in 0..=20 {
        for k in 0..leaks.len() - 1 {
            let (a, b) = (at(m, k).visibility, at(m, k + 1).visibility);
            ensure(b <= a + 1e-12, || format!("m={m}: visibility rises from p={} to p={}", leaks[k], leaks[k + 1]))?;
        }
    }
    let m20 = run_cut_scaling(&CutScalingConfig::new(20, 0.1)).map_err(|e| e.to_string())?;
    within("m = 20", Duration::from_secs_f64(m20.seconds), Duration::from_secs(60))?;
    Ok(format!("{compared} oracle points; monotone over 21 m × {} p; m=20 in {:.2} s", leaks.len(), m20.seconds))
}

fn random_basis(rng: &mut ChaCha8Rng, d: usize) -> Basis {
    let mut vs: Vec<Vec<C64>> = Vec::new();
    while vs.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for u in &vs {
            let ip: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= ip * y);
        }
        let n = v.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
        if n > 1e-3 {
            vs.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    let labels = (0..d).map(|k| k.to_string()).collect();
    Basis::new(vs, labels).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, regs: Vec<Register>) -> StateVector {
    let dim: usize = regs.iter().map(Register::dim).product();
    let amps = (0..dim).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    StateVector::normalized(regs, amps).unwrap()
}

fn ac9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let d = rng.gen_range(2..=3);
        let copies = rng.gen_range(1..=3);
        let mut regs = vec![Register::new("s", d).unwrap(), Register::qubit("r")];
        let names: Vec<String> = (0..copies).map(|k| format!("a{k}")).collect();
        let psi = random_state(&mut rng, regs.clone());
        regs = names.iter().map(|n| Register::new(n.as_str(), d).unwrap()).collect();
        let psi = psi.tensor(&StateVector::zero(regs).unwrap()).unwrap();
        let basis = random_basis(&mut rng, d);
        let anc: Vec<&str> = names.iter().map(String::as_str).collect();
        let (pm, rec) = premeasure(&psi, "s", &basis, &anc).map_err(|e| e.to_string())?;
        let back = undo_premeasure(&pm, &rec).map_err(|e| e.to_string())?;
        let f = back.fidelity(&psi).map_err(|e| e.to_string())?;
        near(&format!("case {case}: fidelity"), f, 1.0, 1e-12)?;
        worst = worst.max((f - 1.0).abs());
    }
    let mut dev: f64 = 0.0;
    for case in 0..100 {
        let regs = vec![Register::qubit("p"), Register::qubit("q"), Register::qubit("r")];
        let a = DensityOperator::from_pure(&random_state(&mut rng, regs.clone()));
        let b = DensityOperator::from_pure(&random_state(&mut rng, regs));
        let w = rng.gen_range(0.0..1.0);
        let rho = DensityOperator::mixture(&[(w, &a), (1.0 - w, &b)]).unwrap();
        let basis = random_basis(&mut rng, 2);
        let once = decohere(&rho, &["q"], &basis).map_err(|e| e.to_string())?;
        let twice = decohere(&once, &["q"], &basis).map_err(|e| e.to_string())?;
        let diff = once.matrix().iter().zip(twice.matrix()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        ensure(diff <= 1e-12, || format!("case {case}: decohere not idempotent ({diff:e})"))?;
        let full = basis.tensor(&Basis::computational(4));
        let before = rho.basis_weights(&full, &["q", "p", "r"]).unwrap();
        let after = once.basis_weights(&full, &["q", "p", "r"]).unwrap();
        for (x, y) in before.iter().zip(&after) {
            ensure((x - y).abs() <= 1e-12, || format!("case {case}: diagonal changed {x} → {y}"))?;
            dev = dev.max((x - y).abs());
        }
        dev = dev.max(diff);
    }
    let mut pairs = 0;
    for a in 1..=3u8 {
        for b in 1..=3u8 {
            if a == b {
                continue;
            }
            let (ba, bb) = (mub_basis(a).unwrap(), mub_basis(b).unwrap());
            for l in 0..2 {
                for k in 0..2 {
                    let o = bb.overlap(k, ba.vector(l)).norm_sqr();
                    near(&format!("|⟨l{a}_{l}|k{b}_{k}⟩|²"), o, 0.5, 1e-12)?;
                }
            }
            pairs += 1;
        }
    }
    Ok(format!("undo fidelity dev {worst:.1e} (100 cases); decohere dev {dev:.1e}; {pairs} MUB pairs"))
}

fn ac10() -> Check {
    let files = common::wig_files();
    for path in &files {
        common::run_program(path.file_name().unwrap().to_str().unwrap())?;
    }
    let mut worst: f64 = 0.0;
    let counterparts = common::native_counterparts();
    for (file, k, native) in &counterparts {
        let dsl = common::run_program(file)?.assertions[*k].actual;
        near(&format!("{file}[{k}] vs native"), dsl, *native, 1e-9)?;
        worst = worst.max((dsl - native).abs());
    }
    let inputs = common::fuzz_inputs(10_000, 42);
    let mut crashes = 0;
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    for src in &inputs {
        let ok = catch_unwind(AssertUnwindSafe(|| {
            if check(src).iter().all(|d| !d.is_error()) {
                let _ = run_source(src, 0);
            }
        }));
        crashes += ok.is_err() as usize;
    }
    std::panic::set_hook(hook);
    ensure(crashes == 0, || format!("{crashes} of {} fuzz inputs crashed", inputs.len()))?;
    Ok(format!(
        "{} programs pass; {} native comparisons, max dev {worst:.1e}; {} fuzz inputs, 0 crashes",
        files.len(),
        counterparts.len(),
        inputs.len()
    ))
}

fn main() {
    type Criterion = (&'static str, &'static str, fn() -> Check);
    let criteria: [Criterion; 10] = [
        ("AC1", "FR pre-measure", ac1),
        ("AC2", "FR full-measure", ac2),
        ("AC3", "GHZ correlations", ac3),
        ("AC4", "dressed-basis identity", ac4),
        ("AC5", "counterfactual reductio", ac5),
        ("AC6", "Brukner CHSH", ac6),
        ("AC7", "quantum eraser", ac7),
        ("AC8", "cut scaling", ac8),
        ("AC9", "measurement-theory properties", ac9),
        ("AC10", "DSL", ac10),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("{id} PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
