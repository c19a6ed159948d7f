use proptest::prelude::*;

use super::ast::StmtKind;
use super::*;

const FR: &str = include_str!("../../../../programs/fr.wig");

fn errors(src: &str) -> Vec<Diagnostic> {
    check(src).into_iter().filter(Diagnostic::is_error).collect()
}

#[test]
fn smallest_program() {
    let p = parse("register g qubit; state psi = (1/sqrt(3))|0> + sqrt(2/3)|1> on g;").unwrap();
    assert_eq!(p.registers().count(), 1);
    assert_eq!(p.count(|k| matches!(k, StmtKind::State { .. })), 1);
    assert!(errors("register g qubit; state psi = (1/sqrt(3))|0> + sqrt(2/3)|1> on g;").is_empty());
}

#[test]
fn unknown_basis_has_span() {
    let src = "measure g in basis undeclared;";
    let diags = check(src);
    let d = diags.iter().find(|d| d.message.contains("unknown basis")).expect("unknown basis diagnostic");
    assert_eq!((d.span.line, d.span.col, d.span.len), (1, 20, 10));
    assert_eq!(&src[d.span.start..d.span.start + d.span.len], "undeclared");
    assert_eq!(d.render("x.wig"), "x.wig:1:20: error: unknown basis `undeclared`");
}

#[test]
fn default_measurement_name() {
    let src = "register a, b qubit; measure a, b in computational; assert prob(a_b=1) == 0 tol 1e-12;";
    assert!(run_source(src, 0).unwrap().passed());
}

#[test]
fn spans_track_lines() {
    let diags = check("register g qubit;\n\nmeasure g in nope as M;\n");
    let d = diags.iter().find(|d| d.message.contains("unknown basis")).unwrap();
    assert_eq!((d.span.line, d.span.col), (3, 14));
}

#[test]
fn undo_after_decohere_is_irreversible() {
    let src = "register s, D, E qubit;
        premeasure s in computational into D;
        decohere D, E;
        undo s;";
    let e = errors(src);
    assert_eq!(e.len(), 1, "{e:?}");
    assert_eq!(e[0].message, "irreversible decoherence precedes undo");
    assert_eq!(e[0].span.line, 4);
}

#[test]
fn undo_without_premeasure() {
    let e = errors("register s qubit; undo s;");
    assert!(e[0].message.contains("no pre-measurement"));
}

#[test]
fn undo_then_premeasure_again() {
    let src = "register s, D qubit;
        premeasure s in computational into D;
        undo s;
        premeasure s in phase(0) into D;";
    assert!(errors(src).is_empty());
}

#[test]
fn non_orthonormal_basis() {
    let e = errors("register g qubit; basis b = [|0> as a, sqrt(1/2)|0> + sqrt(1/2)|1> as b]; measure g in b as M;");
    assert_eq!(e.len(), 1);
    assert!(e[0].message.starts_with("basis is not orthonormal (Gram-matrix deviation"), "{}", e[0].message);
}

#[test]
fn missing_tolerance_is_a_syntax_error() {
    let e = parse("register g qubit; measure g in computational as M; assert prob(M=0) == 1;").unwrap_err();
    assert!(e[0].message.contains("explicit tolerance"));
}

#[test]
fn measured_registers_are_frozen() {
    let src = "register g qubit; measure g in computational as M; apply H on g;";
    let e = errors(src);
    assert!(e[0].message.contains("already measured by"), "{e:?}");
}

#[test]
fn reuse_of_ancilla_needs_fresh_register() {
    let src = "register g, h, D qubit;
        premeasure g in computational into D;
        premeasure h in computational into D;";
    assert!(errors(src)[0].message.contains("not in its initial state"));
}

#[test]
fn unused_basis_warns() {
    let d = check("register g qubit; basis b = [|0> as a, |1> as c];");
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].severity, Severity::Warning);
}

#[test]
fn fr_golden() {
    let p = parse(FR).unwrap();
    assert_eq!(p.registers().count(), 6);
    assert_eq!(p.count(|k| matches!(k, StmtKind::Premeasure { .. })), 2);
    assert_eq!(p.count(|k| matches!(k, StmtKind::Measure { .. })), 2);
    assert_eq!(p.count(|k| matches!(k, StmtKind::Assert { .. })), 3);
    assert!(check(FR).is_empty());
    let report = execute(&p, 7).unwrap();
    assert!(report.passed(), "{:#?}", report.assertions);
    assert!((report.assertions[0].actual - 1.0 / 12.0).abs() < 1e-12);
}

#[test]
fn wrong_expectation_fails_with_delta() {
    let src = FR.replace("== 1/12 tol 1e-9", "== 1/10 tol 1e-9");
    let report = run_source(&src, 7).unwrap();
    assert!(!report.passed());
    let a = &report.assertions[0];
    assert!(!a.passed);
    assert!((a.delta - (1.0 / 12.0 - 0.1)).abs() < 1e-12);
    assert!(report.assertions[1..].iter().all(|a| a.passed));
}

#[test]
fn comparisons() {
    let base = "register g qubit; apply H on g; measure g in computational as M;";
    for (cmp, ok) in [("<= 0.4", false), ("<= 0.5", true), (">= 0.5", true), (">= 0.6", false)] {
        let r = run_source(&format!("{base} assert prob(M=0) {cmp} tol 1e-12;"), 1).unwrap();
        assert_eq!(r.passed(), ok, "{cmp}");
    }
}

#[test]
fn fidelity_after_undo() {
    let src = "register s, D, F qubit;
        state psi = sqrt(1/3)|0> + sqrt(2/3)*exp(i*pi/5)|1> on s;
        premeasure s in phase(pi/3) into D, F;
        undo s;
        assert fidelity(psi) == 1 tol 1e-12;";
    let r = run_source(src, 0).unwrap();
    assert!(r.passed(), "{:?}", r.assertions);
}

#[test]
fn partial_decoherence() {
    // P(+) after a copy into E and strength-λ dephasing is 1 − λ/2.
    let src = "register s, E qubit;
        apply H on s;
        decohere s strength 0.3;
        measure s in phase(0) as M;
        assert prob(M=+) == 0.85 tol 1e-12;";
    let r = run_source(src, 0).unwrap();
    assert!(r.passed(), "{:?}", r.assertions);
}

#[test]
fn sampling_is_seeded() {
    let src = "register g qubit; apply H on g; measure g in computational as M;";
    let a = run_source(src, 11).unwrap();
    let b = run_source(src, 11).unwrap();
    assert_eq!(a, b);
    let drawn: std::collections::HashSet<String> =
        (0..40).map(|s| run_source(src, s).unwrap().measurements[0].sampled.clone()).collect();
    assert_eq!(drawn.len(), 2);
}

#[test]
fn printer_reparses_fr() {
    let p = parse(FR).unwrap();
    assert_eq!(parse(&p.to_string()).unwrap(), p);
}

// Random well-formed sources for the round trip.

fn arb_name() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9_]{0,4}".prop_filter("reserved", |s| !ast::is_reserved(s))
}

fn arb_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|n| n.to_string()),
        (0.0f64..10.0).prop_map(|x| format!("{x}")),
        Just("pi".to_string()),
        Just("i".to_string()),
        (1u32..9).prop_map(|n| format!("{n}i")),
        (1u32..9).prop_map(|n| format!("{n}e-3")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/"]), inner.clone())
                .prop_map(|(a, op, b)| format!("{a} {op} {b}")),
            inner.clone().prop_map(|a| format!("({a})")),
            inner.clone().prop_map(|a| format!("-{a}")),
            (prop::sample::select(vec!["sqrt", "exp", "cos", "sin"]), inner).prop_map(|(f, a)| format!("{f}({a})")),
        ]
    })
}

fn arb_label() -> impl Strategy<Value = String> {
    prop_oneof![Just("+".to_string()), Just("-".to_string()), (-3i32..4).prop_map(|n| n.to_string()), arb_name()]
}

fn arb_ket() -> impl Strategy<Value = String> {
    prop::collection::vec((prop::option::of(arb_expr()), "[0-2]{1,3}", any::<bool>()), 1..4).prop_map(|terms| {
        let mut s = String::new();
        for (k, (coeff, digits, neg)) in terms.into_iter().enumerate() {
            s.push_str(match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            });
            if let Some(c) = coeff {
                s.push_str(&format!("({c})"));
            }
            s.push_str(&format!("|{digits}>"));
        }
        s
    })
}

fn arb_basis() -> impl Strategy<Value = String> {
    let simple = prop_oneof![
        arb_name(),
        Just("computational".to_string()),
        arb_expr().prop_map(|e| format!("mub({e})")),
        arb_expr().prop_map(|e| format!("phase({e})")),
        arb_expr().prop_map(|e| format!("planar({e})")),
        prop::collection::vec((arb_ket(), arb_label()), 1..3).prop_map(|items| {
            let inner: Vec<String> = items.into_iter().map(|(k, l)| format!("{k} as {l}")).collect();
            format!("[{}]", inner.join(", "))
        }),
    ];
    simple.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), arb_expr()).prop_map(|(p, w, c)| format!("lab({p}, {w}, {c})")),
            (inner.clone(), inner).prop_map(|(p, w)| format!("dressed({p}, {w})")),
        ]
    })
}

fn arb_names() -> impl Strategy<Value = String> {
    prop::collection::vec(arb_name(), 1..4).prop_map(|v| v.join(", "))
}

fn arb_stmt() -> impl Strategy<Value = String> {
    prop_oneof![
        (arb_names(), prop_oneof![Just("qubit".to_string()), Just("qutrit".to_string()), (2u32..64).prop_map(|d| format!("dim {d}"))])
            .prop_map(|(n, k)| format!("register {n} {k};")),
        (arb_name(), arb_basis()).prop_map(|(n, b)| format!("basis {n} = {b};")),
        (arb_name(), arb_ket(), arb_names()).prop_map(|(n, k, on)| format!("state {n} = {k} on {on};")),
        (arb_name(), arb_basis(), arb_names()).prop_map(|(s, b, into)| format!("premeasure {s} in {b} into {into};")),
        (arb_names(), prop::option::of(arb_basis()), prop::option::of(arb_expr())).prop_map(|(r, b, s)| {
            let b = b.map(|b| format!(" in {b}")).unwrap_or_default();
            let s = s.map(|s| format!(" strength {s}")).unwrap_or_default();
            format!("decohere {r}{b}{s};")
        }),
        arb_name().prop_map(|s| format!("undo {s};")),
        (arb_names(), arb_basis(), prop::option::of(arb_name())).prop_map(|(r, b, n)| {
            let n = n.map(|n| format!(" as {n}")).unwrap_or_default();
            format!("measure {r} in {b}{n};")
        }),
        (
            prop_oneof![
                prop::sample::select(vec!["H", "X", "Y", "Z", "S", "cnot"]).prop_map(String::from),
                arb_expr().prop_map(|e| format!("phase({e})")),
                (arb_expr(), arb_expr()).prop_map(|(a, b)| format!("[[{a}, {b}], [{b}, {a}]]")),
            ],
            arb_names()
        )
            .prop_map(|(g, on)| format!("apply {g} on {on};")),
        (
            prop_oneof![
                prop::collection::vec((arb_name(), arb_label()), 1..3).prop_map(|v| {
                    let items: Vec<String> = v.into_iter().map(|(n, l)| format!("{n}={l}")).collect();
                    format!("prob({})", items.join(", "))
                }),
                arb_names().prop_map(|n| format!("corr({n})")),
                arb_name().prop_map(|n| format!("fidelity({n})")),
            ],
            prop::sample::select(vec!["==", "<=", ">="]),
            arb_expr(),
            arb_expr()
        )
            .prop_map(|(q, c, e, t)| format!("assert {q} {c} {e} tol {t};")),
    ]
}

fn arb_source() -> impl Strategy<Value = String> {
    prop::collection::vec(arb_stmt(), 0..8).prop_map(|v| v.join("\n"))
}

fn arb_token_stream() -> impl Strategy<Value = String> {
    let tok = prop_oneof![
        prop::sample::select(vec![
            "register", "state", "basis", "premeasure", "decohere", "undo", "measure", "apply", "assert", "qubit",
            "qutrit", "dim", "in", "into", "as", "on", "tol", "strength", "prob", "corr", "fidelity", "lab",
            "dressed", "phase", "mub", "planar", "computational", "pi", "i", "sqrt", "exp", "H", "cnot", ";", ",",
            "=", "==", "<=", ">=", "(", ")", "[", "]", "+", "-", "*", "/", "|0>", "|01>", "|", ">", "<", "#", "//",
            "\n", "1e", "1e999", "2.5", "3i", "@", "é", "\"",
        ])
        .prop_map(String::from),
        arb_name(),
        (0u32..100).prop_map(|n| n.to_string()),
    ];
    prop::collection::vec(tok, 0..40).prop_map(|v| v.join(" "))
}

proptest! {
    #[test]
    fn print_round_trip(src in arb_source()) {
        let first = parse(&src).map_err(|d| TestCaseError::fail(format!("{src}\n{d:?}")))?;
        let printed = first.to_string();
        let second = parse(&printed).map_err(|d| TestCaseError::fail(format!("{printed}\n{d:?}")))?;
        prop_assert_eq!(&second, &first);
        prop_assert_eq!(second.to_string(), printed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn fuzzed_tokens_never_panic(src in arb_token_stream()) {
        let diags = check(&src);
        for d in &diags {
            prop_assert!(d.span.start + d.span.len <= src.len());
            prop_assert!(src.is_char_boundary(d.span.start));
        }
        if diags.iter().all(|d| !d.is_error()) {
            let _ = run_source(&src, 0);
        }
    }

    #[test]
    fn fuzzed_bytes_never_panic(src in "\\PC{0,80}") {
        let _ = check(&src);
    }
}
