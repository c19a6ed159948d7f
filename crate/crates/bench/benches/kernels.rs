use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64 as C64;

use wigner_core::meas::{decohere, phase_basis, premeasure};
use wigner_core::protoparse::{parse, run_source};
use wigner_core::scenarios::{chsh_grid, run_brukner_chsh, run_fr};
use wigner_core::{Basis, DensityOperator, FriendPolicy, QuantumState, Register, StateVector, Unitary};

fn qubits(n: usize) -> Vec<Register> {
    (0..n).map(|k| Register::qubit(format!("q{k}"))).collect()
}

fn state_ops(c: &mut Criterion) {
    let n = 16;
    let amps: Vec<C64> = (0..1 << n).map(|k| C64::from_polar(1.0, k as f64 * 0.01)).collect();
    let psi = StateVector::normalized(qubits(n), amps).unwrap();
    c.bench_function("apply_hadamard_16q", |b| {
        b.iter(|| black_box(&psi).apply_unitary(&Unitary::hadamard(), &["q7"]).unwrap())
    });
    c.bench_function("premeasure_14q_into_2", |b| {
        let small = StateVector::zero(qubits(14)).unwrap().apply_unitary(&Unitary::hadamard(), &["q0"]).unwrap();
        b.iter(|| premeasure(&small, "q0", &phase_basis(0.0), &["q1", "q2"]).unwrap())
    });
    let rho = DensityOperator::from_pure(&StateVector::zero(qubits(6)).unwrap().apply_unitary(&Unitary::hadamard(), &["q0"]).unwrap());
    c.bench_function("decohere_6q", |b| b.iter(|| decohere(&rho, &["q0"], &Basis::computational(2)).unwrap()));
    c.bench_function("partial_trace_6q_to_2", |b| b.iter(|| rho.partial_trace(&["q0", "q3"]).unwrap()));
}

fn scenarios(c: &mut Criterion) {
    c.bench_function("fr_premeasure", |b| b.iter(|| run_fr(FriendPolicy::PreMeasure).unwrap()));
    c.bench_function("chsh_premeasure", |b| b.iter(|| run_brukner_chsh(FriendPolicy::PreMeasure).unwrap()));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("chsh_grid_10deg", |b| b.iter(|| chsh_grid(10.0).unwrap()));
    g.finish();
}

fn dsl(c: &mut Criterion) {
    let src = include_str!("../../../programs/fr.wig");
    c.bench_function("parse_fr_wig", |b| b.iter(|| parse(black_box(src)).unwrap()));
    c.bench_function("run_fr_wig", |b| b.iter(|| run_source(black_box(src), 42).unwrap()));
}

criterion_group!(benches, state_ops, scenarios, dsl);
criterion_main!(benches);
