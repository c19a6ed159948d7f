//! The cut-scaling fringe against an explicit environment-register simulation.

mod common;

use common::cut_oracle;
use std::f64::consts::PI;
use wigner_core::scenarios::{run_cut_sweep, DEFAULT_MAX_QUBITS};

#[test]
fn oracle_closed_form_sanity() {
    // no friend qubits: a plain |+⟩ fringe
    assert!((cut_oracle(0, 0.5, 0.0) - 1.0).abs() < 1e-14);
    assert!(cut_oracle(0, 0.5, PI).abs() < 1e-14);
    // a fully leaked record kills the fringe
    assert!((cut_oracle(3, 1.0, 0.0) - 0.5).abs() < 1e-14);
}

#[test]
fn sweep_matches_oracle_up_to_twelve() {
    let leaks = [0.0, 0.01, 0.1, 0.35, 1.0];
    for r in run_cut_sweep(0..=12, &leaks, DEFAULT_MAX_QUBITS).unwrap() {
        for &(phi, p) in &r.points {
            let want = cut_oracle(r.m, r.leak, phi);
            assert!((p - want).abs() < 1e-10, "m={} p={} φ={phi}: {p} vs {want}", r.m, r.leak);
        }
    }
}
