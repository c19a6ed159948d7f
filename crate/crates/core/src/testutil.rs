//! Generators shared by unit tests.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use crate::qcore::{Basis, Register};

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A normalized vector from raw (re, im) pairs; falls back to `|0⟩` for a null draw.
pub fn normalized(raw: &[(f64, f64)]) -> Vec<C64> {
    let mut v: Vec<C64> = raw.iter().map(|&(a, b)| C64::new(a, b)).collect();
    let n: f64 = v.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
    if n < 1e-6 {
        v.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        v[0] = c(1.0);
    } else {
        v.iter_mut().for_each(|x| *x /= n);
    }
    v
}

pub fn arb_amplitudes(dim: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_map(|raw| normalized(&raw))
}

/// A random qubit basis from the SU(2) parametrization times a global phase.
pub fn arb_qubit_basis() -> impl Strategy<Value = Basis> {
    (0.0f64..std::f64::consts::PI, -3.2f64..3.2, -3.2f64..3.2).prop_map(|(t, b, g)| {
        let (s, co) = (t / 2.0).sin_cos();
        let v0 = vec![C64::from_polar(co, b), C64::from_polar(s, -g)];
        let v1 = vec![-C64::from_polar(s, g), C64::from_polar(co, -b)];
        Basis::new(vec![v0, v1], vec!["0".into(), "1".into()]).unwrap()
    })
}

pub fn qubits(labels: &[&str]) -> Vec<Register> {
    labels.iter().map(|l| Register::qubit(*l)).collect()
}
