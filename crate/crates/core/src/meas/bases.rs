use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::qcore::{Basis, Register};

fn pm_labels() -> Vec<String> {
    vec!["+".into(), "-".into()]
}

/// `|±;φ⟩ = (|0⟩ ± e^{iφ}|1⟩)/√2`, labels `+`/`-`, eigenvalues ±1.
pub fn phase_basis(phi: f64) -> Basis {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let e = C64::from_polar(FRAC_1_SQRT_2, phi);
    Basis::new(vec![vec![h, e], vec![h, -e]], pm_labels()).expect("phase basis is orthonormal")
}

/// Eigenbasis of `cos θ σ_z + sin θ σ_x`, labels `+`/`-`.
pub fn planar_basis(theta: f64) -> Basis {
    let (s, c) = (theta / 2.0).sin_cos();
    let v = |a: f64, b: f64| vec![C64::new(a, 0.0), C64::new(b, 0.0)];
    Basis::new(vec![v(c, s), v(-s, c)], pm_labels()).expect("planar basis is orthonormal")
}

/// The three mutually unbiased qubit bases.
///
/// `n = 1` is computational; `n = 2` has vectors `(|0⟩ + e^{ilπ}|1⟩)/√2`;
/// `n = 3` has `(|0⟩ + e^{i(π/2 + lπ)}|1⟩)/√2`. Eigenvalues are `(−1)^l`.
pub fn mub_basis(n: u8) -> Result<Basis> {
    let h = FRAC_1_SQRT_2;
    let family = |offset: f64| -> Vec<Vec<C64>> {
        (0..2)
            .map(|l| vec![C64::new(h, 0.0), C64::from_polar(h, offset + l as f64 * PI)])
            .collect()
    };
    match n {
        1 => Ok(Basis::computational(2)),
        2 => Basis::new(family(0.0), pm_labels()),
        3 => Basis::new(family(FRAC_PI_2), pm_labels()),
        _ => Err(Error::MubIndex(n)),
    }
}

/// Basis on `system ⊗ ancilla^copies` whose amplitudes on pre-measured inputs
/// reproduce a direct `wigner` measurement of the system:
/// `|j; W⟩ = Σₖ ⟨pₖ|wⱼ⟩ |pₖ⟩|k⟩…|k⟩`.
///
/// The result has as many vectors as the system dimension and is partial
/// whenever `copies ≥ 1`.
pub fn lab_basis(pre: &Basis, wigner: &Basis, copies: usize) -> Result<Basis> {
    let d = pre.dim();
    if wigner.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: wigner.dim() });
    }
    if pre.is_partial() {
        return Err(Error::IncompleteBasis(d));
    }
    let ancilla_dim = d.pow(copies as u32);
    let total = d * ancilla_dim;
    // index of |k⟩^{⊗copies} in the ancilla block
    let repeated = |k: usize| (0..copies).fold(0, |acc, _| acc * d + k);
    let vectors = (0..wigner.len())
        .map(|j| {
            let mut v = vec![C64::new(0.0, 0.0); total];
            for k in 0..d {
                let coeff = pre.overlap(k, wigner.vector(j));
                let a = repeated(k);
                for (s, pk) in pre.vector(k).iter().enumerate() {
                    v[s * ancilla_dim + a] += coeff * pk;
                }
            }
            v
        })
        .collect();
    Basis::with_eigenvalues(vectors, wigner.labels().to_vec(), wigner.eigenvalues().to_vec())
}

/// The super-Wigner basis on `system ⊗ friend` for a friend who pre-measured
/// in `premeasure_basis`.
pub fn dressed_basis(
    system: &Register,
    friend: &Register,
    premeasure_basis: &Basis,
    wigner_basis: &Basis,
) -> Result<Basis> {
    let d = system.dim();
    if friend.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: friend.dim() });
    }
    if premeasure_basis.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: premeasure_basis.dim() });
    }
    lab_basis(premeasure_basis, wigner_basis, 1)
}
