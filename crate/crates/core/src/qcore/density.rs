use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qcore::register::{check_unique, position, total_dim, Layout};
use crate::qcore::state::canonical_order;
use crate::qcore::{Basis, QuantumState, Register, StateVector, Unitary, CONSTRUCTION_TOL, ZERO};

const EIGEN_FLOOR: f64 = -1e-10;

/// A mixed state over an ordered register list; the matrix is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    registers: Vec<Register>,
    dim: usize,
    data: Vec<C64>,
}

impl DensityOperator {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(registers: Vec<Register>, data: Vec<C64>) -> Result<Self> {
        check_unique(&registers)?;
        let dim = total_dim(&registers);
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, actual: data.len() });
        }
        let rho = Self { registers, dim, data };
        let herm = rho.hermiticity_deviation();
        if herm > CONSTRUCTION_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        if let Some(min) = rho.eigenvalues().into_iter().reduce(f64::min) {
            if min < EIGEN_FLOOR {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(registers: Vec<Register>, data: Vec<C64>) -> Self {
        let dim = total_dim(&registers);
        debug_assert_eq!(data.len(), dim * dim);
        Self { registers, dim, data }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        let d = a.len();
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                data[i * d + j] = a[i] * a[j].conj();
            }
        }
        Self { registers: psi.registers().to_vec(), dim: d, data }
    }

    pub fn maximally_mixed(registers: Vec<Register>) -> Result<Self> {
        check_unique(&registers)?;
        let d = total_dim(&registers);
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            data[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Ok(Self { registers, dim: d, data })
    }

    /// `Σ wᵢ ρᵢ`; all parts must share one register list and the weights must sum to 1.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptySelection)?.1;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > CONSTRUCTION_TOL || parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::Parameter(format!("mixture weights sum to {total}")));
        }
        let mut data = vec![ZERO; first.data.len()];
        for (w, rho) in parts {
            if rho.registers != first.registers {
                return Err(Error::RegisterMismatch("mixture components differ".into()));
            }
            for (acc, x) in data.iter_mut().zip(&rho.data) {
                *acc += x * *w;
            }
        }
        Ok(Self { registers: first.registers.clone(), dim: first.dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρᵢⱼ|² for Hermitian ρ
        self.data.iter().map(C64::norm_sqr).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.eigenvalues().into_iter().filter(|&l| l > 1e-15).map(|l| -l * l.log2()).sum()
    }

    /// Keeps `keep` in original register order and traces out the rest.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityOperator> {
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut ordered: Vec<(usize, &str)> =
            keep.iter().map(|l| Ok((position(&self.registers, l)?, *l))).collect::<Result<_>>()?;
        ordered.sort_by_key(|(p, _)| *p);
        let labels: Vec<&str> = ordered.into_iter().map(|(_, l)| l).collect();
        self.reduced(&labels)
    }

    pub fn reorder(&self, order: &[&str]) -> Result<DensityOperator> {
        if order.len() != self.registers.len() {
            return Err(Error::RegisterMismatch(format!(
                "reorder needs all {} registers",
                self.registers.len()
            )));
        }
        self.reduced(order)
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn fidelity_with_pure(&self, psi: &StateVector) -> Result<f64> {
        let psi = canonical_order(&self.registers, psi, StateVector::reorder)?;
        let a = psi.amplitudes();
        let d = self.dim;
        let mut s = ZERO;
        for i in 0..d {
            if a[i] == ZERO {
                continue;
            }
            for j in 0..d {
                s += a[i].conj() * self.data[i * d + j] * a[j];
            }
        }
        Ok(s.re.clamp(0.0, 1.0))
    }

    /// Frobenius norm of everything outside the diagonal blocks of `basis` on `targets`.
    ///
    /// Zero exactly when the state is block-diagonal in the basis (i.e. decohered).
    pub fn off_diagonal_norm(&self, basis: &Basis, targets: &[&str]) -> Result<f64> {
        let reduced = self.reduced(targets)?;
        if basis.dim() != reduced.dim {
            return Err(Error::DimensionMismatch { expected: reduced.dim, actual: basis.dim() });
        }
        // ρ in the given basis on targets, then off-diagonal Frobenius norm, but
        // computed on the full state so that correlations with the rest count.
        let layout = Layout::new(&self.registers, targets)?;
        let n = basis.len();
        let rest = &layout.rest_offsets;
        let mut total = 0.0;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                for &r1 in rest {
                    for &r2 in rest {
                        let mut s = ZERO;
                        for (t1, &o1) in layout.target_offsets.iter().enumerate() {
                            let ba = basis.vector(a)[t1].conj();
                            if ba == ZERO {
                                continue;
                            }
                            for (t2, &o2) in layout.target_offsets.iter().enumerate() {
                                s += ba * self.get(o1 + r1, o2 + r2) * basis.vector(b)[t2];
                            }
                        }
                        total += s.norm_sqr();
                    }
                }
            }
        }
        Ok(total.sqrt())
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    fn sqrt_psd(&self) -> DMatrix<C64> {
        let eig = self.to_nalgebra().symmetric_eigen();
        let v = &eig.eigenvectors;
        let roots = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(l.max(0.0).sqrt(), 0.0)));
        v * roots * v.adjoint()
    }

    fn weights(&self, basis: &Basis, targets: &[&str]) -> Result<Vec<f64>> {
        let reduced = self.reduced(targets)?;
        let d = reduced.dim;
        if basis.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: basis.dim() });
        }
        Ok(basis
            .vectors()
            .iter()
            .map(|b| {
                let mut s = ZERO;
                for i in 0..d {
                    if b[i] == ZERO {
                        continue;
                    }
                    for j in 0..d {
                        s += b[i].conj() * reduced.data[i * d + j] * b[j];
                    }
                }
                s.re.max(0.0)
            })
            .collect())
    }
}

impl QuantumState for DensityOperator {
    fn registers(&self) -> &[Register] {
        &self.registers
    }

    fn apply_unitary(&self, u: &Unitary, targets: &[&str]) -> Result<Self> {
        let layout = Layout::new(&self.registers, targets)?;
        let dt = layout.target_dim();
        if u.dim() != dt {
            return Err(Error::DimensionMismatch { expected: dt, actual: u.dim() });
        }
        let d = self.dim;
        let m = u.data();
        let mut out = self.data.clone();
        let mut buf = vec![ZERO; dt];
        // ρ → Uρ: act on every column
        for col in 0..d {
            for &r in &layout.rest_offsets {
                for (t, &o) in layout.target_offsets.iter().enumerate() {
                    buf[t] = out[(o + r) * d + col];
                }
                for (row, &o) in layout.target_offsets.iter().enumerate() {
                    out[(o + r) * d + col] =
                        m[row * dt..(row + 1) * dt].iter().zip(&buf).map(|(a, b)| a * b).sum();
                }
            }
        }
        // Uρ → UρU†: act with conj(U) on every row
        for row in 0..d {
            let base = row * d;
            for &r in &layout.rest_offsets {
                for (t, &o) in layout.target_offsets.iter().enumerate() {
                    buf[t] = out[base + o + r];
                }
                for (k, &o) in layout.target_offsets.iter().enumerate() {
                    out[base + o + r] = m[k * dt..(k + 1) * dt]
                        .iter()
                        .zip(&buf)
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                }
            }
        }
        Ok(Self { registers: self.registers.clone(), dim: d, data: out })
    }

    fn reduced(&self, targets: &[&str]) -> Result<DensityOperator> {
        let layout = Layout::new(&self.registers, targets)?;
        let dt = layout.target_dim();
        let mut data = vec![ZERO; dt * dt];
        for (a, &oa) in layout.target_offsets.iter().enumerate() {
            for (b, &ob) in layout.target_offsets.iter().enumerate() {
                data[a * dt + b] = layout.rest_offsets.iter().map(|&r| self.get(oa + r, ob + r)).sum();
            }
        }
        let registers = targets
            .iter()
            .map(|l| self.registers[position(&self.registers, l).unwrap()].clone())
            .collect();
        Ok(Self { registers, dim: dt, data })
    }

    fn to_density(&self) -> DensityOperator {
        self.clone()
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        let mut registers = self.registers.clone();
        registers.extend(other.registers.iter().cloned());
        check_unique(&registers)?;
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut data = vec![ZERO; d * d];
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.data[r1 * a + c1];
                if x == ZERO {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        data[(r1 * b + r2) * d + c1 * b + c2] = x * other.data[r2 * b + c2];
                    }
                }
            }
        }
        Ok(Self { registers, dim: d, data })
    }

    fn basis_weights(&self, basis: &Basis, targets: &[&str]) -> Result<Vec<f64>> {
        self.weights(basis, targets)
    }

    /// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
    fn fidelity(&self, other: &Self) -> Result<f64> {
        let other = canonical_order(&self.registers, other, DensityOperator::reorder)?;
        let s = self.sqrt_psd();
        let inner = &s * other.to_nalgebra() * &s;
        let inner = (inner.clone() + inner.adjoint()) * C64::new(0.5, 0.0);
        let root_trace: f64 = inner.symmetric_eigenvalues().iter().map(|l| l.max(0.0).sqrt()).sum();
        Ok((root_trace * root_trace).clamp(0.0, 1.0))
    }
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    registers: Vec<Register>,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityRepr {
            registers: self.registers.clone(),
            matrix: self
                .data
                .chunks(self.dim)
                .map(|row| row.iter().map(|x| [x.re, x.im]).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DensityRepr::deserialize(d)?;
        let data = repr.matrix.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
        DensityOperator::new(repr.registers, data).map_err(serde::de::Error::custom)
    }
}
