use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qcore::{CONSTRUCTION_TOL, ONE, ZERO};

/// A square unitary matrix, row-major, checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    data: Vec<C64>,
}

impl Unitary {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, actual: data.len() });
        }
        let u = Self { dim, data };
        let dev = u.unitarity_deviation();
        if dev > CONSTRUCTION_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: bad.len() });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub(crate) fn new_unchecked(dim: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Self { dim, data }
    }

    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::new_unchecked(2, vec![h, h, h, -h])
    }

    pub fn pauli_x() -> Self {
        Self::new_unchecked(2, vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> Self {
        let i = C64::i();
        Self::new_unchecked(2, vec![ZERO, -i, i, ZERO])
    }

    pub fn pauli_z() -> Self {
        Self::new_unchecked(2, vec![ONE, ZERO, ZERO, -ONE])
    }

    /// `diag(1, e^{iφ})`: a phase shift on the `|1⟩` component.
    pub fn phase(phi: f64) -> Self {
        Self::new_unchecked(2, vec![ONE, ZERO, ZERO, C64::from_polar(1.0, phi)])
    }

    /// Controlled-NOT with the first qubit as control.
    pub fn cnot() -> Self {
        let mut data = vec![ZERO; 16];
        data[0] = ONE;
        data[5] = ONE;
        data[11] = ONE;
        data[14] = ONE;
        Self::new_unchecked(4, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn dagger(&self) -> Self {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        Self { dim: d, data }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    data[r * d + c] += a * other.data[k * d + c];
                }
            }
        }
        Ok(Self { dim: d, data })
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut data = vec![ZERO; d * d];
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.data[r1 * a + c1];
                for r2 in 0..b {
                    for c2 in 0..b {
                        data[(r1 * b + r2) * d + c1 * b + c2] = x * other.data[r2 * b + c2];
                    }
                }
            }
        }
        Self { dim: d, data }
    }

    /// max |(U†U − I)ᵢⱼ|
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut s = ZERO;
                for k in 0..d {
                    s += self.data[k * d + i].conj() * self.data[k * d + j];
                }
                if i == j {
                    s -= ONE;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}
