use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qcore::register::{check_unique, position, total_dim, Layout};
use crate::qcore::{
    Basis, DensityOperator, QuantumState, Register, Unitary, CONSTRUCTION_TOL, ONE, ZERO,
};

/// A normalized pure state over an ordered register list.
///
/// Amplitudes are indexed big-endian: the first register is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    registers: Vec<Register>,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(registers: Vec<Register>, amps: Vec<C64>) -> Result<Self> {
        check_unique(&registers)?;
        let d = total_dim(&registers);
        if amps.len() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: amps.len() });
        }
        let norm = norm2(&amps).sqrt();
        if (norm - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { registers, amps })
    }

    /// Like [`StateVector::new`] but rescales the amplitudes to unit norm.
    pub fn normalized(registers: Vec<Register>, mut amps: Vec<C64>) -> Result<Self> {
        let norm = norm2(&amps).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::new(registers, amps)
    }

    /// The product state with every register in its digit from `digits`.
    pub fn basis_state(registers: Vec<Register>, digits: &[usize]) -> Result<Self> {
        check_unique(&registers)?;
        if digits.len() != registers.len() {
            return Err(Error::DimensionMismatch { expected: registers.len(), actual: digits.len() });
        }
        let mut index = 0;
        for (r, &d) in registers.iter().zip(digits) {
            if d >= r.dim() {
                return Err(Error::DimensionMismatch { expected: r.dim(), actual: d });
            }
            index = index * r.dim() + d;
        }
        let mut amps = vec![ZERO; total_dim(&registers)];
        amps[index] = ONE;
        Ok(Self { registers, amps })
    }

    /// Every register in `|0⟩`.
    pub fn zero(registers: Vec<Register>) -> Result<Self> {
        let digits = vec![0; registers.len()];
        Self::basis_state(registers, &digits)
    }

    /// A single register holding a given vector (normalized on input).
    pub fn single(register: Register, amps: Vec<C64>) -> Result<Self> {
        Self::new(vec![register], amps)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.amps).sqrt()
    }

    /// `⟨self|other⟩` over identical register lists.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.registers != other.registers {
            return Err(Error::RegisterMismatch(describe(&self.registers, &other.registers)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// In-place local unitary; the hot path of large pure-state sweeps.
    pub fn apply_unitary_mut(&mut self, u: &Unitary, targets: &[&str]) -> Result<()> {
        let layout = Layout::new(&self.registers, targets)?;
        let dt = layout.target_dim();
        if u.dim() != dt {
            return Err(Error::DimensionMismatch { expected: dt, actual: u.dim() });
        }
        let mut buf = vec![ZERO; dt];
        let m = u.data();
        for &r in &layout.rest_offsets {
            for (t, &off) in layout.target_offsets.iter().enumerate() {
                buf[t] = self.amps[off + r];
            }
            for (row, &off) in layout.target_offsets.iter().enumerate() {
                let coeffs = &m[row * dt..(row + 1) * dt];
                self.amps[off + r] = coeffs.iter().zip(&buf).map(|(a, b)| a * b).sum();
            }
        }
        Ok(())
    }

    /// The same state with registers permuted into `order`.
    pub fn reorder(&self, order: &[&str]) -> Result<StateVector> {
        if order.len() != self.registers.len() {
            return Err(Error::RegisterMismatch(format!(
                "reorder needs all {} registers",
                self.registers.len()
            )));
        }
        let layout = Layout::new(&self.registers, order)?;
        let amps = layout.target_offsets.iter().map(|&o| self.amps[o]).collect();
        let registers = order
            .iter()
            .map(|l| Ok(self.registers[position(&self.registers, l)?].clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(StateVector { registers, amps })
    }

    /// Squared norm of the projection of each basis vector onto the targets.
    fn weights(&self, basis: &Basis, targets: &[&str]) -> Result<Vec<f64>> {
        let layout = Layout::new(&self.registers, targets)?;
        if basis.dim() != layout.target_dim() {
            return Err(Error::DimensionMismatch { expected: layout.target_dim(), actual: basis.dim() });
        }
        Ok(basis
            .vectors()
            .iter()
            .map(|b| {
                layout
                    .rest_offsets
                    .iter()
                    .map(|&r| {
                        let a: C64 = layout
                            .target_offsets
                            .iter()
                            .zip(b)
                            .map(|(&t, bv)| bv.conj() * self.amps[t + r])
                            .sum();
                        a.norm_sqr()
                    })
                    .sum()
            })
            .collect())
    }
}

impl QuantumState for StateVector {
    fn registers(&self) -> &[Register] {
        &self.registers
    }

    fn apply_unitary(&self, u: &Unitary, targets: &[&str]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_unitary_mut(u, targets)?;
        Ok(out)
    }

    fn reduced(&self, targets: &[&str]) -> Result<DensityOperator> {
        let layout = Layout::new(&self.registers, targets)?;
        let dt = layout.target_dim();
        let mut rho = vec![ZERO; dt * dt];
        for &r in &layout.rest_offsets {
            for (a, &oa) in layout.target_offsets.iter().enumerate() {
                let x = self.amps[oa + r];
                if x == ZERO {
                    continue;
                }
                for (b, &ob) in layout.target_offsets.iter().enumerate() {
                    rho[a * dt + b] += x * self.amps[ob + r].conj();
                }
            }
        }
        let regs = targets
            .iter()
            .map(|l| self.registers[position(&self.registers, l).unwrap()].clone())
            .collect();
        Ok(DensityOperator::from_raw(regs, rho))
    }

    fn to_density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        let mut registers = self.registers.clone();
        registers.extend(other.registers.iter().cloned());
        check_unique(&registers)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector { registers, amps })
    }

    fn basis_weights(&self, basis: &Basis, targets: &[&str]) -> Result<Vec<f64>> {
        self.weights(basis, targets)
    }

    fn fidelity(&self, other: &Self) -> Result<f64> {
        let other = canonical_order(self.registers(), other, StateVector::reorder)?;
        Ok(self.inner(&other)?.norm_sqr().min(1.0))
    }
}

/// Brings `other` into `reference` register order, failing on differing label sets.
pub(crate) fn canonical_order<S: QuantumState>(
    reference: &[Register],
    other: &S,
    reorder: impl Fn(&S, &[&str]) -> Result<S>,
) -> Result<S> {
    if reference == other.registers() {
        return Ok(other.clone());
    }
    let mut a: Vec<&Register> = reference.iter().collect();
    let mut b: Vec<&Register> = other.registers().iter().collect();
    a.sort_by(|x, y| x.label().cmp(y.label()));
    b.sort_by(|x, y| x.label().cmp(y.label()));
    if a != b {
        return Err(Error::RegisterMismatch(describe(reference, other.registers())));
    }
    let order: Vec<&str> = reference.iter().map(Register::label).collect();
    reorder(other, &order)
}

pub(crate) fn describe(a: &[Register], b: &[Register]) -> String {
    let names = |rs: &[Register]| rs.iter().map(|r| r.label().to_string()).collect::<Vec<_>>().join(",");
    format!("[{}] vs [{}]", names(a), names(b))
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum()
}

#[derive(Serialize, Deserialize)]
struct StateVectorRepr {
    registers: Vec<Register>,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateVectorRepr {
            registers: self.registers.clone(),
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StateVectorRepr::deserialize(d)?;
        let amps = repr.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        StateVector::new(repr.registers, amps).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn plus(label: &str) -> StateVector {
        StateVector::single(Register::qubit(label), vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let a = StateVector::zero(vec![Register::qubit("a")]).unwrap();
        let b = StateVector::zero(vec![Register::qubit("b")]).unwrap();
        assert_eq!(a.tensor(&b).unwrap().amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
    }

    #[test]
    fn tensor_by_linearity() {
        let b = StateVector::basis_state(vec![Register::qubit("b")], &[1]).unwrap();
        let s = plus("a").tensor(&b).unwrap();
        let h = c(FRAC_1_SQRT_2);
        assert_eq!(s.amplitudes(), &[ZERO, h, ZERO, h]);
    }

    #[test]
    fn triple_plus_is_uniform() {
        // direct expansion: every product of three 1/√2 factors
        let s = plus("a").tensor(&plus("b")).unwrap().tensor(&plus("c")).unwrap();
        let expect = 1.0 / 8f64.sqrt();
        for a in s.amplitudes() {
            assert!((a - c(expect)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_rejects_duplicate_labels() {
        assert!(matches!(plus("a").tensor(&plus("a")), Err(Error::DuplicateRegister(_))));
    }

    #[test]
    fn hadamard_on_zero() {
        let z = StateVector::zero(vec![Register::qubit("q")]).unwrap();
        let out = z.apply_unitary(&Unitary::hadamard(), &["q"]).unwrap();
        assert!(out.fidelity(&plus("q")).unwrap() > 1.0 - 1e-15);
        let same = z.apply_unitary(&Unitary::identity(2), &["q"]).unwrap();
        assert_eq!(same, z);
    }

    #[test]
    fn phase_pi_flips_relative_sign() {
        // matrix-multiply oracle: diag(e^{iπ}, 1)·(1,1)/√2 = (−1, 1)/√2
        let h = FRAC_1_SQRT_2;
        let on_h = Unitary::new(2, vec![C64::from_polar(1.0, PI), ZERO, ZERO, ONE]).unwrap();
        let out = plus("g").apply_unitary(&on_h, &["g"]).unwrap();
        let minus = StateVector::single(Register::qubit("g"), vec![c(h), c(-h)]).unwrap();
        assert!((out.fidelity(&minus).unwrap() - 1.0).abs() < 1e-15);
        assert!((out.amplitudes()[0] - c(-h)).norm() < 1e-15);
    }

    #[test]
    fn apply_errors() {
        let s = plus("g");
        assert!(matches!(s.apply_unitary(&Unitary::cnot(), &["g"]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(s.apply_unitary(&Unitary::hadamard(), &["x"]), Err(Error::UnknownRegister(_))));
    }

    #[test]
    fn fidelity_orthogonal_and_reordered() {
        let z = StateVector::zero(vec![Register::qubit("q")]).unwrap();
        let o = StateVector::basis_state(vec![Register::qubit("q")], &[1]).unwrap();
        assert_eq!(z.fidelity(&o).unwrap(), 0.0);
        let ab = StateVector::basis_state(vec![Register::qubit("a"), Register::qubit("b")], &[0, 1]).unwrap();
        let ba = StateVector::basis_state(vec![Register::qubit("b"), Register::qubit("a")], &[1, 0]).unwrap();
        assert_eq!(ab.fidelity(&ba).unwrap(), 1.0);
        assert!(matches!(z.fidelity(&plus("x")), Err(Error::RegisterMismatch(_))));
    }

    #[test]
    fn json_round_trip_keeps_header() {
        let s = plus("g");
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"registers":[{"label":"g","dim":2}],"amplitudes":[["#));
        let back: StateVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
