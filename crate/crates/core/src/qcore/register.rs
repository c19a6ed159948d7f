use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::error::{Error, Result};

/// A labeled subsystem of dimension at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    label: String,
    dim: usize,
}

impl Register {
    pub fn new(label: impl Into<String>, dim: usize) -> Result<Self> {
        let label = label.into();
        if dim < 2 {
            return Err(Error::BadDimension { label, dim });
        }
        Ok(Self { label, dim })
    }

    pub fn qubit(label: impl Into<String>) -> Self {
        Self { label: label.into(), dim: 2 }
    }

    pub fn qutrit(label: impl Into<String>) -> Self {
        Self { label: label.into(), dim: 3 }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

pub(crate) fn check_unique(registers: &[Register]) -> Result<()> {
    let mut seen = HashSet::new();
    for r in registers {
        if r.dim < 2 {
            return Err(Error::BadDimension { label: r.label.clone(), dim: r.dim });
        }
        if !seen.insert(r.label.as_str()) {
            return Err(Error::DuplicateRegister(r.label.clone()));
        }
    }
    Ok(())
}

pub(crate) fn total_dim(registers: &[Register]) -> usize {
    registers.iter().map(Register::dim).product()
}

pub(crate) fn position(registers: &[Register], label: &str) -> Result<usize> {
    registers
        .iter()
        .position(|r| r.label == label)
        .ok_or_else(|| Error::UnknownRegister(label.to_string()))
}

/// Index arithmetic for a target subset of a big-endian register list.
///
/// Any full index splits as `target_offsets[t] + rest_offsets[r]`, where `t`
/// enumerates target digits in the order the targets were given and `r`
/// enumerates the remaining registers in declaration order.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub target_offsets: Vec<usize>,
    pub rest_offsets: Vec<usize>,
}

impl Layout {
    pub fn new(registers: &[Register], targets: &[&str]) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::EmptySelection);
        }
        let n = registers.len();
        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * registers[k + 1].dim;
        }
        let mut picked = vec![false; n];
        let mut target_pos = Vec::with_capacity(targets.len());
        for t in targets {
            let p = position(registers, t)?;
            if picked[p] {
                return Err(Error::DuplicateRegister(t.to_string()));
            }
            picked[p] = true;
            target_pos.push(p);
        }
        let rest_pos: Vec<usize> = (0..n).filter(|k| !picked[*k]).collect();
        let offsets = |positions: &[usize]| -> Vec<usize> {
            let mut out = vec![0usize];
            for &p in positions {
                let d = registers[p].dim;
                let mut next = Vec::with_capacity(out.len() * d);
                for base in &out {
                    for digit in 0..d {
                        next.push(base + digit * strides[p]);
                    }
                }
                out = next;
            }
            out
        };
        Ok(Self { target_offsets: offsets(&target_pos), rest_offsets: offsets(&rest_pos) })
    }

    pub fn target_dim(&self) -> usize {
        self.target_offsets.len()
    }
}
