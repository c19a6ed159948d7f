//! Exhaustive search for ±1 value assignments satisfying product constraints.
//!
//! `w_m` is the result of the super-Wigner at station `m`, `f_m` a value one
//! might attribute to the friend's pre-measurement. These values never touch a
//! simulated state; they only live in the assignment domain searched here.

use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{ScenarioOutput, Table, Tabulate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    W(u8),
    F(u8),
}

impl Var {
    fn station(self) -> u8 {
        match self {
            Var::W(m) | Var::F(m) => m,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::W(m) => write!(f, "w{m}"),
            Var::F(m) => write!(f, "f{m}"),
        }
    }
}

/// Per-station role in a station-mask constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    W,
    F,
    Absent,
}

/// `Π vars = product` with `product ∈ {+1, −1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    vars: Vec<Var>,
    product: i8,
}

impl Constraint {
    pub fn new(vars: Vec<Var>, product: i8) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::MalformedConstraint("no variables".into()));
        }
        if product != 1 && product != -1 {
            return Err(Error::MalformedConstraint(format!("product {product} is not ±1")));
        }
        for (i, v) in vars.iter().enumerate() {
            if !(1..=3).contains(&v.station()) {
                return Err(Error::MalformedConstraint(format!("station of {v} outside 1..=3")));
            }
            if vars[..i].contains(v) {
                return Err(Error::MalformedConstraint(format!("{v} repeated")));
            }
        }
        Ok(Self { vars, product })
    }

    /// One variable per station according to `mask`.
    pub fn from_mask(mask: [Role; 3], product: i8) -> Result<Self> {
        let vars = (1u8..=3)
            .zip(mask)
            .filter_map(|(m, r)| match r {
                Role::W => Some(Var::W(m)),
                Role::F => Some(Var::F(m)),
                Role::Absent => None,
            })
            .collect();
        Self::new(vars, product)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn product(&self) -> i8 {
        self.product
    }

    pub fn holds(&self, a: &CounterfactualAssignment) -> bool {
        self.vars.iter().map(|v| a.value(*v)).product::<i8>() == self.product
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.vars.iter().map(Var::to_string).collect();
        write!(f, "{}={}", names.join("*"), self.product)
    }
}

/// Parses `w1*f2*f3=-1`.
impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedConstraint(s.to_string());
        let (lhs, rhs) = s.split_once('=').ok_or_else(bad)?;
        let product: i8 = rhs.trim().trim_start_matches('+').parse().map_err(|_| bad())?;
        let vars = lhs
            .split('*')
            .map(|t| {
                let t = t.trim().to_ascii_lowercase();
                let m: u8 = t.get(1..).and_then(|d| d.parse().ok()).ok_or_else(bad)?;
                match t.chars().next() {
                    Some('w') => Ok(Var::W(m)),
                    Some('f') => Ok(Var::F(m)),
                    _ => Err(bad()),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, product)
    }
}

/// A point of `{±1}⁶`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CounterfactualAssignment {
    pub w: [i8; 3],
    pub f: [i8; 3],
}

impl CounterfactualAssignment {
    pub fn value(&self, v: Var) -> i8 {
        match v {
            Var::W(m) => self.w[m as usize - 1],
            Var::F(m) => self.f[m as usize - 1],
        }
    }

    fn from_bits(bits: u8) -> Self {
        let sign = |k: u8| if bits >> k & 1 == 1 { -1 } else { 1 };
        Self { w: [sign(5), sign(4), sign(3)], f: [sign(2), sign(1), sign(0)] }
    }
}

/// The four GHZ perfect-correlation constraints.
pub fn ghz_constraints() -> Vec<Constraint> {
    ["w1*w2*w3=1", "w1*f2*f3=-1", "f1*w2*f3=-1", "f1*f2*w3=-1"]
        .iter()
        .map(|s| s.parse().expect("well-formed"))
        .collect()
}

/// All assignments satisfying every constraint, in lexicographic bit order.
pub fn counterfactual_search(constraints: &[Constraint]) -> Vec<CounterfactualAssignment> {
    (0u8..64)
        .map(CounterfactualAssignment::from_bits)
        .filter(|a| constraints.iter().all(|c| c.holds(a)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterfactualReport {
    pub constraints: Vec<Constraint>,
    pub solutions: Vec<CounterfactualAssignment>,
}

impl CounterfactualReport {
    pub fn run(constraints: Vec<Constraint>) -> Self {
        let solutions = counterfactual_search(&constraints);
        Self { constraints, solutions }
    }
}

impl Tabulate for CounterfactualReport {
    fn tabulate(&self) -> ScenarioOutput {
        let mut table = Table::new(["w1", "w2", "w3", "f1", "f2", "f3"]);
        for a in &self.solutions {
            table.push(a.w.iter().chain(&a.f).map(|x| json!(x)).collect());
        }
        let names: Vec<String> = self.constraints.iter().map(Constraint::to_string).collect();
        ScenarioOutput {
            scenario: "counterfactual".into(),
            parameters: BTreeMap::from([("constraints".to_string(), json!(names))]),
            tables: BTreeMap::from([("solutions".to_string(), table)]),
            derived_quantities: BTreeMap::from([
                ("solution_count".to_string(), self.solutions.len() as f64),
                ("search_space".to_string(), 64.0),
            ]),
        }
    }
}
