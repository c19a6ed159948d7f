//! Name resolution, dimension checks and register lifecycles; lowers a valid
//! program to a [`Protocol`].

use num_complex::Complex64 as C64;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use super::ast::*;
use super::{Diagnostic, Span};
use crate::error::Error;
use crate::meas::{lab_basis, mub_basis, phase_basis, planar_basis};
use crate::qcore::{Basis, Register, Unitary};

/// Largest state vector a program may declare.
pub const MAX_AMPLITUDES: usize = 1 << 22;
/// Largest density matrix dimension (system and environment) for `decohere`.
pub const MAX_DENSITY_DIM: usize = 4096;

const NORM_TOL: f64 = 1e-9;

/// A validated program, ready to execute.
#[derive(Debug, Clone)]
pub struct Protocol {
    pub registers: Vec<Register>,
    /// Declared states: name, registers, normalized amplitudes.
    pub states: Vec<(String, Vec<String>, Vec<C64>)>,
    pub steps: Vec<Step>,
    pub measurements: Vec<MeasurementSpec>,
    pub assertions: Vec<AssertionSpec>,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Clone)]
pub enum Step {
    Premeasure { system: String, basis: Basis, ancillas: Vec<String> },
    Decohere { registers: Vec<String>, basis: Basis, strength: f64 },
    Undo { system: String },
    Apply { unitary: Unitary, targets: Vec<String> },
}

#[derive(Debug, Clone)]
pub struct MeasurementSpec {
    pub name: String,
    pub targets: Vec<String>,
    pub basis: Basis,
}

#[derive(Debug, Clone)]
pub struct AssertionSpec {
    /// The assertion in canonical source form.
    pub text: String,
    pub line: u32,
    pub quantity: QuantitySpec,
    pub cmp: Cmp,
    pub expected: f64,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub enum QuantitySpec {
    /// `(measurement index, outcome index)` pairs.
    Prob(Vec<(usize, usize)>),
    Corr(Vec<usize>),
    /// Index into [`Protocol::states`].
    Fidelity(usize),
}

/// All diagnostics for a parsed program, in source order.
pub fn validate(program: &Program) -> Vec<Diagnostic> {
    let mut c = Checker::default();
    c.program(program);
    c.finish().1
}

/// Validates and lowers; fails when any error diagnostic is raised.
pub fn compile(program: &Program) -> Result<Protocol, Vec<Diagnostic>> {
    let mut c = Checker::default();
    c.program(program);
    let (protocol, diags) = c.finish();
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(protocol)
    }
}

#[derive(Debug, Default, Clone)]
struct Life {
    in_state: Option<String>,
    touches: u32,
    decohered: bool,
    measured_by: Option<String>,
}

#[derive(Debug)]
struct Record {
    system: usize,
    ancillas: Vec<usize>,
    touches: Vec<u32>,
    decohered: bool,
    undone: bool,
}

#[derive(Default)]
struct Checker<'a> {
    diags: Vec<Diagnostic>,
    registers: Vec<Register>,
    reg_index: HashMap<String, usize>,
    life: Vec<Life>,
    total_dim: usize,
    bases: HashMap<String, (&'a BasisExpr, Span, bool)>,
    states: Vec<(String, Vec<String>, Vec<C64>)>,
    records: Vec<Record>,
    measurements: Vec<MeasurementSpec>,
    steps: Vec<Step>,
    assertions: Vec<AssertionSpec>,
    seen_operation: bool,
}

fn err(span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(span, msg)
}

/// Evaluates a constant expression.
pub(crate) fn eval(e: &Expr) -> Result<C64, Diagnostic> {
    let v = match &e.kind {
        ExprKind::Number(x) => C64::new(*x, 0.0),
        ExprKind::Imag(x) => C64::new(0.0, *x),
        ExprKind::Pi => C64::new(PI, 0.0),
        ExprKind::I => C64::new(0.0, 1.0),
        ExprKind::Neg(a) => -eval(a)?,
        ExprKind::Binary(op, a, b) => {
            let (a, b) = (eval(a)?, eval(b)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.norm() == 0.0 {
                        return Err(err(e.span, "division by zero"));
                    }
                    a / b
                }
            }
        }
        ExprKind::Call(f, a) => {
            let a = eval(a)?;
            match f {
                Func::Sqrt => a.sqrt(),
                Func::Exp => a.exp(),
                Func::Cos => a.cos(),
                Func::Sin => a.sin(),
            }
        }
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(err(e.span, "expression is not finite"));
    }
    Ok(v)
}

fn real(e: &Expr) -> Result<f64, Diagnostic> {
    let v = eval(e)?;
    if v.im.abs() > 1e-12 {
        return Err(err(e.span, format!("expected a real number, got {} + {}i", v.re, v.im)));
    }
    Ok(v.re)
}

fn integer(e: &Expr, lo: i64, hi: i64, what: &str) -> Result<i64, Diagnostic> {
    let x = real(e)?;
    if x.fract() != 0.0 || x < lo as f64 || x > hi as f64 {
        return Err(err(e.span, format!("{what} must be an integer in {lo}..={hi}, got {x}")));
    }
    Ok(x as i64)
}

/// Numeric labels double as eigenvalues; `+`/`-` mean ±1.
fn eigenvalue(label: &str, index: usize) -> f64 {
    match label {
        "+" => 1.0,
        "-" => -1.0,
        _ => label.parse::<f64>().unwrap_or(if index.is_multiple_of(2) { 1.0 } else { -1.0 }),
    }
}

impl<'a> Checker<'a> {
    fn finish(mut self) -> (Protocol, Vec<Diagnostic>) {
        let mut unused: Vec<_> = self
            .bases
            .iter()
            .filter(|(_, (_, _, used))| !used)
            .map(|(name, (_, span, _))| Diagnostic::warning(*span, format!("basis `{name}` is never used")))
            .collect();
        self.diags.append(&mut unused);
        self.diags.sort_by_key(|d| (d.span.start, d.span.len));
        let warnings = self.diags.iter().filter(|d| !d.is_error()).cloned().collect();
        let protocol = Protocol {
            registers: self.registers,
            states: self.states,
            steps: self.steps,
            measurements: self.measurements,
            assertions: self.assertions,
            warnings,
        };
        (protocol, self.diags)
    }

    fn report<T>(&mut self, r: Result<T, Diagnostic>) -> Option<T> {
        r.map_err(|d| self.diags.push(d)).ok()
    }

    fn program(&mut self, program: &'a Program) {
        for stmt in &program.stmts {
            self.statement(stmt);
        }
    }

    fn statement(&mut self, stmt: &'a Stmt) {
        match &stmt.kind {
            StmtKind::Register { name, dim } => self.register(name, *dim),
            StmtKind::Basis { name, expr } => self.basis_decl(name, expr),
            StmtKind::State { name, ket, on } => self.state(name, ket, on),
            StmtKind::Premeasure { system, basis, into } => {
                self.seen_operation = true;
                self.premeasure(system, basis, into);
            }
            StmtKind::Decohere { regs, basis, strength } => {
                self.seen_operation = true;
                self.decohere(regs, basis.as_ref(), strength.as_ref(), stmt.span);
            }
            StmtKind::Undo { system } => {
                self.seen_operation = true;
                self.undo(system, stmt.span);
            }
            StmtKind::Measure { regs, basis, name } => {
                self.seen_operation = true;
                let name = name.clone().unwrap_or_else(|| Ident {
                    name: regs.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join("_"),
                    span: stmt.span,
                });
                self.measure(regs, basis, &name);
            }
            StmtKind::Apply { gate, on } => {
                self.seen_operation = true;
                self.apply(gate, on);
            }
            StmtKind::Assert { quantity, cmp, expected, tol } => {
                self.assertion(stmt, quantity, *cmp, expected, tol);
            }
        }
    }

    fn register(&mut self, name: &Ident, dim: usize) {
        if self.reg_index.contains_key(&name.name) {
            self.diags.push(err(name.span, format!("register `{}` is already declared", name.name)));
            return;
        }
        if self.seen_operation {
            self.diags.push(err(name.span, "registers must be declared before the first operation"));
            return;
        }
        let total = self.total_dim.max(1).saturating_mul(dim);
        if total > MAX_AMPLITUDES {
            self.diags.push(err(
                name.span,
                format!("register `{}` grows the state to {total} amplitudes; the limit is {MAX_AMPLITUDES}", name.name),
            ));
            return;
        }
        self.total_dim = total;
        self.reg_index.insert(name.name.clone(), self.registers.len());
        self.registers.push(Register::new(name.name.clone(), dim).expect("parser admits dim >= 2"));
        self.life.push(Life::default());
    }

    /// Resolves register names; `None` after reporting any problem.
    fn regs(&mut self, ids: &[Ident]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(ids.len());
        let mut ok = true;
        for id in ids {
            match self.reg_index.get(&id.name) {
                None => {
                    self.diags.push(err(id.span, format!("unknown register `{}`", id.name)));
                    ok = false;
                }
                Some(&k) if out.contains(&k) => {
                    self.diags.push(err(id.span, format!("register `{}` is listed twice", id.name)));
                    ok = false;
                }
                Some(&k) => out.push(k),
            }
        }
        ok.then_some(out)
    }

    /// Reports registers that an earlier measurement already consumed.
    fn live(&mut self, idx: &[usize], ids: &[Ident]) -> bool {
        let mut ok = true;
        for (&k, id) in idx.iter().zip(ids) {
            if let Some(m) = &self.life[k].measured_by {
                let msg = format!("register `{}` was already measured by `{m}`", id.name);
                self.diags.push(err(id.span, msg));
                ok = false;
            }
        }
        ok
    }

    fn dims(&self, idx: &[usize]) -> Vec<usize> {
        idx.iter().map(|&k| self.registers[k].dim()).collect()
    }

    fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&k| self.registers[k].label().to_string()).collect()
    }

    fn basis_decl(&mut self, name: &Ident, expr: &'a BasisExpr) {
        if self.bases.contains_key(&name.name) {
            self.diags.push(err(name.span, format!("basis `{}` is already declared", name.name)));
            return;
        }
        self.check_references(expr);
        self.bases.insert(name.name.clone(), (expr, name.span, false));
    }

    fn check_references(&mut self, expr: &BasisExpr) {
        match &expr.kind {
            BasisKind::Named(id) => match self.bases.get_mut(&id.name) {
                Some(entry) => entry.2 = true,
                None => self.diags.push(err(id.span, format!("unknown basis `{}`", id.name))),
            },
            BasisKind::Lab { pre, wigner, .. } | BasisKind::Dressed { pre, wigner } => {
                self.check_references(pre);
                self.check_references(wigner);
            }
            _ => {}
        }
    }

    /// Vector of a ket expression over registers of the given dimensions.
    fn ket_vector(&self, ket: &KetExpr, dims: &[usize]) -> Result<Vec<C64>, Diagnostic> {
        let total: usize = dims.iter().product();
        let mut v = vec![C64::new(0.0, 0.0); total];
        for term in &ket.terms {
            if term.digits.len() != dims.len() {
                return Err(err(
                    term.span,
                    format!("ket `|{}>` has {} digits but the target has {} registers", term.digits, term.digits.len(), dims.len()),
                ));
            }
            let mut index = 0;
            for (ch, &d) in term.digits.chars().zip(dims) {
                let digit = ch.to_digit(10).unwrap_or(u32::MAX) as usize;
                if digit >= d {
                    return Err(err(term.span, format!("digit {ch} is out of range for a register of dimension {d}")));
                }
                index = index * d + digit;
            }
            v[index] += eval(&term.coeff)?;
        }
        Ok(v)
    }

    fn resolve(&mut self, b: &BasisExpr, dims: &[usize]) -> Option<Basis> {
        let r = self.try_resolve(b, dims);
        self.report(r)
    }

    fn try_resolve(&mut self, b: &BasisExpr, dims: &[usize]) -> Result<Basis, Diagnostic> {
        let total: usize = dims.iter().product();
        let qubit = |what: &str| -> Result<(), Diagnostic> {
            if total == 2 {
                Ok(())
            } else {
                Err(err(b.span, format!("`{what}` bases act on one qubit; the target has dimension {total}")))
            }
        };
        let built = match &b.kind {
            BasisKind::Named(id) => {
                let Some(entry) = self.bases.get_mut(&id.name) else {
                    return Err(err(id.span, format!("unknown basis `{}`", id.name)));
                };
                entry.2 = true;
                let expr = entry.0;
                return self.try_resolve(expr, dims).map_err(|d| {
                    if d.message.starts_with("basis is not orthonormal") {
                        d
                    } else {
                        err(id.span, format!("basis `{}` does not fit here: {}", id.name, d.message))
                    }
                });
            }
            BasisKind::Computational => Ok(Basis::computational(total)),
            BasisKind::Mub(e) => {
                qubit("mub")?;
                mub_basis(integer(e, 1, 3, "MUB index")? as u8)
            }
            BasisKind::Phase(e) => {
                qubit("phase")?;
                Ok(phase_basis(real(e)?))
            }
            BasisKind::Planar(e) => {
                qubit("planar")?;
                Ok(planar_basis(real(e)?))
            }
            BasisKind::Lab { pre, wigner, copies } => {
                let copies = integer(copies, 1, 8, "copy count")? as usize;
                return self.lab(b.span, pre, wigner, copies, dims);
            }
            BasisKind::Dressed { pre, wigner } => return self.lab(b.span, pre, wigner, 1, dims),
            BasisKind::Explicit(items) => {
                let mut vectors = Vec::with_capacity(items.len());
                let mut labels: Vec<String> = Vec::with_capacity(items.len());
                for (ket, label) in items {
                    if labels.contains(&label.text) {
                        return Err(err(label.span, format!("duplicate outcome label `{}`", label.text)));
                    }
                    vectors.push(self.ket_vector(ket, dims)?);
                    labels.push(label.text.clone());
                }
                let eig = labels.iter().enumerate().map(|(i, l)| eigenvalue(l, i)).collect();
                Basis::with_eigenvalues(vectors, labels, eig)
            }
        };
        built.map_err(|e| match e {
            Error::NotOrthonormal(dev) => {
                err(b.span, format!("basis is not orthonormal (Gram-matrix deviation {dev:.3e})"))
            }
            other => err(b.span, other.to_string()),
        })
    }

    fn lab(
        &mut self,
        span: Span,
        pre: &BasisExpr,
        wigner: &BasisExpr,
        copies: usize,
        dims: &[usize],
    ) -> Result<Basis, Diagnostic> {
        if dims.len() != copies + 1 || dims.iter().any(|&d| d != dims[0]) {
            return Err(err(
                span,
                format!("this lab basis needs a system and {copies} record register(s) of equal dimension, got dimensions {dims:?}"),
            ));
        }
        let p = self.try_resolve(pre, &dims[..1])?;
        let w = self.try_resolve(wigner, &dims[..1])?;
        lab_basis(&p, &w, copies).map_err(|e| err(span, e.to_string()))
    }

    fn state(&mut self, name: &Ident, ket: &KetExpr, on: &[Ident]) {
        if self.states.iter().any(|s| s.0 == name.name) {
            self.diags.push(err(name.span, format!("state `{}` is already declared", name.name)));
            return;
        }
        if self.seen_operation {
            self.diags.push(err(name.span, "initial states must be declared before the first operation"));
            return;
        }
        let Some(idx) = self.regs(on) else { return };
        let mut ok = true;
        for (&k, id) in idx.iter().zip(on) {
            if let Some(s) = &self.life[k].in_state {
                let msg = format!("register `{}` is already prepared by state `{s}`", id.name);
                self.diags.push(err(id.span, msg));
                ok = false;
            }
        }
        let dims = self.dims(&idx);
        let Some(mut v) = self.ket_vector(ket, &dims).map_err(|d| self.diags.push(d)).ok() else { return };
        let n2: f64 = v.iter().map(C64::norm_sqr).sum();
        if (n2 - 1.0).abs() > NORM_TOL {
            self.diags.push(err(ket.span, format!("state `{}` is not normalized (squared norm {n2})", name.name)));
            return;
        }
        if !ok {
            return;
        }
        let n = n2.sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        for &k in &idx {
            self.life[k].in_state = Some(name.name.clone());
        }
        self.states.push((name.name.clone(), self.names(&idx), v));
    }

    fn premeasure(&mut self, system: &Ident, basis: &BasisExpr, into: &[Ident]) {
        let all: Vec<Ident> = std::iter::once(system.clone()).chain(into.iter().cloned()).collect();
        let Some(idx) = self.regs(&all).filter(|idx| self.live(idx, &all)) else {
            self.check_references(basis);
            return;
        };
        let (s, ancillas) = (idx[0], &idx[1..]);
        let d = self.registers[s].dim();
        let mut ok = true;
        if self.life[s].decohered {
            self.diags.push(err(system.span, format!("register `{}` was decohered and cannot be pre-measured again", system.name)));
            ok = false;
        }
        for (&a, id) in ancillas.iter().zip(into) {
            let life = &self.life[a];
            let dim = self.registers[a].dim();
            if dim != d {
                self.diags.push(err(id.span, format!("ancilla `{}` has dimension {dim}, system `{}` has {d}", id.name, system.name)));
                ok = false;
            } else if life.in_state.is_some() || life.touches > 0 {
                self.diags.push(err(id.span, format!("ancilla `{}` is not in its initial state |0>", id.name)));
                ok = false;
            }
        }
        let Some(basis) = self.resolve(basis, &[d]) else { return };
        if basis.is_partial() {
            self.diags.push(err(system.span, "pre-measurement basis must be complete"));
            return;
        }
        if !ok {
            return;
        }
        for &k in &idx {
            self.life[k].touches += 1;
        }
        let touches = ancillas.iter().map(|&a| self.life[a].touches).collect();
        self.records.push(Record { system: s, ancillas: ancillas.to_vec(), touches, decohered: false, undone: false });
        self.steps.push(Step::Premeasure {
            system: system.name.clone(),
            basis,
            ancillas: self.names(ancillas),
        });
    }

    fn decohere(&mut self, regs: &[Ident], basis: Option<&BasisExpr>, strength: Option<&Expr>, span: Span) {
        let Some(idx) = self.regs(regs).filter(|idx| self.live(idx, regs)) else {
            if let Some(b) = basis {
                self.check_references(b);
            }
            return;
        };
        let dims = self.dims(&idx);
        let dp: usize = dims.iter().product();
        let basis = match basis {
            None => Basis::computational(dp),
            Some(b) => {
                let Some(basis) = self.resolve(b, &dims) else { return };
                if basis.is_partial() {
                    self.diags.push(err(b.span, "pointer basis must be complete"));
                    return;
                }
                basis
            }
        };
        let strength = match strength {
            None => 1.0,
            Some(e) => match real(e) {
                Ok(x) if (0.0..=1.0).contains(&x) => x,
                Ok(x) => {
                    self.diags.push(err(e.span, format!("decoherence strength {x} is outside [0, 1]")));
                    return;
                }
                Err(d) => {
                    self.diags.push(d);
                    return;
                }
            },
        };
        if self.total_dim * dp > MAX_DENSITY_DIM {
            self.diags.push(err(
                span,
                format!(
                    "decoherence needs a density matrix of dimension {}; the limit is {MAX_DENSITY_DIM}",
                    self.total_dim * dp
                ),
            ));
            return;
        }
        for &k in &idx {
            self.life[k].decohered = true;
            self.life[k].touches += 1;
        }
        for r in self.records.iter_mut().filter(|r| !r.undone) {
            if idx.iter().any(|k| *k == r.system || r.ancillas.contains(k)) {
                r.decohered = true;
            }
        }
        self.steps.push(Step::Decohere { registers: self.names(&idx), basis, strength });
    }

    fn undo(&mut self, system: &Ident, span: Span) {
        let Some(idx) = self.regs(std::slice::from_ref(system)) else { return };
        let s = idx[0];
        let Some(pos) = self.records.iter().rposition(|r| r.system == s && !r.undone) else {
            self.diags.push(err(system.span, format!("no pre-measurement of `{}` to undo", system.name)));
            return;
        };
        if self.records[pos].decohered {
            self.diags.push(err(span, "irreversible decoherence precedes undo"));
            return;
        }
        let involved: Vec<usize> = std::iter::once(s).chain(self.records[pos].ancillas.iter().copied()).collect();
        let ids: Vec<Ident> = involved
            .iter()
            .map(|&k| Ident { name: self.registers[k].label().to_string(), span: system.span })
            .collect();
        if !self.live(&involved, &ids) {
            return;
        }
        let record = &mut self.records[pos];
        record.undone = true;
        // ancillas untouched since the pre-measurement return to |0>
        for (&a, &t) in record.ancillas.iter().zip(&record.touches) {
            if self.life[a].touches == t && self.life[a].in_state.is_none() {
                self.life[a].touches = 0;
            } else {
                self.life[a].touches += 1;
            }
        }
        self.life[s].touches += 1;
        self.steps.push(Step::Undo { system: system.name.clone() });
    }

    fn measure(&mut self, regs: &[Ident], basis: &BasisExpr, name: &Ident) {
        if self.measurements.iter().any(|m| m.name == name.name) {
            self.diags.push(err(name.span, format!("measurement `{}` is already declared", name.name)));
            return;
        }
        let Some(idx) = self.regs(regs).filter(|idx| self.live(idx, regs)) else {
            self.check_references(basis);
            return;
        };
        let dims = self.dims(&idx);
        let Some(basis) = self.resolve(basis, &dims) else { return };
        for &k in &idx {
            self.life[k].measured_by = Some(name.name.clone());
        }
        self.measurements.push(MeasurementSpec { name: name.name.clone(), targets: self.names(&idx), basis });
    }

    fn gate(&self, gate: &Gate, dims: &[usize]) -> Result<Unitary, Diagnostic> {
        let total: usize = dims.iter().product();
        let single = |u: Unitary| {
            if dims.len() == 1 && total == 2 {
                Ok(u)
            } else {
                Err(err(gate.span, format!("`{gate}` acts on one qubit register")))
            }
        };
        match &gate.kind {
            GateKind::H => single(Unitary::hadamard()),
            GateKind::X => single(Unitary::pauli_x()),
            GateKind::Y => single(Unitary::pauli_y()),
            GateKind::Z => single(Unitary::pauli_z()),
            GateKind::S => single(Unitary::phase(FRAC_PI_2)),
            GateKind::Phase(e) => single(Unitary::phase(real(e)?)),
            GateKind::Cnot => {
                if dims == [2, 2] {
                    Ok(Unitary::cnot())
                } else {
                    Err(err(gate.span, "`cnot` acts on two qubit registers (control, target)"))
                }
            }
            GateKind::Matrix(rows) => {
                if rows.len() != total || rows.iter().any(|r| r.len() != total) {
                    return Err(err(gate.span, format!("gate must be a {total}x{total} matrix for these registers")));
                }
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(eval).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Unitary::from_rows(rows).map_err(|e| match e {
                    Error::NotUnitary(dev) => err(gate.span, format!("gate is not unitary (deviation {dev:.3e})")),
                    other => err(gate.span, other.to_string()),
                })
            }
        }
    }

    fn apply(&mut self, gate: &Gate, on: &[Ident]) {
        let Some(idx) = self.regs(on) else { return };
        if !self.live(&idx, on) {
            return;
        }
        let dims = self.dims(&idx);
        let Some(unitary) = self.gate(gate, &dims).map_err(|d| self.diags.push(d)).ok() else { return };
        for &k in &idx {
            self.life[k].touches += 1;
        }
        self.steps.push(Step::Apply { unitary, targets: self.names(&idx) });
    }

    fn measurement(&mut self, id: &Ident, seen: &mut Vec<usize>) -> Option<usize> {
        let Some(k) = self.measurements.iter().position(|m| m.name == id.name) else {
            self.diags.push(err(id.span, format!("unknown measurement `{}`", id.name)));
            return None;
        };
        if seen.contains(&k) {
            self.diags.push(err(id.span, format!("measurement `{}` is listed twice", id.name)));
            return None;
        }
        seen.push(k);
        Some(k)
    }

    fn assertion(&mut self, stmt: &Stmt, quantity: &Quantity, cmp: Cmp, expected: &Expr, tol: &Expr) {
        let mut seen = Vec::new();
        let q = match quantity {
            Quantity::Prob(items) => {
                let mut out = Vec::new();
                for (id, label) in items {
                    let Some(k) = self.measurement(id, &mut seen) else { continue };
                    match self.measurements[k].basis.index_of(&label.text) {
                        Some(o) => out.push((k, o)),
                        None => {
                            let known = self.measurements[k].basis.labels().join(", ");
                            self.diags.push(err(
                                label.span,
                                format!("measurement `{}` has no outcome `{}` (outcomes: {known})", id.name, label.text),
                            ));
                        }
                    }
                }
                (out.len() == items.len()).then_some(QuantitySpec::Prob(out))
            }
            Quantity::Corr(ids) => {
                let out: Vec<usize> = ids.iter().filter_map(|id| self.measurement(id, &mut seen)).collect();
                (out.len() == ids.len()).then_some(QuantitySpec::Corr(out))
            }
            Quantity::Fidelity(id) => match self.states.iter().position(|s| s.0 == id.name) {
                Some(k) => Some(QuantitySpec::Fidelity(k)),
                None => {
                    self.diags.push(err(id.span, format!("unknown state `{}`", id.name)));
                    None
                }
            },
        };
        let expected = self.report(real(expected));
        let tol = match real(tol) {
            Ok(t) if t >= 0.0 => Some(t),
            Ok(t) => {
                self.diags.push(err(tol.span, format!("tolerance {t} is negative")));
                None
            }
            Err(d) => {
                self.diags.push(d);
                None
            }
        };
        if let (Some(quantity), Some(expected), Some(tol)) = (q, expected, tol) {
            self.assertions.push(AssertionSpec {
                text: stmt.to_string(),
                line: stmt.span.line,
                quantity,
                cmp,
                expected,
                tol,
            });
        }
    }
}
