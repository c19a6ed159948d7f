//! Canonical source form. Reparsing the output yields an equal tree.

use std::fmt::{self, Display, Formatter};

use super::ast::*;

fn list<T>(f: &mut Formatter<'_>, items: &[T], each: impl Fn(&mut Formatter<'_>, &T) -> fmt::Result) -> fmt::Result {
    for (k, item) in items.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        each(f, item)?;
    }
    Ok(())
}

fn names(f: &mut Formatter<'_>, ids: &[Ident]) -> fmt::Result {
    list(f, ids, |f, id| f.write_str(&id.name))
}

impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Display for Stmt {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StmtKind::Register { name, dim } => match dim {
                2 => write!(f, "register {} qubit", name.name),
                3 => write!(f, "register {} qutrit", name.name),
                d => write!(f, "register {} dim {d}", name.name),
            }?,
            StmtKind::Basis { name, expr } => write!(f, "basis {} = {expr}", name.name)?,
            StmtKind::State { name, ket, on } => {
                write!(f, "state {} = {ket} on ", name.name)?;
                names(f, on)?;
            }
            StmtKind::Premeasure { system, basis, into } => {
                write!(f, "premeasure {} in {basis} into ", system.name)?;
                names(f, into)?;
            }
            StmtKind::Decohere { regs, basis, strength } => {
                f.write_str("decohere ")?;
                names(f, regs)?;
                if let Some(b) = basis {
                    write!(f, " in {b}")?;
                }
                if let Some(s) = strength {
                    write!(f, " strength {s}")?;
                }
            }
            StmtKind::Undo { system } => write!(f, "undo {}", system.name)?,
            StmtKind::Measure { regs, basis, name } => {
                f.write_str("measure ")?;
                names(f, regs)?;
                write!(f, " in {basis}")?;
                if let Some(name) = name {
                    write!(f, " as {}", name.name)?;
                }
            }
            StmtKind::Apply { gate, on } => {
                write!(f, "apply {gate} on ")?;
                names(f, on)?;
            }
            StmtKind::Assert { quantity, cmp, expected, tol } => {
                write!(f, "assert {quantity} {} {expected} tol {tol}", cmp.symbol())?;
            }
        }
        f.write_str(";")
    }
}

impl Display for Quantity {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Prob(items) => {
                f.write_str("prob(")?;
                list(f, items, |f, (n, l)| write!(f, "{}={}", n.name, l.text))?;
            }
            Quantity::Corr(ids) => {
                f.write_str("corr(")?;
                names(f, ids)?;
            }
            Quantity::Fidelity(id) => write!(f, "fidelity({}", id.name)?,
        }
        f.write_str(")")
    }
}

impl Display for BasisExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BasisKind::Named(id) => f.write_str(&id.name),
            BasisKind::Computational => f.write_str("computational"),
            BasisKind::Mub(e) => write!(f, "mub({e})"),
            BasisKind::Phase(e) => write!(f, "phase({e})"),
            BasisKind::Planar(e) => write!(f, "planar({e})"),
            BasisKind::Lab { pre, wigner, copies } => write!(f, "lab({pre}, {wigner}, {copies})"),
            BasisKind::Dressed { pre, wigner } => write!(f, "dressed({pre}, {wigner})"),
            BasisKind::Explicit(items) => {
                f.write_str("[")?;
                list(f, items, |f, (k, l)| write!(f, "{k} as {}", l.text))?;
                f.write_str("]")
            }
        }
    }
}

impl Display for KetExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if t.coeff.kind != ExprKind::Number(1.0) {
                write!(f, "{}", t.coeff)?;
            }
            write!(f, "|{}>", t.digits)?;
        }
        Ok(())
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(x) => write!(f, "{x:?}"),
            ExprKind::Imag(x) => write!(f, "{x:?}i"),
            ExprKind::Pi => f.write_str("pi"),
            ExprKind::I => f.write_str("i"),
            ExprKind::Neg(e) => write!(f, "(-{e})"),
            ExprKind::Binary(op, a, b) => {
                let op = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {op} {b})")
            }
            ExprKind::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

impl Display for Gate {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GateKind::H => f.write_str("H"),
            GateKind::X => f.write_str("X"),
            GateKind::Y => f.write_str("Y"),
            GateKind::Z => f.write_str("Z"),
            GateKind::S => f.write_str("S"),
            GateKind::Cnot => f.write_str("cnot"),
            GateKind::Phase(e) => write!(f, "phase({e})"),
            GateKind::Matrix(rows) => {
                f.write_str("[")?;
                list(f, rows, |f, row| {
                    f.write_str("[")?;
                    list(f, row, |f, e| write!(f, "{e}"))?;
                    f.write_str("]")
                })?;
                f.write_str("]")
            }
        }
    }
}
