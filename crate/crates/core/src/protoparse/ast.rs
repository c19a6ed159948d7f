//! Syntax tree of a `.wig` program.
//!
//! Spans compare equal unconditionally (see [`Span`]), so derived equality on
//! these types is structural.

use super::Span;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

impl Program {
    pub fn registers(&self) -> impl Iterator<Item = (&Ident, usize)> {
        self.stmts.iter().filter_map(|s| match &s.kind {
            StmtKind::Register { name, dim } => Some((name, *dim)),
            _ => None,
        })
    }

    pub fn count(&self, pred: impl Fn(&StmtKind) -> bool) -> usize {
        self.stmts.iter().filter(|s| pred(&s.kind)).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Register { name: Ident, dim: usize },
    Basis { name: Ident, expr: BasisExpr },
    State { name: Ident, ket: KetExpr, on: Vec<Ident> },
    Premeasure { system: Ident, basis: BasisExpr, into: Vec<Ident> },
    Decohere { regs: Vec<Ident>, basis: Option<BasisExpr>, strength: Option<Expr> },
    Undo { system: Ident },
    /// Without `as`, the measurement is named after its registers joined by `_`.
    Measure { regs: Vec<Ident>, basis: BasisExpr, name: Option<Ident> },
    Apply { gate: Gate, on: Vec<Ident> },
    Assert { quantity: Quantity, cmp: Cmp, expected: Expr, tol: Expr },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisExpr {
    pub kind: BasisKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisKind {
    Named(Ident),
    Computational,
    Mub(Expr),
    Phase(Expr),
    Planar(Expr),
    Lab { pre: Box<BasisExpr>, wigner: Box<BasisExpr>, copies: Expr },
    Dressed { pre: Box<BasisExpr>, wigner: Box<BasisExpr> },
    Explicit(Vec<(KetExpr, Label)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub text: String,
    pub span: Span,
}

/// `Σ cₖ |digitsₖ⟩`
#[derive(Debug, Clone, PartialEq)]
pub struct KetExpr {
    pub terms: Vec<KetTerm>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KetTerm {
    pub coeff: Expr,
    pub digits: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Cos,
    Sin,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Cos => "cos",
            Func::Sin => "sin",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "cos" => Func::Cos,
            "sin" => Func::Sin,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Imag(f64),
    Pi,
    I,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Self { kind, span }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Cnot,
    Phase(Expr),
    Matrix(Vec<Vec<Expr>>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Prob(Vec<(Ident, Label)>),
    Corr(Vec<Ident>),
    Fidelity(Ident),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Le,
    Ge,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "==",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
        }
    }
}

pub const KEYWORDS: [&str; 9] =
    ["register", "state", "basis", "premeasure", "decohere", "undo", "measure", "apply", "assert"];

/// Words that cannot name a register, basis, state or measurement.
pub const RESERVED: [&str; 25] = [
    "register", "state", "basis", "premeasure", "decohere", "undo", "measure", "apply", "assert", "qubit",
    "qutrit", "dim", "in", "into", "on", "as", "tol", "strength", "prob", "corr", "fidelity", "pi", "i",
    "computational", "lab",
];

pub fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
        || Func::from_name(word).is_some()
        || matches!(word, "mub" | "phase" | "planar" | "dressed")
}
