//! Recursive descent with one token of lookahead. A syntax error abandons the
//! current statement and resumes after the next `;`.

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, Span};

type PResult<T> = Result<T, Diagnostic>;

/// Parses a whole program. Every lexical and syntax error is reported; the
/// tree is returned only when there are none.
pub fn parse(src: &str) -> Result<Program, Vec<Diagnostic>> {
    let (tokens, mut diags) = lex(src);
    let mut p = Parser { src, tokens, pos: 0, diags: Vec::new() };
    let program = p.program();
    diags.append(&mut p.diags);
    diags.sort_by_key(|d| d.span.start);
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(program)
    }
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn unexpected(&self, what: &str) -> Diagnostic {
        Diagnostic::error(self.span(), format!("expected {what}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if self.peek() == &tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{}`", tok.symbol())))
        }
    }

    fn expect_word(&mut self, word: &str) -> PResult<Span> {
        if self.at_word(word) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{word}`")))
        }
    }

    fn program(&mut self) -> Program {
        let mut stmts = Vec::new();
        while self.peek() != &Tok::Eof {
            let start = self.pos;
            match self.statement() {
                Ok(mut s) => stmts.append(&mut s),
                Err(d) => {
                    self.diags.push(d);
                    self.recover(start);
                }
            }
        }
        Program { stmts }
    }

    /// Skips past the next `;`, always consuming at least one token.
    fn recover(&mut self, start: usize) {
        if self.pos == start {
            self.bump();
        }
        while !matches!(self.peek(), Tok::Semi | Tok::Eof) {
            self.bump();
        }
        self.eat(&Tok::Semi);
    }

    fn statement(&mut self) -> PResult<Vec<Stmt>> {
        let start = self.span();
        let word = match self.peek() {
            Tok::Ident(w) if KEYWORDS.contains(&w.as_str()) => w.clone(),
            _ => return Err(self.unexpected("a statement (one of register, state, basis, premeasure, decohere, undo, measure, apply, assert)")),
        };
        self.bump();
        let stmt = |kind: StmtKind, p: &Self| Stmt { kind, span: start.to(p.prev_span()) };
        let out = match word.as_str() {
            "register" => {
                let names = self.name_list()?;
                let dim = self.register_kind()?;
                self.expect(Tok::Semi)?;
                return Ok(names
                    .into_iter()
                    .map(|name| stmt(StmtKind::Register { name, dim }, self))
                    .collect());
            }
            "basis" => {
                let name = self.name()?;
                self.expect(Tok::Assign)?;
                let expr = self.basis_expr()?;
                StmtKind::Basis { name, expr }
            }
            "state" => {
                let name = self.name()?;
                self.expect(Tok::Assign)?;
                let ket = self.ket_expr()?;
                self.expect_word("on")?;
                StmtKind::State { name, ket, on: self.ident_list()? }
            }
            "premeasure" => {
                let system = self.ident()?;
                self.expect_word("in")?;
                let basis = self.basis_ref()?;
                self.expect_word("into")?;
                StmtKind::Premeasure { system, basis, into: self.ident_list()? }
            }
            "decohere" => {
                let regs = self.ident_list()?;
                let basis = if self.at_word("in") {
                    self.bump();
                    Some(self.basis_ref()?)
                } else {
                    None
                };
                let strength = if self.at_word("strength") {
                    self.bump();
                    Some(self.expr()?)
                } else {
                    None
                };
                StmtKind::Decohere { regs, basis, strength }
            }
            "undo" => StmtKind::Undo { system: self.ident()? },
            "measure" => {
                let regs = self.ident_list()?;
                self.expect_word("in")?;
                let basis = self.basis_ref()?;
                let name = if self.at_word("as") {
                    self.bump();
                    Some(self.name()?)
                } else {
                    None
                };
                StmtKind::Measure { regs, basis, name }
            }
            "apply" => {
                let gate = self.gate()?;
                self.expect_word("on")?;
                StmtKind::Apply { gate, on: self.ident_list()? }
            }
            "assert" => {
                let quantity = self.quantity()?;
                let cmp = match self.peek() {
                    Tok::EqEq => Cmp::Eq,
                    Tok::Le => Cmp::Le,
                    Tok::Ge => Cmp::Ge,
                    _ => return Err(self.unexpected("a comparison (`==`, `<=` or `>=`)")),
                };
                self.bump();
                let expected = self.expr()?;
                if !self.at_word("tol") {
                    return Err(Diagnostic::error(
                        self.span(),
                        format!("assertions need an explicit tolerance `tol <value>`, found {}", self.peek().describe()),
                    ));
                }
                self.bump();
                StmtKind::Assert { quantity, cmp, expected, tol: self.expr()? }
            }
            _ => unreachable!("keyword list"),
        };
        self.expect(Tok::Semi)?;
        Ok(vec![stmt(out, self)])
    }

    fn register_kind(&mut self) -> PResult<usize> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(w) if w == "qubit" => {
                self.bump();
                Ok(2)
            }
            Tok::Ident(w) if w == "qutrit" => {
                self.bump();
                Ok(3)
            }
            Tok::Ident(w) if w == "dim" => {
                self.bump();
                let span = self.span();
                match self.peek().clone() {
                    Tok::Number(x) if x.fract() == 0.0 && (2.0..=1024.0).contains(&x) => {
                        self.bump();
                        Ok(x as usize)
                    }
                    Tok::Number(_) => Err(Diagnostic::error(span, "register dimension must be an integer in 2..=1024")),
                    _ => Err(self.unexpected("a dimension")),
                }
            }
            _ => Err(Diagnostic::error(span, format!("expected `qubit`, `qutrit` or `dim N`, found {}", self.peek().describe()))),
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => Ok(Ident { name, span: self.bump().span }),
            _ => Err(self.unexpected("a name")),
        }
    }

    /// An identifier being declared; reserved words are refused.
    fn name(&mut self) -> PResult<Ident> {
        let id = self.ident()?;
        if is_reserved(&id.name) {
            return Err(Diagnostic::error(id.span, format!("`{}` is a reserved word", id.name)));
        }
        Ok(id)
    }

    fn name_list(&mut self) -> PResult<Vec<Ident>> {
        let mut out = vec![self.name()?];
        while self.eat(&Tok::Comma) {
            out.push(self.name()?);
        }
        Ok(out)
    }

    fn ident_list(&mut self) -> PResult<Vec<Ident>> {
        let mut out = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn basis_ref(&mut self) -> PResult<BasisExpr> {
        if self.at_word("basis") {
            self.bump();
        }
        self.basis_expr()
    }

    fn basis_expr(&mut self) -> PResult<BasisExpr> {
        let start = self.span();
        let kind = match self.peek().clone() {
            Tok::LBracket => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    let ket = self.ket_expr()?;
                    self.expect_word("as")?;
                    items.push((ket, self.label()?));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RBracket)?;
                BasisKind::Explicit(items)
            }
            Tok::Ident(w) => {
                let id = Ident { name: w.clone(), span: self.bump().span };
                match w.as_str() {
                    "computational" => BasisKind::Computational,
                    "mub" | "phase" | "planar" => {
                        self.expect(Tok::LParen)?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen)?;
                        match w.as_str() {
                            "mub" => BasisKind::Mub(e),
                            "phase" => BasisKind::Phase(e),
                            _ => BasisKind::Planar(e),
                        }
                    }
                    "lab" | "dressed" => {
                        self.expect(Tok::LParen)?;
                        let pre = Box::new(self.basis_expr()?);
                        self.expect(Tok::Comma)?;
                        let wigner = Box::new(self.basis_expr()?);
                        let kind = if w == "lab" {
                            self.expect(Tok::Comma)?;
                            BasisKind::Lab { pre, wigner, copies: self.expr()? }
                        } else {
                            BasisKind::Dressed { pre, wigner }
                        };
                        self.expect(Tok::RParen)?;
                        kind
                    }
                    _ if is_reserved(&w) => {
                        return Err(Diagnostic::error(id.span, format!("expected a basis, found `{w}`")))
                    }
                    _ => BasisKind::Named(id),
                }
            }
            _ => return Err(self.unexpected("a basis")),
        };
        Ok(BasisExpr { kind, span: start.to(self.prev_span()) })
    }

    fn label(&mut self) -> PResult<Label> {
        let start = self.span();
        let text = match self.peek().clone() {
            Tok::Plus | Tok::Minus => {
                let sign = self.bump().tok.symbol();
                if matches!(self.peek(), Tok::Number(_)) {
                    let t = self.bump();
                    format!("{sign}{}", &self.src[t.span.start..t.span.start + t.span.len])
                } else {
                    sign.to_string()
                }
            }
            Tok::Number(_) => {
                let t = self.bump();
                self.src[t.span.start..t.span.start + t.span.len].to_string()
            }
            Tok::Ident(w) => {
                self.bump();
                w
            }
            _ => return Err(self.unexpected("an outcome label")),
        };
        Ok(Label { text, span: start.to(self.prev_span()) })
    }

    fn ket_expr(&mut self) -> PResult<KetExpr> {
        let start = self.span();
        let mut neg = self.eat(&Tok::Minus);
        if !neg {
            self.eat(&Tok::Plus);
        }
        let mut terms = Vec::new();
        loop {
            terms.push(self.ket_term(neg)?);
            if self.eat(&Tok::Plus) {
                neg = false;
            } else if self.eat(&Tok::Minus) {
                neg = true;
            } else {
                break;
            }
        }
        Ok(KetExpr { terms, span: start.to(self.prev_span()) })
    }

    fn ket_term(&mut self, neg: bool) -> PResult<KetTerm> {
        let start = self.span();
        let mut coeff = if matches!(self.peek(), Tok::Ket(_)) {
            Expr::new(ExprKind::Number(1.0), start)
        } else {
            self.coefficient()?
        };
        let digits = match self.peek().clone() {
            Tok::Ket(d) => {
                self.bump();
                d
            }
            _ => return Err(self.unexpected("a ket such as `|0>`")),
        };
        if neg {
            let span = coeff.span;
            coeff = Expr::new(ExprKind::Neg(Box::new(coeff)), span);
        }
        Ok(KetTerm { coeff, digits, span: start.to(self.prev_span()) })
    }

    /// A product of factors in front of a ket; `2*|0>` is accepted.
    fn coefficient(&mut self) -> PResult<Expr> {
        let mut lhs = self.primary()?;
        loop {
            let op = match self.peek() {
                Tok::Star if matches!(self.peek_at(1), Tok::Ket(_)) => {
                    self.bump();
                    break;
                }
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.span();
        if self.eat(&Tok::Minus) {
            let inner = self.unary()?;
            let span = start.to(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Number(x) => {
                self.bump();
                Ok(Expr::new(ExprKind::Number(x), start))
            }
            Tok::Imag(x) => {
                self.bump();
                Ok(Expr::new(ExprKind::Imag(x), start))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(w) => {
                self.bump();
                if w == "pi" {
                    return Ok(Expr::new(ExprKind::Pi, start));
                }
                if w == "i" {
                    return Ok(Expr::new(ExprKind::I, start));
                }
                let Some(f) = Func::from_name(&w) else {
                    return Err(Diagnostic::error(start, format!("unknown constant or function `{w}`")));
                };
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::new(ExprKind::Call(f, Box::new(arg)), start.to(self.prev_span())))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn gate(&mut self) -> PResult<Gate> {
        let start = self.span();
        let kind = match self.peek().clone() {
            Tok::LBracket => {
                self.bump();
                let mut rows = Vec::new();
                loop {
                    self.expect(Tok::LBracket)?;
                    let mut row = vec![self.expr()?];
                    while self.eat(&Tok::Comma) {
                        row.push(self.expr()?);
                    }
                    self.expect(Tok::RBracket)?;
                    rows.push(row);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RBracket)?;
                GateKind::Matrix(rows)
            }
            Tok::Ident(w) => {
                self.bump();
                match w.as_str() {
                    "H" => GateKind::H,
                    "X" => GateKind::X,
                    "Y" => GateKind::Y,
                    "Z" => GateKind::Z,
                    "S" => GateKind::S,
                    "cnot" | "CNOT" => GateKind::Cnot,
                    "phase" => {
                        self.expect(Tok::LParen)?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen)?;
                        GateKind::Phase(e)
                    }
                    _ => {
                        return Err(Diagnostic::error(
                            start,
                            format!("unknown gate `{w}`; expected H, X, Y, Z, S, cnot, phase(..) or a matrix"),
                        ))
                    }
                }
            }
            _ => return Err(self.unexpected("a gate")),
        };
        Ok(Gate { kind, span: start.to(self.prev_span()) })
    }

    fn quantity(&mut self) -> PResult<Quantity> {
        let word = match self.peek() {
            Tok::Ident(w) if matches!(w.as_str(), "prob" | "corr" | "fidelity") => w.clone(),
            _ => return Err(self.unexpected("`prob(..)`, `corr(..)` or `fidelity(..)`")),
        };
        self.bump();
        self.expect(Tok::LParen)?;
        let q = match word.as_str() {
            "prob" => {
                let mut items = Vec::new();
                loop {
                    let name = self.ident()?;
                    self.expect(Tok::Assign)?;
                    items.push((name, self.label()?));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                Quantity::Prob(items)
            }
            "corr" => Quantity::Corr(self.ident_list()?),
            _ => Quantity::Fidelity(self.ident()?),
        };
        self.expect(Tok::RParen)?;
        Ok(q)
    }
}
