//! The `.wig` protocol language.
//!
//! A program declares registers, bases and initial states, then lists
//! pre-measurements, decoherence, unitaries and measurements in order, and
//! finishes with assertions on the measured statistics:
//!
//! ```text
//! register g, D, F qubit;
//! basis HT = [|0> as H, |1> as T];
//! state psi = sqrt(1/2)|0> + sqrt(1/2)|1> on g;
//! premeasure g in HT into D, F;
//! measure g, D, F in lab(HT, phase(0), 2) as W;
//! assert prob(W=+) == 1 tol 1e-12;
//! ```
//!
//! [`parse`] checks syntax, [`validate`] checks names, dimensions and register
//! lifecycles, and [`execute`] runs the protocol through the measurement layer.

pub mod ast;
mod exec;
mod lexer;
mod parser;
mod printer;
mod validate;

use serde::Serialize;
use std::fmt;

pub use exec::{execute, AssertionOutcome, ExecutionReport, MeasurementReport};
pub use lexer::{lex, Tok, Token};
pub use parser::parse;
pub use validate::{compile, validate, Protocol};

/// A source region. Spans never take part in equality, so two syntax trees
/// that differ only in layout compare equal.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Span {
    /// Byte offset.
    pub start: usize,
    /// Length in bytes.
    pub len: usize,
    pub line: u32,
    /// 1-based, in characters.
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Span {
    /// From the start of `self` to the end of `other`.
    pub fn to(self, other: Span) -> Span {
        let end = (other.start + other.len).max(self.start + self.len);
        Span { len: end - self.start, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Self {
        Self { severity: Severity::Error, message: message.into(), span }
    }

    pub fn warning(span: Span, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, message: message.into(), span }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}:{}: {}: {}", self.span.line, self.span.col, self.severity, self.message)
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Parse and validate; all diagnostics, errors first in source order.
pub fn check(source: &str) -> Vec<Diagnostic> {
    match parse(source) {
        Ok(program) => validate(&program),
        Err(diags) => diags,
    }
}

/// Parse, validate and execute `source`.
pub fn run_source(source: &str, seed: u64) -> Result<ExecutionReport, Vec<Diagnostic>> {
    let program = parse(source)?;
    execute(&program, seed)
}

#[cfg(test)]
mod tests;
