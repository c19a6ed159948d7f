use super::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    /// A number immediately followed by `i`, as in `2.5i`.
    Imag(f64),
    /// Digits between `|` and `>`.
    Ket(String),
    Semi,
    Comma,
    Assign,
    EqEq,
    Le,
    Ge,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(_) | Tok::Imag(_) => "number".into(),
            Tok::Ket(k) => format!("`|{k}>`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Assign => "=",
            Tok::EqEq => "==",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: (usize, u32, u32)) -> Span {
        Span { start: start.0, len: self.pos - start.0, line: start.1, col: start.2 }
    }
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `src` into tokens. Unknown characters and malformed literals are
/// reported and skipped, so the token stream is always terminated by `Eof`.
pub fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor { src, pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    let mut diags = Vec::new();
    while let Some(c) = cur.peek() {
        let start = (cur.pos, cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' || (c == '/' && cur.peek2() == Some('/')) {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        let tok = if ident_start(c) {
            while cur.peek().is_some_and(ident_continue) {
                cur.bump();
            }
            Tok::Ident(src[start.0..cur.pos].to_string())
        } else if c.is_ascii_digit() || (c == '.' && cur.peek2().is_some_and(|d| d.is_ascii_digit())) {
            match number(&mut cur, start) {
                Ok(t) => t,
                Err(d) => {
                    diags.push(d);
                    continue;
                }
            }
        } else if c == '|' {
            cur.bump();
            let digits_start = cur.pos;
            while cur.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                cur.bump();
            }
            let digits = src[digits_start..cur.pos].to_string();
            if cur.peek() == Some('>') && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                cur.bump();
                Tok::Ket(digits)
            } else {
                if cur.peek() == Some('>') {
                    cur.bump();
                }
                diags.push(Diagnostic::error(cur.span_from(start), "malformed ket; expected digits as in `|01>`"));
                continue;
            }
        } else {
            cur.bump();
            let two = |cur: &mut Cursor, next: char, yes: Tok, no: Option<Tok>| {
                if cur.peek() == Some(next) {
                    cur.bump();
                    Some(yes)
                } else {
                    no
                }
            };
            let t = match c {
                ';' => Some(Tok::Semi),
                ',' => Some(Tok::Comma),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '/' => Some(Tok::Slash),
                '=' => two(&mut cur, '=', Tok::EqEq, Some(Tok::Assign)),
                '<' => two(&mut cur, '=', Tok::Le, None),
                '>' => two(&mut cur, '=', Tok::Ge, None),
                _ => None,
            };
            match t {
                Some(t) => t,
                None => {
                    diags.push(Diagnostic::error(cur.span_from(start), format!("unexpected character `{c}`")));
                    continue;
                }
            }
        };
        out.push(Token { tok, span: cur.span_from(start) });
    }
    out.push(Token { tok: Tok::Eof, span: Span { start: cur.pos, len: 0, line: cur.line, col: cur.col } });
    (out, diags)
}

fn number(cur: &mut Cursor, start: (usize, u32, u32)) -> Result<Tok, Diagnostic> {
    let digits = |cur: &mut Cursor| {
        let mut n = 0;
        while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            cur.bump();
            n += 1;
        }
        n
    };
    digits(cur);
    if cur.peek() == Some('.') {
        cur.bump();
        digits(cur);
    }
    let mut bad = false;
    if matches!(cur.peek(), Some('e' | 'E')) {
        cur.bump();
        if matches!(cur.peek(), Some('+' | '-')) {
            cur.bump();
        }
        bad = digits(cur) == 0;
    }
    let text = &cur.src[start.0..cur.pos];
    // 1.2.3 or 3x: swallow the rest of the literal for the message
    if cur.peek().is_some_and(|c| c == '.' || (ident_continue(c) && c != 'i')) || (cur.peek() == Some('i') && cur.peek2().is_some_and(ident_continue)) {
        while cur.peek().is_some_and(|c| c == '.' || ident_continue(c)) {
            cur.bump();
        }
        bad = true;
    }
    let value: f64 = match text.parse() {
        Ok(v) if !bad => v,
        _ => {
            let s = cur.src[start.0..cur.pos].to_string();
            return Err(Diagnostic::error(cur.span_from(start), format!("malformed number `{s}`")));
        }
    };
    if !value.is_finite() {
        return Err(Diagnostic::error(cur.span_from(start), format!("number `{text}` overflows")));
    }
    if cur.peek() == Some('i') {
        cur.bump();
        return Ok(Tok::Imag(value));
    }
    Ok(Tok::Number(value))
}
