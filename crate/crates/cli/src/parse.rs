//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' ['-'] integer)*
//! atom   := integer | ident | ident '(' args ')' | '(' expr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Ident(String),
    Call(String, Vec<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// Spans are ignored so that a re-parsed expression compares equal.
impl PartialEq for Expr {
    fn eq(&self, o: &Expr) -> bool {
        self.kind == o.kind
    }
}

impl Eq for Expr {}

impl Expr {
    fn new(kind: ExprKind, start: usize, end: usize) -> Expr {
        Expr { kind, span: Span { start, end } }
    }

    /// Visits every identifier and called function name.
    pub fn any_name(&self, f: &impl Fn(&str) -> bool) -> bool {
        match &self.kind {
            ExprKind::Int(_) => false,
            ExprKind::Ident(s) => f(s),
            ExprKind::Call(s, args) => f(s) || args.iter().any(|a| a.any_name(f)),
            ExprKind::Neg(a) | ExprKind::Pow(a, _) => a.any_name(f),
            ExprKind::Bin(_, a, b) => a.any_name(f) || b.any_name(f),
        }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            ExprKind::Bin(..) => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Ident(s) => write!(f, "{s}"),
            ExprKind::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            ExprKind::Neg(a) => {
                write!(f, "-")?;
                child(f, a, 3)
            }
            ExprKind::Bin(op, a, b) => {
                let (sym, p) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                child(f, a, p)?;
                write!(f, " {sym} ")?;
                child(f, b, p + 1)
            }
            ExprKind::Pow(a, e) => {
                child(f, a, 4)?;
                write!(f, "^{e}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn syntax(src: &str, offset: usize, message: impl Into<String>) -> CliError {
    let (line, column) = line_col(src, offset);
    CliError::Syntax { line, column, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<Token>, CliError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + d.len_utf8();
                it.next();
            }
            out.push(Token { tok: Tok::Int(src[i..end].parse().unwrap()), start: i, end });
        } else if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                end = j + d.len_utf8();
                it.next();
            }
            out.push(Token { tok: Tok::Ident(src[i..end].to_string()), start: i, end });
        } else if "+-*/^(),".contains(c) {
            it.next();
            out.push(Token { tok: Tok::Sym(c), start: i, end: i + 1 });
        } else {
            return Err(syntax(src, i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    /// Error at the current token, or at the last token when input has run out.
    fn error_here(&self, message: &str) -> CliError {
        match self.toks.get(self.pos) {
            Some(t) => syntax(self.src, t.start, format!("{message}, found '{}'", &self.src[t.start..t.end])),
            None => {
                let at = self.toks.last().map_or(0, |t| t.start);
                syntax(self.src, at, format!("{message}, found end of input"))
            }
        }
    }

    fn last_end(&self) -> usize {
        self.toks[self.pos - 1].end
    }

    fn expect(&mut self, c: char) -> Result<(), CliError> {
        if self.at_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.term()?;
        while self.at_sym('+') || self.at_sym('-') {
            let op = if self.at_sym('+') { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            let (s, e) = (lhs.span.start, rhs.span.end);
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), s, e);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.factor()?;
        while self.at_sym('*') || self.at_sym('/') {
            let op = if self.at_sym('*') { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.factor()?;
            let (s, e) = (lhs.span.start, rhs.span.end);
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), s, e);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, CliError> {
        if self.at_sym('-') {
            let start = self.toks[self.pos].start;
            self.pos += 1;
            let inner = self.factor()?;
            let end = inner.span.end;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), start, end));
        }
        let mut base = self.atom()?;
        while self.at_sym('^') {
            self.pos += 1;
            let neg = self.at_sym('-');
            if neg {
                self.pos += 1;
            }
            let e = match self.peek() {
                Some(Tok::Int(n)) => i64::try_from(n).map_err(|_| self.error_here("exponent too large"))?,
                _ => return Err(self.error_here("expected an integer exponent")),
            };
            self.pos += 1;
            let (s, end) = (base.span.start, self.last_end());
            base = Expr::new(ExprKind::Pow(Box::new(base), if neg { -e } else { e }), s, end);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        let Some(t) = self.toks.get(self.pos) else {
            return Err(self.error_here("expected an expression"));
        };
        let start = t.start;
        match t.tok.clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::new(ExprKind::Int(n), start, self.last_end()))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if !self.at_sym('(') {
                    return Ok(Expr::new(ExprKind::Ident(name), start, self.last_end()));
                }
                self.pos += 1;
                let mut args = Vec::new();
                if !self.at_sym(')') {
                    args.push(self.expr()?);
                    while self.at_sym(',') {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                }
                self.expect(')')?;
                Ok(Expr::new(ExprKind::Call(name, args), start, self.last_end()))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(Expr::new(inner.kind, start, self.last_end()))
            }
            Tok::Sym(_) => Err(self.error_here("expected an expression")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, CliError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.error_here("expected an operator"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_at(src: &str) -> (usize, usize) {
        match parse(src) {
            Err(CliError::Syntax { line, column, .. }) => (line, column),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn application_nodes() {
        let e = parse("li_mw(2,3, 1/2 + t)").unwrap();
        let ExprKind::Call(name, args) = &e.kind else { panic!() };
        assert_eq!(name, "li_mw");
        assert_eq!(args.len(), 3);
        let e = parse("rho(1-z, z, 1 - (1/2 + t)/z)").unwrap();
        assert!(matches!(&e.kind, ExprKind::Call(n, a) if n == "rho" && a.len() == 3));
        assert_eq!(e.span, Span { start: 0, end: 28 });
    }

    #[test]
    fn precedence() {
        let e = parse("1 + 2*t^2").unwrap();
        let ExprKind::Bin(BinOp::Add, _, rhs) = &e.kind else { panic!() };
        let ExprKind::Bin(BinOp::Mul, _, p) = &rhs.kind else { panic!() };
        assert!(matches!(p.kind, ExprKind::Pow(_, 2)));
        assert!(matches!(parse("-x^2").unwrap().kind, ExprKind::Neg(_)));
        assert!(matches!(parse("z^-1").unwrap().kind, ExprKind::Pow(_, -1)));
    }

    #[test]
    fn errors_carry_location() {
        assert_eq!(err_at("1/("), (1, 3));
        assert_eq!(err_at("1 + * 2"), (1, 5));
        assert_eq!(err_at("f(1,2"), (1, 5));
        assert_eq!(err_at("1\n+ $"), (2, 3));
        assert_eq!(err_at("2 3"), (1, 3));
    }

    #[test]
    fn round_trip() {
        for s in ["li_mw(2,3, 1/2 + t)", "rho(1-z, z, 1 - (1/2 + t)/z)", "-(θ^2 - 2)*x/3", "((a))^-2", "1 - -t", "a - (b - c)", "a/(b*c)", "(-a)^2", "(a + b)*c"] {
            let e = parse(s).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{s} printed as {e}");
            assert_eq!(again.to_string(), e.to_string());
        }
    }
}
