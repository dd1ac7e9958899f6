//! A small arithmetic expression language for nonlinearities and sources.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' exponent)?
//! exponent:= '-' exponent | power
//! primary := number | variable | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so
//! `-2^2 = -4` and `2^3^2 = 512`. Variables are `t`, `s`, `u` and `x`;
//! each use site restricts which of them may appear. Functions are `exp`,
//! `sin`, `cos`, `abs` and `sqrt`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::func::{Func1, Func2};

pub const MAX_DEPTH: usize = 64;
pub const MAX_SOURCE_LEN: usize = 64 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    S,
    U,
    X,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::T, Var::S, Var::U, Var::X];

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::S => "s",
            Var::U => "u",
            Var::X => "x",
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Exp => x.exp(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Abs => x.abs(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Call(Func, Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
}

impl Node {
    fn eval(&self, env: &[f64; 4]) -> f64 {
        match self {
            Node::Num(v) => *v,
            Node::Var(v) => env[v.index()],
            Node::Neg(a) => -a.eval(env),
            Node::Call(f, a) => f.apply(a.eval(env)),
            Node::Bin(op, a, b) => {
                let (x, y) = (a.eval(env), b.eval(env));
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                    BinOp::Pow => x.powf(y),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
    DepthExceeded,
    TooLong,
}

/// A parse failure with its 1-based line and column (in characters).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => f.write_str(m),
            ParseErrorKind::UnknownIdentifier(name) => write!(f, "unknown identifier `{name}`"),
            ParseErrorKind::DepthExceeded => write!(f, "expression nested deeper than {MAX_DEPTH}"),
            ParseErrorKind::TooLong => write!(f, "expression longer than {MAX_SOURCE_LEN} bytes"),
        }
    }
}

/// A parsed expression together with its source text.
#[derive(Debug, Clone)]
pub struct ExprFn {
    source: String,
    root: Arc<Node>,
}

impl PartialEq for ExprFn {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl fmt::Display for ExprFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Values for the variables of an expression; unbound ones read as NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bindings([f64; 4]);

impl Default for Bindings {
    fn default() -> Self {
        Bindings([f64::NAN; 4])
    }
}

impl Bindings {
    pub fn with(mut self, var: Var, value: f64) -> Self {
        self.0[var.index()] = value;
        self
    }
}

/// Parses with every variable allowed.
pub fn parse_expr(src: &str) -> std::result::Result<ExprFn, ParseError> {
    parse_in(src, &Var::ALL)
}

/// Parses, rejecting variables outside `allowed`.
pub fn parse_in(src: &str, allowed: &[Var]) -> std::result::Result<ExprFn, ParseError> {
    let mut p = Parser { src, pos: 0, depth: 0, allowed };
    if src.len() > MAX_SOURCE_LEN {
        return Err(p.error_at(0, ParseErrorKind::TooLong));
    }
    let root = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.peek_char().unwrap_or(' '))));
    }
    Ok(ExprFn { source: src.to_string(), root: Arc::new(root.0) })
}

impl ExprFn {
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Raw evaluation; may return NaN or infinities.
    pub fn value(&self, b: &Bindings) -> f64 {
        self.root.eval(&b.0)
    }

    /// Evaluation that reports non-finite results.
    pub fn eval(&self, b: &Bindings) -> Result<f64> {
        let v = self.value(b);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!("`{}` evaluates to {v} at {b:?}", self.source)))
        }
    }

    /// Function of one variable.
    pub fn func1(&self, var: Var) -> Func1 {
        let root = Arc::clone(&self.root);
        Arc::new(move |a| root.eval(&Bindings::default().with(var, a).0))
    }

    /// Function of two variables, in the given order.
    pub fn func2(&self, first: Var, second: Var) -> Func2 {
        let root = Arc::clone(&self.root);
        Arc::new(move |a, b| root.eval(&Bindings::default().with(first, a).with(second, b).0))
    }
}

impl Serialize for ExprFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for ExprFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let src = String::deserialize(d)?;
        parse_expr(&src).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
    allowed: &'a [Var],
}

/// A node paired with its tree depth.
type Parsed = (Node, usize);
type PResult<T> = std::result::Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = before[line_start..].chars().count() + 1;
        ParseError { line, column, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax(msg.into()))
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek_char() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error_at(self.pos, ParseErrorKind::DepthExceeded));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn node(&self, node: Node, depth: usize) -> PResult<Parsed> {
        if depth > MAX_DEPTH {
            return Err(self.error_at(self.pos, ParseErrorKind::DepthExceeded));
        }
        Ok((node, depth))
    }

    fn bin(&self, op: BinOp, a: Parsed, b: Parsed) -> PResult<Parsed> {
        let depth = 1 + a.1.max(b.1);
        self.node(Node::Bin(op, Box::new(a.0), Box::new(b.0)), depth)
    }

    fn expr(&mut self) -> PResult<Parsed> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = self.bin(op, lhs, rhs)?;
        }
    }

    fn term(&mut self) -> PResult<Parsed> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = self.bin(op, lhs, rhs)?;
        }
    }

    fn unary(&mut self) -> PResult<Parsed> {
        self.enter()?;
        let out = if self.eat('-') {
            let (n, d) = self.unary()?;
            self.node(Node::Neg(Box::new(n)), d + 1)
        } else {
            self.power()
        };
        self.leave();
        out
    }

    fn power(&mut self) -> PResult<Parsed> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = self.exponent()?;
        self.bin(BinOp::Pow, base, exp)
    }

    fn exponent(&mut self) -> PResult<Parsed> {
        self.enter()?;
        let out = if self.eat('-') {
            let (n, d) = self.exponent()?;
            self.node(Node::Neg(Box::new(n)), d + 1)
        } else {
            self.power()
        };
        self.leave();
        out
    }

    fn primary(&mut self) -> PResult<Parsed> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_char() {
            None => Err(self.syntax("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                self.enter()?;
                let inner = self.expr()?;
                self.leave();
                if !self.eat(')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(start),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                while let Some(c) = self.peek_char() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                if let Some(f) = Func::from_name(name) {
                    if !self.eat('(') {
                        return Err(self.syntax(format!("expected `(` after `{name}`")));
                    }
                    self.enter()?;
                    let (arg, d) = self.expr()?;
                    self.leave();
                    if !self.eat(')') {
                        return Err(self.syntax("expected `)`"));
                    }
                    return self.node(Node::Call(f, Box::new(arg)), d + 1);
                }
                match Var::from_name(name) {
                    Some(v) if self.allowed.contains(&v) => Ok((Node::Var(v), 1)),
                    _ => Err(self.error_at(start, ParseErrorKind::UnknownIdentifier(name.to_string()))),
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
        }
    }

    fn number(&mut self, start: usize) -> PResult<Parsed> {
        let bytes = self.src.as_bytes();
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - s
        };
        let mut p = start;
        let mut count = digits(&mut p);
        if p < bytes.len() && bytes[p] == b'.' {
            p += 1;
            count += digits(&mut p);
        }
        if count == 0 {
            self.pos = start;
            return Err(self.syntax("malformed number"));
        }
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) > 0 {
                p = q;
            }
        }
        let text = &self.src[start..p];
        let value: f64 = text.parse().map_err(|_| self.syntax(format!("malformed number `{text}`")))?;
        self.pos = p;
        if !value.is_finite() {
            return Err(self.error_at(start, ParseErrorKind::Syntax(format!("number `{text}` overflows"))));
        }
        Ok((Node::Num(value), 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn at(src: &str, var: Var, v: f64) -> f64 {
        parse_expr(src).unwrap().value(&Bindings::default().with(var, v))
    }

    #[test]
    fn examples() {
        assert_eq!(at("1 + 1/(1+u^2)", Var::U, 0.0), 2.0);
        assert_eq!(at("exp(-t)*sin(t)", Var::T, 0.0), 0.0);
        assert_eq!(at("2^3^2", Var::T, 0.0), 512.0);
    }

    #[test]
    fn precedence() {
        assert_eq!(at("-2^2", Var::T, 0.0), -4.0);
        assert_eq!(at("2^-1", Var::T, 0.0), 0.5);
        assert_eq!(at("1 - 2 - 3", Var::T, 0.0), -4.0);
        assert_eq!(at("8 / 4 / 2", Var::T, 0.0), 1.0);
        assert_eq!(at("2 * 3 + 4 * 5", Var::T, 0.0), 26.0);
        assert_eq!(at("--3", Var::T, 0.0), 3.0);
        assert_eq!(at("(1+2)^2", Var::T, 0.0), 9.0);
        assert_eq!(at("1.5e1 + .5 + 2.", Var::T, 0.0), 17.5);
        assert_eq!(at("abs(-3) + sqrt(16) + cos(0)", Var::T, 0.0), 8.0);
        assert!(parse_expr("2e").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_in("1 +\n  2 * q", &[Var::U]).unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("q".into()));

        let e = parse_in("u + t", &[Var::U]).unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));

        let e = parse_expr("(1 + 2").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.column, 7);

        assert!(parse_expr("").is_err());
        assert!(parse_expr("1 2").is_err());
        assert!(parse_expr("sin 2").is_err());
        assert!(parse_expr("1e999").is_err());
        assert!(parse_expr("é").is_err());
    }

    #[test]
    fn depth_limits() {
        let deep = format!("{}1{}", "(".repeat(100), ")".repeat(100));
        assert_eq!(parse_expr(&deep).unwrap_err().kind, ParseErrorKind::DepthExceeded);
        let long_chain = vec!["1"; 100].join("+");
        assert_eq!(parse_expr(&long_chain).unwrap_err().kind, ParseErrorKind::DepthExceeded);
        let ok = vec!["1"; 60].join("+");
        assert_eq!(at(&ok, Var::T, 0.0), 60.0);
        let negs = format!("{}1", "-".repeat(200));
        assert_eq!(parse_expr(&negs).unwrap_err().kind, ParseErrorKind::DepthExceeded);
        assert_eq!(parse_expr(&"1".repeat(MAX_SOURCE_LEN + 1)).unwrap_err().kind, ParseErrorKind::TooLong);
    }

    #[test]
    fn evaluation_errors() {
        let e = parse_expr("1/u").unwrap();
        assert!(matches!(e.eval(&Bindings::default().with(Var::U, 0.0)), Err(Error::Evaluation(_))));
        assert_eq!(e.eval(&Bindings::default().with(Var::U, 4.0)).unwrap(), 0.25);
    }

    #[test]
    fn function_handles() {
        let e = parse_expr("s*u + 1").unwrap();
        let f = e.func2(Var::S, Var::U);
        assert_eq!(f(2.0, 3.0), 7.0);
        let g = parse_expr("t^2").unwrap().func1(Var::T);
        assert_eq!(g(3.0), 9.0);
    }

    #[test]
    fn serde_round_trip() {
        let e = parse_expr("1 + 1/(1+u^2)").unwrap();
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, "\"1 + 1/(1+u^2)\"");
        let back: ExprFn = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<ExprFn>("\"1 +\"").is_err());
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            (0u32..100).prop_map(|n| n.to_string()),
            Just("u".to_string()),
            Just("t".to_string()),
        ];
        leaf.prop_recursive(6, 48, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
                inner.clone().prop_map(|a| format!("sin({a})")),
                inner.prop_map(|a| format!("-({a})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn parser_is_total(src in "\\PC{0,200}") {
            let _ = parse_expr(&src);
        }

        #[test]
        fn parser_is_total_on_symbol_soup(src in "[-+*/^()0-9.eustx a-z\n]{0,400}") {
            if let Err(e) = parse_expr(&src) {
                prop_assert!(e.line >= 1 && e.column >= 1);
            }
        }

        #[test]
        fn generated_expressions_parse(src in arb_expr(), u in -3.0f64..3.0) {
            let e = parse_expr(&src).unwrap();
            let v = e.value(&Bindings::default().with(Var::U, u).with(Var::T, 0.5));
            prop_assert!(v.is_finite());
            let again = parse_expr(&e.to_string()).unwrap();
            prop_assert_eq!(again, e);
        }
    }
}
