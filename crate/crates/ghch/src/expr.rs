//! Arithmetic expression language for coefficient data.
//!
//! Coefficients `a1..a5`, the forcing `f` and the initial datum `u0` are
//! given as strings in this little language:
//!
//! ```text
//! expr   := sum
//! sum    := product (('+' | '-') product)*
//! product:= unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          -- right-associative
//! atom   := number | 'pi' | variable | function '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `sin cos exp tanh sech sqrt abs`. Numbers are decimal with
//! optional fraction and exponent (`1`, `0.5`, `2e-3`). Precedence is
//! `^` > unary `-` > `* /` > `+ -`, so `-x^2` is `-(x^2)`.
//!
//! The set of variables an expression may reference is declared at parse
//! time; unknown identifiers are rejected with their position. Parsing and
//! evaluation are pure.

use std::fmt;

use thiserror::Error;

/// Byte range of a token or subexpression in the source string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Tanh,
    Sech,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Tanh => "tanh",
            Func::Sech => "sech",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "tanh" => Func::Tanh,
            "sech" => Func::Sech,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Num(f64),
    /// Variable reference; `index` points into the allowed-variable list
    /// given to [`parse`], `name` is kept for printing and errors.
    Var {
        index: usize,
        name: String,
    },
    Neg(Box<ExprAst>),
    Bin(BinOp, Box<ExprAst>, Box<ExprAst>),
    Call(Func, Box<ExprAst>),
}

/// Parsed expression tree.
#[derive(Debug, Clone)]
pub struct ExprAst {
    pub kind: ExprKind,
    pub span: Span,
}

/// Structural equality ignores spans (pretty-printing does not preserve
/// source positions).
impl PartialEq for ExprAst {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (ExprKind::Num(a), ExprKind::Num(b)) => a == b,
            (ExprKind::Var { index: i, name: n }, ExprKind::Var { index: j, name: m }) => {
                i == j && n == m
            }
            (ExprKind::Neg(a), ExprKind::Neg(b)) => a == b,
            (ExprKind::Bin(o, a, b), ExprKind::Bin(p, c, d)) => o == p && a == c && b == d,
            (ExprKind::Call(f, a), ExprKind::Call(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected token '{0}'")]
    UnexpectedToken(String),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("unknown function '{0}'")]
    UnknownFunction(String),
    #[error("bad number literal '{0}'")]
    BadNumber(String),
    #[error("empty expression")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source.
    pub pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    SqrtOfNegative,
    #[error("negative base raised to a non-integer power")]
    NonRealPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{kind} at {span}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: Span,
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                i += 1;
                out.push(Token {
                    tok,
                    span: Span { start, end: i },
                });
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(ParseError {
                            kind: ParseErrorKind::BadNumber(src[start..i].to_string()),
                            pos: start,
                        });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    kind: ParseErrorKind::BadNumber(text.to_string()),
                    pos: start,
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        kind: ParseErrorKind::BadNumber(text.to_string()),
                        pos: start,
                    });
                }
                out.push(Token {
                    tok: Tok::Num(value),
                    span: Span { start, end: i },
                });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..i].to_string()),
                    span: Span { start, end: i },
                });
            }
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(c),
                    pos: i,
                });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    allowed: &'a [&'a str],
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_error(&self) -> ParseError {
        ParseError {
            kind: ParseErrorKind::UnexpectedEnd,
            pos: self.src_len,
        }
    }

    fn expect_rparen(&mut self) -> Result<usize, ParseError> {
        match self.next() {
            Some(Token {
                tok: Tok::RParen,
                span,
            }) => Ok(span.end),
            Some(t) => Err(ParseError {
                kind: ParseErrorKind::UnexpectedToken(describe(&t.tok)),
                pos: t.span.start,
            }),
            None => Err(self.end_error()),
        }
    }

    fn sum(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.product()?;
        while let Some(t) = self.peek() {
            let op = match t.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.product()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = ExprAst {
                kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek() {
            let op = match t.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = ExprAst {
                kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if let Some(t) = self.peek() {
            if t.tok == Tok::Minus {
                let start = t.span.start;
                self.pos += 1;
                let inner = self.unary()?;
                let span = Span {
                    start,
                    end: inner.span.end,
                };
                return Ok(ExprAst {
                    kind: ExprKind::Neg(Box::new(inner)),
                    span,
                });
            }
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if let Some(t) = self.peek() {
            if t.tok == Tok::Caret {
                self.pos += 1;
                // Exponent parses at unary level: `x^-2` works and
                // `x^y^z` associates to the right.
                let exp = self.unary()?;
                let span = Span {
                    start: base.span.start,
                    end: exp.span.end,
                };
                return Ok(ExprAst {
                    kind: ExprKind::Bin(BinOp::Pow, Box::new(base), Box::new(exp)),
                    span,
                });
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let t = self.next().ok_or_else(|| self.end_error())?;
        match t.tok {
            Tok::Num(v) => Ok(ExprAst {
                kind: ExprKind::Num(v),
                span: t.span,
            }),
            Tok::LParen => {
                let inner = self.sum()?;
                let end = self.expect_rparen()?;
                Ok(ExprAst {
                    kind: inner.kind,
                    span: Span {
                        start: t.span.start,
                        end,
                    },
                })
            }
            Tok::Ident(name) => {
                let is_call = matches!(
                    self.peek(),
                    Some(Token {
                        tok: Tok::LParen,
                        ..
                    })
                );
                if is_call {
                    let func = Func::from_name(&name).ok_or(ParseError {
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                        pos: t.span.start,
                    })?;
                    self.pos += 1; // consume '('
                    let arg = self.sum()?;
                    let end = self.expect_rparen()?;
                    Ok(ExprAst {
                        kind: ExprKind::Call(func, Box::new(arg)),
                        span: Span {
                            start: t.span.start,
                            end,
                        },
                    })
                } else if name == "pi" {
                    Ok(ExprAst {
                        kind: ExprKind::Num(std::f64::consts::PI),
                        span: t.span,
                    })
                } else if let Some(index) = self.allowed.iter().position(|v| *v == name) {
                    Ok(ExprAst {
                        kind: ExprKind::Var { index, name },
                        span: t.span,
                    })
                } else {
                    Err(ParseError {
                        kind: ParseErrorKind::UnknownVariable(name),
                        pos: t.span.start,
                    })
                }
            }
            other => Err(ParseError {
                kind: ParseErrorKind::UnexpectedToken(describe(&other)),
                pos: t.span.start,
            }),
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(v) => format!("{v}"),
        Tok::Ident(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Slash => "/".into(),
        Tok::Caret => "^".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
    }
}

/// Parse `src` against a declared variable list. Variable indices in the
/// returned AST refer to positions in `allowed`.
pub fn parse(src: &str, allowed: &[&str]) -> Result<ExprAst, ParseError> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Empty,
            pos: 0,
        });
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        allowed,
        src_len: src.len(),
    };
    let ast = p.sum()?;
    if let Some(t) = p.peek() {
        return Err(ParseError {
            kind: ParseErrorKind::UnexpectedToken(describe(&t.tok)),
            pos: t.span.start,
        });
    }
    Ok(ast)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// One variable's worth of data for columnar evaluation.
#[derive(Debug, Clone, Copy)]
pub enum Col<'a> {
    Scalar(f64),
    Slice(&'a [f64]),
}

fn sech(x: f64) -> f64 {
    // 2 e^{-|x|} / (1 + e^{-2|x|}) never overflows.
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

fn apply_func(func: Func, x: f64, span: Span) -> Result<f64, EvalError> {
    Ok(match func {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Exp => x.exp(),
        Func::Tanh => x.tanh(),
        Func::Sech => sech(x),
        Func::Abs => x.abs(),
        Func::Sqrt => {
            if x < 0.0 {
                return Err(EvalError {
                    kind: EvalErrorKind::SqrtOfNegative,
                    span,
                });
            }
            x.sqrt()
        }
    })
}

fn pow(base: f64, exp: f64, span: Span) -> Result<f64, EvalError> {
    if base < 0.0 && exp != exp.trunc() {
        return Err(EvalError {
            kind: EvalErrorKind::NonRealPower,
            span,
        });
    }
    Ok(base.powf(exp))
}

impl ExprAst {
    /// Evaluate with one value per declared variable, in declaration order.
    /// Supplying fewer values than the declared variable list is a contract
    /// violation and panics.
    pub fn eval(&self, vars: &[f64]) -> Result<f64, EvalError> {
        Ok(match &self.kind {
            ExprKind::Num(v) => *v,
            ExprKind::Var { index, name } => {
                assert!(
                    *index < vars.len(),
                    "missing binding for variable '{name}' (index {index}, got {} values)",
                    vars.len()
                );
                vars[*index]
            }
            ExprKind::Neg(a) => -a.eval(vars)?,
            ExprKind::Bin(op, a, b) => {
                let x = a.eval(vars)?;
                let y = b.eval(vars)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(EvalError {
                                kind: EvalErrorKind::DivisionByZero,
                                span: self.span,
                            });
                        }
                        x / y
                    }
                    BinOp::Pow => pow(x, y, self.span)?,
                }
            }
            ExprKind::Call(func, a) => apply_func(*func, a.eval(vars)?, self.span)?,
        })
    }

    /// Evaluate over `n` points at once. `cols[i]` supplies variable `i`
    /// either as a broadcast scalar or a slice of length `n`.
    pub fn eval_cols(&self, n: usize, cols: &[Col<'_>]) -> Result<Vec<f64>, EvalError> {
        Ok(match &self.kind {
            ExprKind::Num(v) => vec![*v; n],
            ExprKind::Var { index, name } => {
                assert!(
                    *index < cols.len(),
                    "missing binding for variable '{name}' (index {index}, got {} columns)",
                    cols.len()
                );
                match cols[*index] {
                    Col::Scalar(v) => vec![v; n],
                    Col::Slice(s) => {
                        assert_eq!(s.len(), n, "column length mismatch for '{name}'");
                        s.to_vec()
                    }
                }
            }
            ExprKind::Neg(a) => {
                let mut v = a.eval_cols(n, cols)?;
                for x in &mut v {
                    *x = -*x;
                }
                v
            }
            ExprKind::Bin(op, a, b) => {
                let mut x = a.eval_cols(n, cols)?;
                let y = b.eval_cols(n, cols)?;
                match op {
                    BinOp::Add => {
                        for (u, v) in x.iter_mut().zip(&y) {
                            *u += v;
                        }
                    }
                    BinOp::Sub => {
                        for (u, v) in x.iter_mut().zip(&y) {
                            *u -= v;
                        }
                    }
                    BinOp::Mul => {
                        for (u, v) in x.iter_mut().zip(&y) {
                            *u *= v;
                        }
                    }
                    BinOp::Div => {
                        for (u, v) in x.iter_mut().zip(&y) {
                            if *v == 0.0 {
                                return Err(EvalError {
                                    kind: EvalErrorKind::DivisionByZero,
                                    span: self.span,
                                });
                            }
                            *u /= v;
                        }
                    }
                    BinOp::Pow => {
                        for (u, v) in x.iter_mut().zip(&y) {
                            *u = pow(*u, *v, self.span)?;
                        }
                    }
                }
                x
            }
            ExprKind::Call(func, a) => {
                let mut v = a.eval_cols(n, cols)?;
                for x in &mut v {
                    *x = apply_func(*func, *x, self.span)?;
                }
                v
            }
        })
    }

    /// Whether the expression references the variable with this name.
    pub fn uses_var(&self, name: &str) -> bool {
        match &self.kind {
            ExprKind::Num(_) => false,
            ExprKind::Var { name: n, .. } => n == name,
            ExprKind::Neg(a) => a.uses_var(name),
            ExprKind::Bin(_, a, b) => a.uses_var(name) || b.uses_var(name),
            ExprKind::Call(_, a) => a.uses_var(name),
        }
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

// Precedence levels for the printer. A child is parenthesized when its
// level is below the level its position requires, which is exactly the
// condition under which reparsing would reshape the tree.
fn level(kind: &ExprKind) -> u8 {
    match kind {
        ExprKind::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        ExprKind::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        ExprKind::Neg(_) => 3,
        ExprKind::Bin(BinOp::Pow, ..) => 4,
        ExprKind::Num(_) | ExprKind::Var { .. } | ExprKind::Call(..) => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &ExprAst, min: u8) -> fmt::Result {
    let lv = level(&e.kind);
    if lv < min {
        write!(f, "(")?;
        write_at(f, e, 0)?;
        return write!(f, ")");
    }
    match &e.kind {
        ExprKind::Num(v) => write!(f, "{v}"),
        ExprKind::Var { name, .. } => write!(f, "{name}"),
        ExprKind::Neg(a) => {
            write!(f, "-")?;
            write_at(f, a, 3)
        }
        ExprKind::Bin(op, a, b) => {
            let (sym, lhs_min, rhs_min) = match op {
                BinOp::Add => ("+", 1, 2),
                BinOp::Sub => ("-", 1, 2),
                BinOp::Mul => ("*", 2, 3),
                BinOp::Div => ("/", 2, 3),
                // Right-associative: the base must be atomic, the
                // exponent may be a unary chain or another power.
                BinOp::Pow => ("^", 5, 3),
            };
            write_at(f, a, lhs_min)?;
            write!(f, "{sym}")?;
            write_at(f, b, rhs_min)
        }
        ExprKind::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_at(f, a, 0)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 0)
    }
}
