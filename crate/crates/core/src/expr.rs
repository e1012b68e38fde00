//! Expression language for the spatial components of a curve.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right-associative
//! primary := number | 's' | param | func '(' expr ')' | '(' expr ')'
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{EvalError, JetError, ParseError};
use crate::jet::{Func, Jet};

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Param(String),
    Var,
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        func: Func,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(name.to_string())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call {
            func,
            arg: Box::new(arg),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Num(v) if v.is_sign_negative() => PREC_NEG,
            Expr::Neg(_) => PREC_NEG,
            Expr::Binary { op, .. } => op.precedence(),
            _ => PREC_ATOM,
        }
    }

    pub fn depends_on_var(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Param(_) => false,
            Expr::Neg(a) | Expr::Call { arg: a, .. } => a.depends_on_var(),
            Expr::Binary { lhs, rhs, .. } => lhs.depends_on_var() || rhs.depends_on_var(),
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Param(p) => {
                out.insert(p.clone());
            }
            Expr::Num(_) | Expr::Var => {}
            Expr::Neg(a) | Expr::Call { arg: a, .. } => a.collect_params(out),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.collect_params(out);
                rhs.collect_params(out);
            }
        }
    }

    /// Replace every occurrence of the curve parameter `s` by `with`.
    pub fn substitute_var(&self, with: &Expr) -> Expr {
        match self {
            Expr::Var => with.clone(),
            Expr::Num(_) | Expr::Param(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute_var(with))),
            Expr::Call { func, arg } => Expr::call(*func, arg.substitute_var(with)),
            Expr::Binary { op, lhs, rhs } => {
                Expr::binary(*op, lhs.substitute_var(with), rhs.substitute_var(with))
            }
        }
    }

    /// Replace parameter references by their numeric values.
    pub fn inline_params(&self, params: &Params) -> Result<Expr, EvalError> {
        Ok(match self {
            Expr::Param(p) => Expr::Num(lookup(params, p)?),
            Expr::Num(_) | Expr::Var => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.inline_params(params)?)),
            Expr::Call { func, arg } => Expr::call(*func, arg.inline_params(params)?),
            Expr::Binary { op, lhs, rhs } => {
                Expr::binary(*op, lhs.inline_params(params)?, rhs.inline_params(params)?)
            }
        })
    }

    pub fn eval_real(&self, s: f64, params: &Params) -> Result<f64, EvalError> {
        let located = |e: JetError| EvalError::Jet {
            at: self.to_string(),
            source: e,
        };
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Var => Ok(s),
            Expr::Param(p) => lookup(params, p),
            Expr::Neg(a) => Ok(-a.eval_real(s, params)?),
            Expr::Call { func, arg } => {
                let x = arg.eval_real(s, params)?;
                match func {
                    // same route as the jet path, which divides sin by cos
                    Func::Tan => {
                        func.eval_real(x).map_err(located)?;
                        Ok(x.sin() / x.cos())
                    }
                    f => f.eval_real(x).map_err(located),
                }
            }
            Expr::Binary { op, lhs, rhs } => {
                let a = lhs.eval_real(s, params)?;
                let b = rhs.eval_real(s, params)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(located(JetError::DivisionByZero))
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => {
                        if rhs.depends_on_var() {
                            real_pow_variable(a, b).map_err(located)
                        } else {
                            real_pow(a, b).map_err(located)
                        }
                    }
                }
            }
        }
    }

    pub fn eval_jet(&self, s: &Jet, params: &Params) -> Result<Jet, EvalError> {
        let located = |e: JetError| EvalError::Jet {
            at: self.to_string(),
            source: e,
        };
        match self {
            Expr::Num(v) => Ok(Jet::constant(*v)),
            Expr::Var => Ok(*s),
            Expr::Param(p) => Ok(Jet::constant(lookup(params, p)?)),
            Expr::Neg(a) => Ok(-a.eval_jet(s, params)?),
            Expr::Call { func, arg } => arg.eval_jet(s, params)?.apply(*func).map_err(located),
            Expr::Binary { op, lhs, rhs } => {
                let a = lhs.eval_jet(s, params)?;
                let b = rhs.eval_jet(s, params)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => a.try_div(&b).map_err(located),
                    BinOp::Pow => {
                        if rhs.depends_on_var() {
                            jet_pow_variable(&a, &b).map_err(located)
                        } else {
                            a.powf(b.value()).map_err(located)
                        }
                    }
                }
            }
        }
    }
}

fn lookup(params: &Params, name: &str) -> Result<f64, EvalError> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| EvalError::MissingParam(name.to_string()))
}

/// Mirrors [`Jet::powf`] on the constant term.
fn real_pow(a: f64, r: f64) -> Result<f64, JetError> {
    if r.fract() == 0.0 && r.abs() <= i64::MAX as f64 {
        let n = r as i64;
        let mut base = a;
        let mut e = n.unsigned_abs();
        let mut acc = 1.0;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base *= base;
            }
        }
        if n < 0 {
            if acc == 0.0 {
                return Err(JetError::DivisionByZero);
            }
            acc = 1.0 / acc;
        }
        return Ok(acc);
    }
    if !(a > 0.0) {
        return Err(JetError::PowDomain {
            exponent: r,
            value: a,
        });
    }
    Ok(a.powf(r))
}

fn real_pow_variable(a: f64, b: f64) -> Result<f64, JetError> {
    if !(a > 0.0) {
        return Err(JetError::PowDomain {
            exponent: b,
            value: a,
        });
    }
    Ok((b * a.ln()).exp())
}

fn jet_pow_variable(a: &Jet, b: &Jet) -> Result<Jet, JetError> {
    if !(a.value() > 0.0) {
        return Err(JetError::PowDomain {
            exponent: b.value(),
            value: a.value(),
        });
    }
    (*b * a.apply(Func::Log)?).apply(Func::Exp)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if v.is_sign_negative() => write!(f, "-{}", -v),
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => f.write_str("s"),
            Expr::Param(p) => f.write_str(p),
            Expr::Call { func, arg } => write!(f, "{func}({arg})"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, a.precedence() < PREC_NEG)
            }
            Expr::Binary { op, lhs, rhs } => {
                let p = op.precedence();
                let (lp, rp) = if *op == BinOp::Pow {
                    (lhs.precedence() <= p, rhs.precedence() < PREC_NEG)
                } else {
                    (lhs.precedence() < p, rhs.precedence() <= p)
                };
                write_operand(f, lhs, lp)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, rhs, rp)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
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
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    return Err(ParseError::Syntax {
                        offset: j,
                        message: "malformed exponent in number".into(),
                    });
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("invalid number `{text}`"),
            })?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        let tok = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    params: &'a BTreeSet<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {wanted}, found {}", self.peek().describe()),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let (_, at) = self.bump();
                if *self.peek() == Tok::LParen {
                    return self.call(name, at);
                }
                if name == "s" {
                    Ok(Expr::Var)
                } else if self.params.contains(&name) {
                    Ok(Expr::Param(name))
                } else if Func::from_name(&name).is_some() {
                    Err(ParseError::Syntax {
                        offset: self.offset(),
                        message: format!("function `{name}` needs a parenthesized argument"),
                    })
                } else {
                    Err(ParseError::UnknownIdentifier { name, offset: at })
                }
            }
            _ => Err(self.unexpected("a number, identifier or `(`")),
        }
    }

    fn call(&mut self, name: String, at: usize) -> Result<Expr, ParseError> {
        let Some(func) = Func::from_name(&name) else {
            return Err(ParseError::UnknownIdentifier { name, offset: at });
        };
        self.bump(); // (
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.expr()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.expr()?);
            }
        }
        self.expect_rparen()?;
        if args.len() != 1 {
            return Err(ParseError::Arity {
                name,
                got: args.len(),
                offset: at,
            });
        }
        Ok(Expr::call(func, args.pop().expect("one argument")))
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected("`)`"))
        }
    }
}

/// Parses `src`, resolving identifiers other than `s` and function names
/// against `params`.
pub fn parse_expr(src: &str, params: &BTreeSet<String>) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        params,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}
