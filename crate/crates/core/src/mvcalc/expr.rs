//! Coefficient and parametrization expressions.
//!
//! Grammar (whitespace insignificant), tightest binding first:
//!
//! ```text
//! primary := p | p/q | ident | sin(sum) | cos(sum) | (sum)
//! power   := primary ('^' power)?          right-assoc, nonneg integer exponent
//! unary   := '-' unary | power
//! product := unary ('*' unary)*
//! sum     := product (('+' | '-') product)*
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::poly::{fmt_rational, int, rational_to_f64, PolyScalar, Rational};

const MAX_EXPONENT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("sin/cos not allowed in this context")]
    TrigNotAllowed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

/// A parsed expression together with the variable scope it was parsed in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    vars: Vec<String>,
    root: Expr,
}

/// Parses `source` over `allowed_vars`. With `allow_trig == false` any
/// occurrence of sin/cos is rejected.
pub fn parse_expr(
    source: &str,
    allowed_vars: &[String],
    allow_trig: bool,
) -> Result<Expression, ExprError> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
        vars: allowed_vars,
    };
    let root = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    if !allow_trig && root.has_trig() {
        return Err(ExprError::TrigNotAllowed);
    }
    Ok(Expression {
        vars: allowed_vars.to_vec(),
        root,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.product()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.product()?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            let rhs = self.unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let start = self.pos;
        let exponent = self.power()?;
        let k = exponent
            .const_value()
            .filter(|r| r.is_integer() && !r.is_negative())
            .and_then(|r| r.to_integer().to_u32())
            .filter(|&k| k <= MAX_EXPONENT)
            .ok_or(ExprError::Syntax {
                pos: start,
                msg: format!("exponent must be a nonnegative integer constant <= {MAX_EXPONENT}"),
            })?;
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self
                    .digits()
                    .ok_or_else(|| self.err("bad integer literal"))?;
                let save = self.pos;
                if self.eat(b'/') {
                    self.skip_ws();
                    let den_pos = self.pos;
                    let den = self
                        .digits()
                        .ok_or_else(|| self.err("expected denominator after `/`"))?;
                    if den.is_zero() {
                        return Err(ExprError::Syntax {
                            pos: den_pos,
                            msg: "zero denominator".into(),
                        });
                    }
                    Ok(Expr::Num(Rational::new(num, den)))
                } else {
                    self.pos = save;
                    Ok(Expr::Num(Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                if name == "sin" || name == "cos" {
                    if !self.eat(b'(') {
                        return Err(self.err(format!("expected `(` after {name}")));
                    }
                    let arg = self.sum()?;
                    if !self.eat(b')') {
                        return Err(self.err("expected `)`"));
                    }
                    return Ok(if name == "sin" {
                        Expr::Sin(Box::new(arg))
                    } else {
                        Expr::Cos(Box::new(arg))
                    });
                }
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None => Err(ExprError::UnknownVariable {
                        name: name.to_string(),
                        pos: start,
                    }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
        }
    }
}

fn num(r: Rational) -> Expr {
    Expr::Num(r)
}

// Smart constructors with constant folding, used by differentiation.
fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), _) if x.is_zero() => b,
        (_, Expr::Num(y)) if y.is_zero() => a,
        (Expr::Num(x), Expr::Num(y)) => num(x + y),
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (_, Expr::Num(y)) if y.is_zero() => a,
        (Expr::Num(x), _) if x.is_zero() => neg(b),
        (Expr::Num(x), Expr::Num(y)) => num(x - y),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), _) | (_, Expr::Num(x)) if x.is_zero() => num(Rational::zero()),
        (Expr::Num(x), _) if x.is_one() => b,
        (_, Expr::Num(y)) if y.is_one() => a,
        (Expr::Num(x), Expr::Num(y)) => num(x * y),
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn pow(a: Expr, k: u32) -> Expr {
    match (k, &a) {
        (0, _) => num(Rational::one()),
        (1, _) => a,
        (_, Expr::Num(x)) => {
            let mut r = Rational::one();
            for _ in 0..k {
                r *= x;
            }
            num(r)
        }
        _ => Expr::Pow(Box::new(a), k),
    }
}

impl Expr {
    fn has_trig(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) => false,
            Expr::Sin(_) | Expr::Cos(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_trig(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_trig() || b.has_trig(),
        }
    }

    /// Exact value if the expression is a variable-free polynomial.
    fn const_value(&self) -> Option<Rational> {
        match self {
            Expr::Num(r) => Some(r.clone()),
            Expr::Var(_) | Expr::Sin(_) | Expr::Cos(_) => None,
            Expr::Neg(a) => a.const_value().map(|r| -r),
            Expr::Add(a, b) => Some(a.const_value()? + b.const_value()?),
            Expr::Sub(a, b) => Some(a.const_value()? - b.const_value()?),
            Expr::Mul(a, b) => Some(a.const_value()? * b.const_value()?),
            Expr::Pow(a, k) => {
                let base = a.const_value()?;
                let mut r = Rational::one();
                for _ in 0..*k {
                    r *= &base;
                }
                Some(r)
            }
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Num(r) => rational_to_f64(r),
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Pow(a, k) => a.eval(x).powi(*k as i32),
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
        }
    }

    fn diff(&self, v: usize) -> Expr {
        match self {
            Expr::Num(_) => num(Rational::zero()),
            Expr::Var(i) => num(if *i == v {
                Rational::one()
            } else {
                Rational::zero()
            }),
            Expr::Neg(a) => neg(a.diff(v)),
            Expr::Add(a, b) => add(a.diff(v), b.diff(v)),
            Expr::Sub(a, b) => sub(a.diff(v), b.diff(v)),
            Expr::Mul(a, b) => add(mul(a.diff(v), (**b).clone()), mul((**a).clone(), b.diff(v))),
            Expr::Pow(_, 0) => num(Rational::zero()),
            Expr::Pow(a, k) => mul(
                mul(num(int(*k as i64)), pow((**a).clone(), k - 1)),
                a.diff(v),
            ),
            Expr::Sin(a) => mul(Expr::Cos(a.clone()), a.diff(v)),
            Expr::Cos(a) => neg(mul(Expr::Sin(a.clone()), a.diff(v))),
        }
    }

    fn to_poly(&self, nvars: usize) -> Result<PolyScalar, ExprError> {
        Ok(match self {
            Expr::Num(r) => PolyScalar::constant(nvars, r.clone()),
            Expr::Var(i) => PolyScalar::var(nvars, *i),
            Expr::Neg(a) => -a.to_poly(nvars)?,
            Expr::Add(a, b) => a.to_poly(nvars)? + b.to_poly(nvars)?,
            Expr::Sub(a, b) => a.to_poly(nvars)? - b.to_poly(nvars)?,
            Expr::Mul(a, b) => a.to_poly(nvars)? * b.to_poly(nvars)?,
            Expr::Pow(a, k) => a.to_poly(nvars)?.pow(*k),
            Expr::Sin(_) | Expr::Cos(_) => return Err(ExprError::TrigNotAllowed),
        })
    }

    fn from_poly(p: &PolyScalar) -> Expr {
        let mut acc = num(Rational::zero());
        for (e, c) in p.terms() {
            let mut m = num(c.clone());
            for (i, &k) in e.iter().enumerate() {
                m = mul(m, pow(Expr::Var(i), k));
            }
            acc = add(acc, m);
        }
        acc
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, vars: &[String], prec: u8) -> fmt::Result {
        // prec: 0 sum, 1 product, 2 unary, 3 power base
        let wrap = match self {
            Expr::Add(..) | Expr::Sub(..) => prec > 0,
            Expr::Mul(..) => prec > 1,
            Expr::Neg(..) => prec > 2,
            Expr::Num(r) if !r.is_integer() || r.is_negative() => prec > 1,
            _ => false,
        };
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(r) => f.write_str(&fmt_rational(r))?,
            Expr::Var(i) => f.write_str(&vars[*i])?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_prec(f, vars, 2)?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, vars, 0)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, vars, 1)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, vars, 0)?;
                f.write_str(" - ")?;
                b.fmt_prec(f, vars, 1)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, vars, 1)?;
                f.write_str("*")?;
                b.fmt_prec(f, vars, 2)?;
            }
            Expr::Pow(a, k) => {
                a.fmt_prec(f, vars, 3)?;
                write!(f, "^{k}")?;
            }
            Expr::Sin(a) => {
                f.write_str("sin(")?;
                a.fmt_prec(f, vars, 0)?;
                f.write_str(")")?;
            }
            Expr::Cos(a) => {
                f.write_str("cos(")?;
                a.fmt_prec(f, vars, 0)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Expression {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        Self {
            vars: vars.to_vec(),
            root: Expr::Num(c),
        }
    }

    pub fn from_poly(vars: &[String], p: &PolyScalar) -> Self {
        assert_eq!(p.nvars(), vars.len());
        Self {
            vars: vars.to_vec(),
            root: Expr::from_poly(p),
        }
    }

    pub fn has_trig(&self) -> bool {
        self.root.has_trig()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.vars.len());
        self.root.eval(x)
    }

    /// Exact derivative with respect to variable `v`.
    pub fn diff(&self, v: usize) -> Expression {
        Expression {
            vars: self.vars.clone(),
            root: self.root.diff(v),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.root, Expr::Num(r) if r.is_zero())
    }

    /// Reduces to a polynomial; fails if sin/cos occur.
    pub fn to_poly(&self) -> Result<PolyScalar, ExprError> {
        self.root.to_poly(self.vars.len())
    }

    pub fn mul(&self, other: &Expression) -> Expression {
        Expression {
            vars: self.vars.clone(),
            root: mul(self.root.clone(), other.root.clone()),
        }
    }

    pub fn add(&self, other: &Expression) -> Expression {
        Expression {
            vars: self.vars.clone(),
            root: add(self.root.clone(), other.root.clone()),
        }
    }

    pub fn neg(&self) -> Expression {
        Expression {
            vars: self.vars.clone(),
            root: neg(self.root.clone()),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt_prec(f, &self.vars, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcalc::poly::rat;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grammar_identity() {
        let vars = v(&["x", "y", "z"]);
        let e = parse_expr("x*y - 1/2*z^2", &vars, false).unwrap();
        let x = PolyScalar::var(3, 0);
        let y = PolyScalar::var(3, 1);
        let z = PolyScalar::var(3, 2);
        let expected = &(&x * &y) - &(&z * &z).scale(&rat(1, 2));
        assert_eq!(e.to_poly().unwrap(), expected);
    }

    #[test]
    fn precedence_rules() {
        let vars = v(&["x"]);
        // ^ binds tighter than unary minus
        let e = parse_expr("-x^2", &vars, false).unwrap();
        assert_eq!(e.eval(&[3.0]), -9.0);
        // right associative
        let e = parse_expr("x^2^3", &vars, false).unwrap();
        assert_eq!(e.eval(&[2.0]), 256.0);
        // unary minus tighter than *
        let e = parse_expr("2*-x + 1", &vars, false).unwrap();
        assert_eq!(e.eval(&[3.0]), -5.0);
        let e = parse_expr(" 1 / 2 * x ", &vars, false).unwrap();
        assert_eq!(e.eval(&[4.0]), 2.0);
    }

    #[test]
    fn trig_flag_contract() {
        let vars = v(&["t"]);
        assert_eq!(
            parse_expr("cos(t)", &vars, false),
            Err(ExprError::TrigNotAllowed)
        );
        assert!(parse_expr("cos(t)", &vars, true).is_ok());
    }

    #[test]
    fn unknown_variable() {
        let vars = v(&["x", "y"]);
        match parse_expr("z", &vars, false) {
            Err(ExprError::UnknownVariable { name, pos }) => {
                assert_eq!(name, "z");
                assert_eq!(pos, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let vars = v(&["x"]);
        assert!(matches!(
            parse_expr("x +", &vars, false),
            Err(ExprError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_expr("x/2", &vars, false),
            Err(ExprError::Syntax { pos: 1, .. })
        ));
        assert!(matches!(
            parse_expr("x^-1", &vars, false),
            Err(ExprError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("x^x", &vars, false),
            Err(ExprError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("1/0", &vars, false),
            Err(ExprError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("(x", &vars, false),
            Err(ExprError::Syntax { .. })
        ));
    }

    #[test]
    fn exact_differentiation() {
        let vars = v(&["t"]);
        let e = parse_expr("sin(t)^2 + t*cos(t)", &vars, true).unwrap();
        let d = e.diff(0);
        for &t in &[0.0, 0.3, 1.7, -2.2] {
            let expected = 2.0 * f64::sin(t) * f64::cos(t) + f64::cos(t) - t * f64::sin(t);
            assert!((d.eval(&[t]) - expected).abs() < 1e-14);
        }
        let zeroth = parse_expr("x^0*sin(x)", &v(&["x"]), true).unwrap();
        assert!((zeroth.diff(0).eval(&[0.4]) - f64::cos(0.4)).abs() < 1e-14);
    }

    #[test]
    fn display_reparses() {
        let vars = v(&["x", "t"]);
        let e = parse_expr("-(x - 1/3)^2*cos(2*t) - -x", &vars, true).unwrap();
        let again = parse_expr(&e.to_string(), &vars, true).unwrap();
        for &(a, b) in &[(0.1, 0.2), (-1.5, 3.0)] {
            assert!((e.eval(&[a, b]) - again.eval(&[a, b])).abs() < 1e-14);
        }
    }
}
