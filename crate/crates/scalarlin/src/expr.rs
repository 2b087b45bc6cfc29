//! Formula language shared by the catalog and the vector-field verifier.
//!
//! Grammar: integer literals, `pi`, identifiers, `+ - * /`, integer powers
//! `^k` (`k` may be negative), unary minus, and the one-argument functions
//! in [`Func`]. Conditions are `expr OP expr` with `== != < <= > >=`.
//!
//! Evaluation is exact whenever the inputs are exact and every function is
//! hit at a point with a rational value (`sin 0`, `sqrt 9/4`, ...). A
//! division by an exact zero restarts the whole evaluation in `f64` with
//! IEEE signed zeros, so `atan(1/(0*(-1)))` is `-π/2`. Inside `atan`, a
//! quotient `0/0` is taken to be `0`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{rat_sqrt, rat_to_string, Rational};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Cot,
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Exp,
    Sqrt,
    Abs,
    Sign,
    Atan,
}

impl Func {
    const ALL: [Func; 13] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Cot,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Coth,
        Func::Exp,
        Func::Sqrt,
        Func::Abs,
        Func::Sign,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sign => "sign",
            Func::Atan => "atan",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn apply_f64(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Cot => 1.0 / x.tan(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Coth => 1.0 / x.tanh(),
            Func::Exp => x.exp(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
            Func::Sign => {
                if x < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
            Func::Atan => x.atan(),
        }
    }

    /// Exact value where one exists, `Ok(None)` where the result is
    /// irrational.
    fn apply_exact(self, x: &Rational) -> Result<Option<Rational>, EvalError> {
        let zero = x.is_zero();
        Ok(match self {
            Func::Sin | Func::Tan | Func::Sinh | Func::Tanh | Func::Atan if zero => Some(Rational::zero()),
            Func::Cos | Func::Cosh | Func::Exp if zero => Some(Rational::one()),
            Func::Cot | Func::Coth if zero => return Err(EvalError::DivisionByZero),
            Func::Sqrt if x.is_negative() => return Err(EvalError::Domain(format!("sqrt({})", rat_to_string(x)))),
            Func::Sqrt => rat_sqrt(x),
            Func::Abs => Some(x.abs()),
            Func::Sign => Some(if x.is_negative() { -Rational::one() } else { Rational::one() }),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(Rational),
    Pi,
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// `lhs OP rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos} in {input:?}: {msg}")]
pub struct ParseError {
    pub input: String,
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite result")]
    NonFinite,
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("expression is not linear in the vector symbols: {0}")]
    NotLinear(String),
}

/// Variable bindings for evaluation.
pub trait Scope {
    fn scalar(&self, name: &str) -> Option<Scalar>;
}

impl Scope for BTreeMap<String, Scalar> {
    fn scalar(&self, name: &str) -> Option<Scalar> {
        self.get(name).cloned()
    }
}

impl Scope for HashMap<String, Scalar> {
    fn scalar(&self, name: &str) -> Option<Scalar> {
        self.get(name).cloned()
    }
}

impl<F: Fn(&str) -> Option<Scalar>> Scope for F {
    fn scalar(&self, name: &str) -> Option<Scalar> {
        self(name)
    }
}

/// Looks names up in `first`, then in `second`.
pub struct Chain<'a>(pub &'a dyn Scope, pub &'a dyn Scope);

impl Scope for Chain<'_> {
    fn scalar(&self, name: &str) -> Option<Scalar> {
        self.0.scalar(name).or_else(|| self.1.scalar(name))
    }
}

/// A scope binding nothing.
pub struct Empty;

impl Scope for Empty {
    fn scalar(&self, _: &str) -> Option<Scalar> {
        None
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(&'static str),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let err = |pos: usize, msg: &str| ParseError { input: input.to_string(), pos, msg: msg.to_string() };
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(err(i, "decimal literals are not supported; write a fraction"));
            }
            out.push((start, Tok::Int(input[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(input[start..i].to_string())));
        } else {
            let two = input.get(i..i + 2).unwrap_or("");
            let sym = match two {
                "==" | "!=" | "<=" | ">=" => Some(two),
                _ => None,
            };
            let sym: &'static str = match sym.unwrap_or(&input[i..i + 1]) {
                "==" => "==",
                "!=" => "!=",
                "<=" => "<=",
                ">=" => ">=",
                "<" => "<",
                ">" => ">",
                "+" => "+",
                "-" => "-",
                "*" => "*",
                "/" => "/",
                "^" => "^",
                "(" => "(",
                ")" => ")",
                _ => return Err(err(i, &format!("unexpected character {c:?}"))),
            };
            out.push((i, Tok::Sym(sym)));
            i += sym.len();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Result<Self, ParseError> {
        Ok(Self { input, toks: tokenize(input)?, pos: 0 })
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let pos = self.toks.get(self.pos).map_or(self.input.len(), |t| t.0);
        ParseError { input: self.input.to_string(), pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{sym}`")))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("unexpected trailing input")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat("+") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat("-") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat("*") {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat("/") {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat("-") {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat("+") {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat("^") {
            return Ok(base);
        }
        let paren = self.eat("(");
        let neg = self.eat("-");
        let k = match self.peek() {
            Some(Tok::Int(k)) => i32::try_from(k.clone()).map_err(|_| self.err("exponent too large"))?,
            _ => return Err(self.err("expected an integer exponent")),
        };
        self.pos += 1;
        if paren {
            self.expect(")")?;
        }
        Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(k)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(f) = Func::from_name(&name) {
                    self.expect("(")?;
                    let arg = self.expr()?;
                    self.expect(")")?;
                    Ok(Expr::Call(f, Box::new(arg)))
                } else if name == "pi" {
                    Ok(Expr::Pi)
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => Err(self.err("expected a number, name or `(`")),
        }
    }
}

/// Parses an expression.
pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(input)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses `lhs OP rhs`.
pub fn parse_condition(input: &str) -> Result<Condition, ParseError> {
    let mut p = Parser::new(input)?;
    let lhs = p.expr()?;
    let op = match p.peek() {
        Some(Tok::Sym("==")) => CmpOp::Eq,
        Some(Tok::Sym("!=")) => CmpOp::Ne,
        Some(Tok::Sym("<")) => CmpOp::Lt,
        Some(Tok::Sym("<=")) => CmpOp::Le,
        Some(Tok::Sym(">")) => CmpOp::Gt,
        Some(Tok::Sym(">=")) => CmpOp::Ge,
        _ => return Err(p.err("expected a comparison operator")),
    };
    p.pos += 1;
    let rhs = p.expr()?;
    p.finish()?;
    Ok(Condition { lhs, op, rhs })
}

// ---------------------------------------------------------------------------
// Evaluation

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Exact,
    Float,
}

/// Scalar or vector intermediate value.
#[derive(Clone, Debug)]
enum Value {
    S(Scalar),
    V(Vec<Scalar>),
}

struct Ctx<'a> {
    scope: &'a dyn Scope,
    vectors: &'a dyn Fn(&str) -> Option<Vec<Scalar>>,
    mode: Mode,
}

impl Ctx<'_> {
    fn leaf(&self, s: Scalar) -> Scalar {
        match self.mode {
            Mode::Exact => s,
            Mode::Float => s.to_approx(),
        }
    }

    fn eval(&self, e: &Expr) -> Result<Value, EvalError> {
        use Value::{S, V};
        Ok(match e {
            Expr::Num(r) => S(self.leaf(Scalar::Exact(r.clone()))),
            Expr::Pi => S(Scalar::Approx(std::f64::consts::PI)),
            Expr::Var(name) => {
                if let Some(s) = self.scope.scalar(name) {
                    S(self.leaf(s))
                } else if let Some(v) = (self.vectors)(name) {
                    V(v.into_iter().map(|s| self.leaf(s)).collect())
                } else {
                    return Err(EvalError::Unbound(name.clone()));
                }
            }
            Expr::Neg(a) => match self.eval(a)? {
                S(s) => S(-s),
                V(v) => V(v.iter().map(|s| -s).collect()),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let neg = matches!(e, Expr::Sub(..));
                let comb = |x: &Scalar, y: &Scalar| if neg { x - y } else { x + y };
                match (self.eval(a)?, self.eval(b)?) {
                    (S(x), S(y)) => S(comb(&x, &y)),
                    (V(x), V(y)) if x.len() == y.len() => V(x.iter().zip(&y).map(|(p, q)| comb(p, q)).collect()),
                    (V(x), S(y)) | (S(y), V(x)) if y.is_zero() && y.is_exact() => {
                        // `0` is accepted as the zero vector
                        let _ = y;
                        V(x)
                    }
                    _ => return Err(EvalError::NotLinear(e.to_string())),
                }
            }
            Expr::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (S(x), S(y)) => S(&x * &y),
                (S(x), V(v)) | (V(v), S(x)) => V(v.iter().map(|s| &x * s).collect()),
                (V(_), V(_)) => return Err(EvalError::NotLinear(e.to_string())),
            },
            Expr::Div(a, b) => {
                let d = match self.eval(b)? {
                    S(d) => d,
                    V(_) => return Err(EvalError::NotLinear(e.to_string())),
                };
                match self.eval(a)? {
                    S(n) => S(n.checked_div(&d).ok_or(EvalError::DivisionByZero)?),
                    V(v) => V(v
                        .iter()
                        .map(|s| s.checked_div(&d).ok_or(EvalError::DivisionByZero))
                        .collect::<Result<_, _>>()?),
                }
            }
            Expr::Pow(a, k) => match self.eval(a)? {
                S(s) => S(s.powi(*k).ok_or(EvalError::DivisionByZero)?),
                V(_) => return Err(EvalError::NotLinear(e.to_string())),
            },
            Expr::Call(f, a) => {
                if *f == Func::Atan && self.mode == Mode::Float {
                    if let Expr::Div(n, d) = a.as_ref() {
                        let (n, d) = (self.scalar(n)?.to_f64(), self.scalar(d)?.to_f64());
                        return Ok(S(Scalar::Approx(if n == 0.0 && d == 0.0 { 0.0 } else { (n / d).atan() })));
                    }
                }
                let x = self.scalar(a)?;
                S(match &x {
                    Scalar::Exact(r) => match f.apply_exact(r)? {
                        Some(v) => Scalar::Exact(v),
                        None => Scalar::Approx(f.apply_f64(x.to_f64())),
                    },
                    Scalar::Approx(v) => Scalar::Approx(f.apply_f64(*v)),
                })
            }
        })
    }

    fn scalar(&self, e: &Expr) -> Result<Scalar, EvalError> {
        match self.eval(e)? {
            Value::S(s) => Ok(s),
            Value::V(_) => Err(EvalError::NotLinear(e.to_string())),
        }
    }
}

fn no_vectors(_: &str) -> Option<Vec<Scalar>> {
    None
}

impl Expr {
    /// Evaluates to a scalar, exactly if possible.
    pub fn eval(&self, scope: &dyn Scope) -> Result<Scalar, EvalError> {
        let run = |mode| Ctx { scope, vectors: &no_vectors, mode }.scalar(self);
        let out = match run(Mode::Exact) {
            Err(EvalError::DivisionByZero) => run(Mode::Float)?,
            other => other?,
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Evaluates an expression that is linear in vector-valued symbols,
    /// e.g. `e2 + y4/y3*e4`. `vectors` supplies the vector symbols (all of
    /// length `dim`); the plain scalar `0` is accepted as the zero vector.
    pub fn eval_vector(
        &self,
        scope: &dyn Scope,
        vectors: &dyn Fn(&str) -> Option<Vec<Scalar>>,
        dim: usize,
    ) -> Result<Vec<Scalar>, EvalError> {
        let run = |mode| Ctx { scope, vectors, mode }.eval(self);
        let out = match run(Mode::Exact) {
            Err(EvalError::DivisionByZero) => run(Mode::Float)?,
            other => other?,
        };
        let v = match out {
            Value::V(v) if v.len() == dim => v,
            Value::S(s) if s.is_zero() => vec![Scalar::zero(); dim],
            _ => return Err(EvalError::NotLinear(self.to_string())),
        };
        if v.iter().all(Scalar::is_finite) {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Plain `f64` evaluation with IEEE semantics throughout.
    pub fn eval_f64(&self, vars: &dyn Fn(&str) -> Option<f64>) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Num(r) => crate::rational::rat_to_f64(r),
            Expr::Pi => std::f64::consts::PI,
            Expr::Var(n) => vars(n).ok_or_else(|| EvalError::Unbound(n.clone()))?,
            Expr::Neg(a) => -a.eval_f64(vars)?,
            Expr::Add(a, b) => a.eval_f64(vars)? + b.eval_f64(vars)?,
            Expr::Sub(a, b) => a.eval_f64(vars)? - b.eval_f64(vars)?,
            Expr::Mul(a, b) => a.eval_f64(vars)? * b.eval_f64(vars)?,
            Expr::Div(a, b) => a.eval_f64(vars)? / b.eval_f64(vars)?,
            Expr::Pow(a, k) => a.eval_f64(vars)?.powi(*k),
            Expr::Call(f, a) => f.apply_f64(a.eval_f64(vars)?),
        })
    }

    /// Names of all variables, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) | Expr::Pi => {}
            Expr::Var(n) => {
                out.insert(n.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replaces variables for which `f` returns `Some`, folding constants
    /// on the way back up.
    pub fn substitute(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Num(_) | Expr::Pi => self.clone(),
            Expr::Var(n) => f(n).unwrap_or_else(|| self.clone()),
            Expr::Neg(a) => -a.substitute(f),
            Expr::Add(a, b) => a.substitute(f) + b.substitute(f),
            Expr::Sub(a, b) => a.substitute(f) - b.substitute(f),
            Expr::Mul(a, b) => a.substitute(f) * b.substitute(f),
            Expr::Div(a, b) => a.substitute(f) / b.substitute(f),
            Expr::Pow(a, k) => Expr::pow(a.substitute(f), *k),
            Expr::Call(func, a) => Expr::call(*func, a.substitute(f)),
        }
    }

    pub fn num(r: Rational) -> Expr {
        Expr::Num(r)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Num(Rational::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn as_num(&self) -> Option<&Rational> {
        match self {
            Expr::Num(r) => Some(r),
            _ => None,
        }
    }

    fn is_num(&self, v: i64) -> bool {
        self.as_num().is_some_and(|r| *r == Rational::from_integer(v.into()))
    }

    pub fn pow(a: Expr, k: i32) -> Expr {
        match (a, k) {
            (_, 0) => Expr::int(1),
            (a, 1) => a,
            (Expr::Num(x), k) if !(x.is_zero() && k < 0) => Expr::Num(num_traits::Pow::pow(&x, k)),
            (a, k) => Expr::Pow(Box::new(a), k),
        }
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        if let Expr::Num(r) = &a {
            if let Ok(Some(v)) = f.apply_exact(r) {
                return Expr::Num(v);
            }
        }
        Expr::Call(f, Box::new(a))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(r) if r.is_negative() || !r.denom().is_one() => 2,
            _ => 5,
        }
    }
}

// Arithmetic on expressions folds constants and drops neutral elements.
impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Num(r) => Expr::Num(-r),
            Expr::Neg(inner) => *inner,
            a => Expr::Neg(Box::new(a)),
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, b: Expr) -> Expr {
        match (self, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
            (a, b) if a.is_num(0) => b,
            (a, b) if b.is_num(0) => a,
            (a, Expr::Neg(b)) => Expr::Sub(Box::new(a), b),
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, b: Expr) -> Expr {
        match (self, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
            (a, b) if b.is_num(0) => a,
            (a, b) if a.is_num(0) => -b,
            (a, Expr::Neg(b)) => Expr::Add(Box::new(a), b),
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, b: Expr) -> Expr {
        match (self, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
            (a, b) if a.is_num(0) || b.is_num(0) => Expr::int(0),
            (a, b) if a.is_num(1) => b,
            (a, b) if b.is_num(1) => a,
            (a, b) if a.is_num(-1) => -b,
            (a, b) if b.is_num(-1) => -a,
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, b: Expr) -> Expr {
        match (self, b) {
            (Expr::Num(x), Expr::Num(y)) if !y.is_zero() => Expr::Num(x / y),
            (a, b) if a.is_num(0) && !b.is_num(0) => Expr::int(0),
            (a, b) if b.is_num(1) => a,
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }
}

impl Condition {
    pub fn holds(&self, scope: &dyn Scope) -> Result<bool, EvalError> {
        let (a, b) = (self.lhs.eval(scope)?, self.rhs.eval(scope)?);
        let ord = a.compare(&b);
        use std::cmp::Ordering::*;
        Ok(match self.op {
            CmpOp::Eq => ord == Equal,
            CmpOp::Ne => ord != Equal,
            CmpOp::Lt => ord == Less,
            CmpOp::Le => ord != Greater,
            CmpOp::Gt => ord == Greater,
            CmpOp::Ge => ord != Less,
        })
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => f.write_str(&rat_to_string(r)),
            Expr::Pi => f.write_str("pi"),
            Expr::Var(n) => f.write_str(n),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 3)
            }
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" + ")?;
                write_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" - ")?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("*")?;
                write_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("/")?;
                write_child(f, b, 4)
            }
            Expr::Pow(a, k) => {
                write_child(f, a, 5)?;
                if *k < 0 {
                    write!(f, "^({k})")
                } else {
                    write!(f, "^{k}")
                }
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
