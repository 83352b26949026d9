//! Scalar-field expressions over named coordinates.
//!
//! Text is parsed into an [`Expr`] tree, bound against an ordered list of
//! coordinate names into a [`ScalarField`], and evaluated either as a plain
//! value or with exact first/second derivatives carried in forward mode.

mod diff;
mod jet;
mod parse;

use std::fmt;

pub use jet::{Dual, Jet2, Number};

/// Tree builders with light constant folding.
pub mod build {
    pub use super::diff::{add, div, mul, neg, sub};
}

use crate::error::{EvalError, ParseError};

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

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Pow,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "pow" => Func::Pow,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Pow => "pow",
            Func::Abs => "abs",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }
}

/// Abstract syntax tree of a scalar expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 5;

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Num(v) if v.is_sign_negative() => NEG_PRECEDENCE,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => ATOM_PRECEDENCE,
            Expr::Neg(_) => NEG_PRECEDENCE,
            Expr::Binary(op, ..) => op.precedence(),
        }
    }

    /// Names of all referenced coordinates, in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Num(_) => {}
                Expr::Var(n) => {
                    if !out.contains(n) {
                        out.push(n.clone());
                    }
                }
                Expr::Neg(a) => walk(a, out),
                Expr::Binary(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Expr::Call(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn depends_on(&self, name: &str) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(n) => n == name,
            Expr::Neg(a) => a.depends_on(name),
            Expr::Binary(_, a, b) => a.depends_on(name) || b.depends_on(name),
            Expr::Call(_, args) => args.iter().any(|a| a.depends_on(name)),
        }
    }

    /// Symbolic partial derivative with light constant folding.
    pub fn derivative(&self, name: &str) -> Expr {
        diff::derivative(self, name)
    }

    /// Replaces every reference to `name` by `with`.
    pub fn substitute(&self, name: &str, with: &Expr) -> Expr {
        match self {
            Expr::Var(n) if n == name => with.clone(),
            Expr::Num(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(name, with))),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Box::new(a.substitute(name, with)), Box::new(b.substitute(name, with)))
            }
            Expr::Call(f, args) => Expr::Call(*f, args.iter().map(|a| a.substitute(name, with)).collect()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(n) => f.write_str(n),
            Expr::Neg(a) => {
                f.write_str("-")?;
                child(f, a, a.precedence() < NEG_PRECEDENCE)
            }
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                let (left_paren, right_paren) = if *op == BinOp::Pow {
                    (a.precedence() <= p, b.precedence() < NEG_PRECEDENCE)
                } else {
                    (a.precedence() < p, b.precedence() <= p)
                };
                child(f, a, left_paren)?;
                write!(f, " {} ", op.symbol())?;
                child(f, b, right_paren)
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse::parse(text)
}

/// Ordered coordinate assignment; the order fixes gradient and Hessian indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    names: Vec<String>,
    values: Vec<f64>,
}

impl Binding {
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, f64)>) -> Result<Self, EvalError> {
        let mut names = Vec::new();
        let mut values = Vec::new();
        for (n, v) in pairs {
            let n = n.into();
            if names.contains(&n) {
                return Err(EvalError::DuplicateName(n));
            }
            names.push(n);
            values.push(v);
        }
        Ok(Binding { names, values })
    }

    pub fn from_parts(names: &[String], values: &[f64]) -> Result<Self, EvalError> {
        if names.len() != values.len() {
            return Err(EvalError::Arity { expected: names.len(), found: values.len() });
        }
        Binding::new(names.iter().cloned().zip(values.iter().copied()))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.values[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), EvalError> {
        let i = self.index_of(name).ok_or_else(|| EvalError::Unbound(name.to_string()))?;
        self.values[i] = value;
        Ok(())
    }

    /// Values of `names` in the given order.
    pub fn select(&self, names: &[String]) -> Result<Vec<f64>, EvalError> {
        names.iter().map(|n| self.get(n).ok_or_else(|| EvalError::Unbound(n.clone()))).collect()
    }
}

#[derive(Debug, Clone)]
enum Node {
    Const(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    // The text of fallible nodes is kept for domain-error reports.
    Div(Box<Node>, Box<Node>, String),
    Pow(Box<Node>, Box<Node>, String),
    Exp(Box<Node>, String),
    Ln(Box<Node>, String),
    Sqrt(Box<Node>, String),
    Abs(Box<Node>),
}

fn compile(e: &Expr, coords: &[String]) -> Result<Node, EvalError> {
    let b = |x: &Expr| compile(x, coords).map(Box::new);
    Ok(match e {
        Expr::Num(v) => Node::Const(*v),
        Expr::Var(n) => Node::Var(coords.iter().position(|c| c == n).ok_or_else(|| EvalError::Unbound(n.clone()))?),
        Expr::Neg(a) => Node::Neg(b(a)?),
        Expr::Binary(op, x, y) => match op {
            BinOp::Add => Node::Add(b(x)?, b(y)?),
            BinOp::Sub => Node::Sub(b(x)?, b(y)?),
            BinOp::Mul => Node::Mul(b(x)?, b(y)?),
            BinOp::Div => Node::Div(b(x)?, b(y)?, e.to_string()),
            BinOp::Pow => Node::Pow(b(x)?, b(y)?, e.to_string()),
        },
        Expr::Call(f, args) => match f {
            Func::Exp => Node::Exp(b(&args[0])?, e.to_string()),
            Func::Ln => Node::Ln(b(&args[0])?, e.to_string()),
            Func::Sqrt => Node::Sqrt(b(&args[0])?, e.to_string()),
            Func::Abs => Node::Abs(b(&args[0])?),
            Func::Pow => Node::Pow(b(&args[0])?, b(&args[1])?, e.to_string()),
        },
    })
}

fn domain(expr: &str, value: f64, reason: &'static str) -> EvalError {
    EvalError::Domain { expr: expr.to_string(), value, reason }
}

fn finite<N: Number>(x: N, expr: &str) -> Result<N, EvalError> {
    if x.value().is_finite() {
        Ok(x)
    } else {
        Err(domain(expr, x.value(), "non-finite result"))
    }
}

fn run<N: Number>(node: &Node, inputs: &[N], dim: usize) -> Result<N, EvalError> {
    Ok(match node {
        Node::Const(v) => N::constant(*v, dim),
        Node::Var(i) => inputs[*i].clone(),
        Node::Neg(a) => run(a, inputs, dim)?.neg(),
        Node::Add(a, b) => run(a, inputs, dim)?.add(&run(b, inputs, dim)?),
        Node::Sub(a, b) => run(a, inputs, dim)?.sub(&run(b, inputs, dim)?),
        Node::Mul(a, b) => run(a, inputs, dim)?.mul(&run(b, inputs, dim)?),
        Node::Div(a, b, text) => {
            let num = run(a, inputs, dim)?;
            let den = run(b, inputs, dim)?;
            let d = den.value();
            if d == 0.0 {
                return Err(domain(text, d, "division by zero"));
            }
            let inv = den.chain(1.0 / d, -1.0 / (d * d), 2.0 / (d * d * d));
            finite(num.mul(&inv), text)?
        }
        Node::Pow(a, b, text) => {
            let base = run(a, inputs, dim)?;
            let exponent = run(b, inputs, dim)?;
            power(&base, &exponent, text)?
        }
        Node::Exp(a, text) => {
            let x = run(a, inputs, dim)?;
            let e = x.value().exp();
            finite(x.chain(e, e, e), text)?
        }
        Node::Ln(a, text) => {
            let x = run(a, inputs, dim)?;
            let v = x.value();
            if v <= 0.0 {
                return Err(domain(text, v, "logarithm of a non-positive value"));
            }
            x.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
        }
        Node::Sqrt(a, text) => {
            let x = run(a, inputs, dim)?;
            let v = x.value();
            if v < 0.0 {
                return Err(domain(text, v, "square root of a negative value"));
            }
            if v == 0.0 {
                if !x.is_constant() {
                    return Err(domain(text, v, "square root is not differentiable at zero"));
                }
                return Ok(N::constant(0.0, dim));
            }
            let s = v.sqrt();
            x.chain(s, 0.5 / s, -0.25 / (s * v))
        }
        // Derivative taken as zero at the kink.
        Node::Abs(a) => {
            let x = run(a, inputs, dim)?;
            let v = x.value();
            let sign = if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else {
                0.0
            };
            x.chain(v.abs(), sign, 0.0)
        }
    })
}

/// Integer exponents accept any base; anything else needs a positive base.
fn power<N: Number>(base: &N, exponent: &N, text: &str) -> Result<N, EvalError> {
    let b = base.value();
    let p = exponent.value();
    if exponent.is_constant() && p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
        let n = p as i32;
        if n == 0 {
            return Ok(base.chain(1.0, 0.0, 0.0));
        }
        if b == 0.0 && n < 0 {
            return Err(domain(text, b, "negative power of zero"));
        }
        let nf = n as f64;
        let f = b.powi(n);
        let d1 = nf * b.powi(n - 1);
        let d2 = if n == 1 { 0.0 } else { nf * (nf - 1.0) * b.powi(n - 2) };
        return finite(base.chain(f, d1, d2), text);
    }
    if b <= 0.0 {
        return Err(domain(text, b, "non-integer power of a non-positive base"));
    }
    let ln_base = base.chain(b.ln(), 1.0 / b, -1.0 / (b * b));
    let arg = exponent.mul(&ln_base);
    let e = arg.value().exp();
    finite(arg.chain(e, e, e), text)
}

/// An expression bound to an ordered coordinate list.
#[derive(Debug, Clone)]
pub struct ScalarField {
    expr: Expr,
    coords: Vec<String>,
    node: Node,
}

impl ScalarField {
    pub fn new(expr: Expr, coords: &[String]) -> Result<Self, EvalError> {
        let node = compile(&expr, coords)?;
        Ok(ScalarField { expr, coords: coords.to_vec(), node })
    }

    pub fn parse(text: &str, coords: &[String]) -> Result<Self, crate::Error> {
        Ok(ScalarField::new(parse(text)?, coords)?)
    }

    pub fn constant(v: f64, coords: &[String]) -> Self {
        ScalarField { expr: Expr::Num(v), coords: coords.to_vec(), node: Node::Const(v) }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.expr.depends_on(name)
    }

    /// Rebinds the same expression against another coordinate list.
    pub fn rebind(&self, coords: &[String]) -> Result<Self, EvalError> {
        ScalarField::new(self.expr.clone(), coords)
    }

    /// Symbolic partial derivative, bound to the same coordinates.
    pub fn partial(&self, name: &str) -> Result<ScalarField, EvalError> {
        if !self.coords.iter().any(|c| c == name) {
            return Err(EvalError::Unbound(name.to_string()));
        }
        ScalarField::new(self.expr.derivative(name), &self.coords)
    }

    fn check(&self, x: usize) -> Result<(), EvalError> {
        if x != self.coords.len() {
            return Err(EvalError::Arity { expected: self.coords.len(), found: x });
        }
        Ok(())
    }

    /// Evaluates with caller-seeded numbers; `dim` is their derivative width.
    pub fn eval_number<N: Number>(&self, inputs: &[N], dim: usize) -> Result<N, EvalError> {
        self.check(inputs.len())?;
        finite(run(&self.node, inputs, dim)?, &self.expr.to_string())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64, EvalError> {
        self.eval_number(x, 0)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Dual, EvalError> {
        let n = x.len();
        let seeds: Vec<Dual> = x.iter().enumerate().map(|(i, v)| Dual::variable(*v, i, n)).collect();
        self.eval_number(&seeds, n)
    }

    pub fn jet(&self, x: &[f64]) -> Result<Jet2, EvalError> {
        let n = x.len();
        let seeds: Vec<Jet2> = x.iter().enumerate().map(|(i, v)| Jet2::variable(*v, i, n)).collect();
        self.eval_number(&seeds, n)
    }

    /// Jet with derivatives only along the coordinates listed in `wrt`.
    pub fn jet_wrt(&self, x: &[f64], wrt: &[usize]) -> Result<Jet2, EvalError> {
        let m = wrt.len();
        let seeds: Vec<Jet2> = x
            .iter()
            .enumerate()
            .map(|(i, v)| match wrt.iter().position(|w| *w == i) {
                Some(k) => Jet2::variable(*v, k, m),
                None => Jet2::constant(*v, m),
            })
            .collect();
        self.eval_number(&seeds, m)
    }
}

fn bind_for(e: &Expr, b: &Binding) -> Result<ScalarField, EvalError> {
    ScalarField::new(e.clone(), b.names())
}

fn wrt_indices(b: &Binding, wrt: &[&str]) -> Result<Vec<usize>, EvalError> {
    wrt.iter().map(|w| b.index_of(w).ok_or_else(|| EvalError::Unbound(w.to_string()))).collect()
}

pub fn eval(e: &Expr, b: &Binding) -> Result<f64, EvalError> {
    bind_for(e, b)?.value(b.values())
}

/// Exact gradient ordered as `wrt`.
pub fn grad(e: &Expr, b: &Binding, wrt: &[&str]) -> Result<Vec<f64>, EvalError> {
    let idx = wrt_indices(b, wrt)?;
    let f = bind_for(e, b)?;
    let seeds: Vec<Dual> = b
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| match idx.iter().position(|w| *w == i) {
            Some(k) => Dual::variable(*v, k, idx.len()),
            None => Dual::constant(*v, idx.len()),
        })
        .collect();
    Ok(f.eval_number(&seeds, idx.len())?.g)
}

/// Exact Hessian ordered as `wrt`; symmetric bit for bit.
pub fn hessian(e: &Expr, b: &Binding, wrt: &[&str]) -> Result<Vec<Vec<f64>>, EvalError> {
    let idx = wrt_indices(b, wrt)?;
    Ok(bind_for(e, b)?.jet_wrt(b.values(), &idx)?.hessian_rows())
}
