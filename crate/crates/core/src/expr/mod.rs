//! Symbolic expression trees over chart coordinates.
//!
//! [`Expr`] is an immutable tree shared through `Arc`, so clones are cheap and
//! values can cross thread boundaries freely. Differentiation is exact and
//! symbolic; evaluation is plain IEEE double recursion against a [`Binding`].
//! Simplification is deliberately shallow (constant folding, 0/1 identities,
//! double negation) — correctness is judged by evaluation, not by normal form.

mod parse;

pub use parse::parse;

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Known unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Debug, PartialEq)]
enum Node {
    Const(f64),
    Var(String),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, Expr),
    Neg(Expr),
    Call(Func, Expr),
}

/// Immutable symbolic expression. Cheap to clone.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr(Arc<Node>);

/// Variable binding for evaluation: parallel name/value slices.
#[derive(Debug, Clone, Copy)]
pub struct Binding<'a> {
    names: &'a [String],
    values: &'a [f64],
}

impl<'a> Binding<'a> {
    pub fn new(names: &'a [String], values: &'a [f64]) -> Self {
        debug_assert_eq!(names.len(), values.len());
        Binding { names, values }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }
}

impl Expr {
    fn new(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn constant(c: f64) -> Expr {
        Expr::new(Node::Const(c))
    }

    pub fn zero() -> Expr {
        Expr::constant(0.0)
    }

    pub fn one() -> Expr {
        Expr::constant(1.0)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::new(Node::Var(name.into()))
    }

    pub fn as_const(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Expr::constant(x + y);
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        Expr::new(Node::Add(a, b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Expr::constant(x - y);
        }
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        Expr::new(Node::Sub(a, b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Expr::constant(x * y);
        }
        if a.is_zero() || b.is_zero() {
            return Expr::zero();
        }
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        Expr::new(Node::Mul(a, b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if b.is_one() {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if y != 0.0 {
                return Expr::constant(x / y);
            }
        }
        Expr::new(Node::Div(a, b))
    }

    pub fn pow(base: Expr, exponent: Expr) -> Expr {
        if exponent.is_zero() {
            return Expr::one();
        }
        if exponent.is_one() {
            return base;
        }
        if let (Some(x), Some(y)) = (base.as_const(), exponent.as_const()) {
            let v = x.powf(y);
            if v.is_finite() {
                return Expr::constant(v);
            }
        }
        Expr::new(Node::Pow(base, exponent))
    }

    pub fn neg(a: Expr) -> Expr {
        if let Some(x) = a.as_const() {
            return Expr::constant(-x);
        }
        if let Node::Neg(ref inner) = *a.0 {
            return inner.clone();
        }
        Expr::new(Node::Neg(a))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        if let Some(x) = arg.as_const() {
            let v = f.apply(x);
            if v.is_finite() {
                return Expr::constant(v);
            }
        }
        Expr::new(Node::Call(f, arg))
    }

    /// Evaluate against a binding. Unbound variables and singular points
    /// (division by zero, log of a non-positive number, ...) are errors
    /// reported with the offending subterm.
    pub fn eval(&self, binding: &Binding) -> Result<f64> {
        let v = match *self.0 {
            Node::Const(c) => c,
            Node::Var(ref name) => binding.get(name).ok_or_else(|| Error::UnboundVariable {
                name: name.clone(),
            })?,
            Node::Add(ref a, ref b) => a.eval(binding)? + b.eval(binding)?,
            Node::Sub(ref a, ref b) => a.eval(binding)? - b.eval(binding)?,
            Node::Mul(ref a, ref b) => a.eval(binding)? * b.eval(binding)?,
            Node::Div(ref a, ref b) => {
                let num = a.eval(binding)?;
                let den = b.eval(binding)?;
                if den == 0.0 {
                    return Err(self.domain_error("division by zero"));
                }
                num / den
            }
            Node::Pow(ref a, ref b) => {
                let base = a.eval(binding)?;
                let exponent = b.eval(binding)?;
                let v = base.powf(exponent);
                if !v.is_finite() {
                    return Err(self.domain_error(format!(
                        "{base}^{exponent} is not finite"
                    )));
                }
                v
            }
            Node::Neg(ref a) => -a.eval(binding)?,
            Node::Call(f, ref a) => {
                let x = a.eval(binding)?;
                match f {
                    Func::Log if x <= 0.0 => {
                        return Err(self.domain_error(format!("log of non-positive {x}")))
                    }
                    Func::Sqrt if x < 0.0 => {
                        return Err(self.domain_error(format!("sqrt of negative {x}")))
                    }
                    _ => {}
                }
                f.apply(x)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.domain_error("non-finite result"))
        }
    }

    fn domain_error(&self, message: impl Into<String>) -> Error {
        Error::EvalDomain {
            subterm: self.to_string(),
            message: message.into(),
        }
    }

    /// Exact symbolic partial derivative with respect to `v`.
    pub fn diff(&self, v: &str) -> Expr {
        match *self.0 {
            Node::Const(_) => Expr::zero(),
            Node::Var(ref name) => {
                if name == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(ref a, ref b) => Expr::add(a.diff(v), b.diff(v)),
            Node::Sub(ref a, ref b) => Expr::sub(a.diff(v), b.diff(v)),
            Node::Mul(ref a, ref b) => Expr::add(
                Expr::mul(a.diff(v), b.clone()),
                Expr::mul(a.clone(), b.diff(v)),
            ),
            Node::Div(ref a, ref b) => {
                // (a'b - ab') / b^2
                let num = Expr::sub(
                    Expr::mul(a.diff(v), b.clone()),
                    Expr::mul(a.clone(), b.diff(v)),
                );
                Expr::div(num, Expr::pow(b.clone(), Expr::constant(2.0)))
            }
            Node::Pow(ref a, ref b) => {
                if let Some(c) = b.as_const() {
                    // c * a^(c-1) * a'
                    Expr::mul(
                        Expr::mul(
                            Expr::constant(c),
                            Expr::pow(a.clone(), Expr::constant(c - 1.0)),
                        ),
                        a.diff(v),
                    )
                } else {
                    // a^b * (b' log a + b a'/a)
                    let factor = Expr::add(
                        Expr::mul(b.diff(v), Expr::call(Func::Log, a.clone())),
                        Expr::div(Expr::mul(b.clone(), a.diff(v)), a.clone()),
                    );
                    Expr::mul(self.clone(), factor)
                }
            }
            Node::Neg(ref a) => Expr::neg(a.diff(v)),
            Node::Call(f, ref a) => {
                let inner = a.diff(v);
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, a.clone()),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, a.clone())),
                    // 1 / cos^2
                    Func::Tan => Expr::div(
                        Expr::one(),
                        Expr::pow(Expr::call(Func::Cos, a.clone()), Expr::constant(2.0)),
                    ),
                    Func::Exp => Expr::call(Func::Exp, a.clone()),
                    Func::Log => Expr::div(Expr::one(), a.clone()),
                    Func::Sqrt => Expr::div(
                        Expr::one(),
                        Expr::mul(Expr::constant(2.0), Expr::call(Func::Sqrt, a.clone())),
                    ),
                };
                Expr::mul(outer, inner)
            }
        }
    }

    /// Simultaneous substitution of variables by expressions. Variables not
    /// present in `replacements` are kept.
    pub fn subst(&self, replacements: &[(String, Expr)]) -> Expr {
        match *self.0 {
            Node::Const(_) => self.clone(),
            Node::Var(ref name) => replacements
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, e)| e.clone())
                .unwrap_or_else(|| self.clone()),
            Node::Add(ref a, ref b) => Expr::add(a.subst(replacements), b.subst(replacements)),
            Node::Sub(ref a, ref b) => Expr::sub(a.subst(replacements), b.subst(replacements)),
            Node::Mul(ref a, ref b) => Expr::mul(a.subst(replacements), b.subst(replacements)),
            Node::Div(ref a, ref b) => Expr::div(a.subst(replacements), b.subst(replacements)),
            Node::Pow(ref a, ref b) => Expr::pow(a.subst(replacements), b.subst(replacements)),
            Node::Neg(ref a) => Expr::neg(a.subst(replacements)),
            Node::Call(f, ref a) => Expr::call(f, a.subst(replacements)),
        }
    }

    /// Collect the variable names occurring in the tree, in first-seen order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match *self.0 {
            Node::Const(_) => {}
            Node::Var(ref name) => {
                if !out.iter().any(|n| n == name) {
                    out.push(name.clone());
                }
            }
            Node::Add(ref a, ref b)
            | Node::Sub(ref a, ref b)
            | Node::Mul(ref a, ref b)
            | Node::Div(ref a, ref b)
            | Node::Pow(ref a, ref b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Node::Neg(ref a) | Node::Call(_, ref a) => a.collect_vars(out),
        }
    }

    fn precedence(&self) -> u8 {
        match *self.0 {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(..) => 3,
            Node::Pow(..) => 4,
            Node::Const(c) if c < 0.0 => 3,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(ref name) => write!(f, "{name}"),
            Node::Add(ref a, ref b) => {
                a.fmt_child(f, 1)?;
                write!(f, " + ")?;
                b.fmt_child(f, 2)
            }
            Node::Sub(ref a, ref b) => {
                a.fmt_child(f, 1)?;
                write!(f, " - ")?;
                b.fmt_child(f, 2)
            }
            Node::Mul(ref a, ref b) => {
                a.fmt_child(f, 2)?;
                write!(f, "*")?;
                b.fmt_child(f, 3)
            }
            Node::Div(ref a, ref b) => {
                a.fmt_child(f, 2)?;
                write!(f, "/")?;
                b.fmt_child(f, 3)
            }
            Node::Pow(ref a, ref b) => {
                a.fmt_child(f, 5)?;
                write!(f, "^")?;
                b.fmt_child(f, 4)
            }
            Node::Neg(ref a) => {
                // unary minus binds tighter than '^' in the grammar, so a
                // power operand needs parentheses to survive a round trip
                write!(f, "-")?;
                a.fmt_child(f, 5)
            }
            Node::Call(func, ref a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::div(self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}
