//! Scalar-expression DSL: the component functions of every tensor field.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' ['-' | '+'] number)?
//! atom    := number | coord | func '(' sum ')' | '(' sum ')'
//! func    := sqrt | sin | cos | exp | ln
//! ```
//!
//! Exponents are literal numbers only. Identifiers resolve to chart coordinates
//! (or to named constants bound on the parser).

mod eval;
mod parse;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

pub use eval::{DomainErrorKind, EvalError};
pub use parse::{ParseError, ParseErrorKind, Parser};

/// Elementary functions available in the DSL.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Ln,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sqrt, Func::Sin, Func::Cos, Func::Exp, Func::Ln];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(f64),
    Coord { index: usize, name: Arc<str> },
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, f64),
    Call(Func, Expr),
}

/// Shared, immutable expression tree.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn new(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn num(v: f64) -> Self {
        Expr::new(Node::Num(v))
    }

    pub fn zero() -> Self {
        Expr::num(0.0)
    }

    pub fn one() -> Self {
        Expr::num(1.0)
    }

    pub fn coord(index: usize, name: impl Into<Arc<str>>) -> Self {
        Expr::new(Node::Coord {
            index,
            name: name.into(),
        })
    }

    pub fn as_num(&self) -> Option<f64> {
        match self.node() {
            Node::Num(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_num() == Some(0.0)
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord_index(&self) -> Option<usize> {
        match self.node() {
            Node::Num(_) => None,
            Node::Coord { index, .. } => Some(*index),
            Node::Neg(e) | Node::Pow(e, _) | Node::Call(_, e) => e.max_coord_index(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                match (a.max_coord_index(), b.max_coord_index()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    pub fn pow(&self, exponent: f64) -> Expr {
        match (self.as_num(), exponent) {
            (_, e) if e == 1.0 => self.clone(),
            (Some(v), e) => Expr::num(v.powf(e)),
            _ => Expr::new(Node::Pow(self.clone(), exponent)),
        }
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::new(Node::Call(func, arg))
    }

    /// Sum with constant folding; the empty sum is zero.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        terms.into_iter().fold(Expr::zero(), |acc, t| &acc + &t)
    }

    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Pow(..) => 4,
            Node::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => 3,
            _ => 5,
        }
    }
}

// The builders below fold literal constants (x*0, x+0, x*1, num op num). They
// keep derived fields such as J.X small; parsed trees are never folded.

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        match (self.as_num(), rhs.as_num()) {
            (Some(a), Some(b)) => Expr::num(a + b),
            (Some(a), _) if a == 0.0 => rhs.clone(),
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => Expr::new(Node::Add(self.clone(), rhs.clone())),
        }
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        match (self.as_num(), rhs.as_num()) {
            (Some(a), Some(b)) => Expr::num(a - b),
            (Some(a), _) if a == 0.0 => -rhs,
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => Expr::new(Node::Sub(self.clone(), rhs.clone())),
        }
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        match (self.as_num(), rhs.as_num()) {
            (Some(a), Some(b)) => Expr::num(a * b),
            (Some(a), _) | (_, Some(a)) if a == 0.0 => Expr::zero(),
            (Some(a), _) if a == 1.0 => rhs.clone(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            _ => Expr::new(Node::Mul(self.clone(), rhs.clone())),
        }
    }
}

impl Div for &Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        match (self.as_num(), rhs.as_num()) {
            (Some(a), Some(b)) if b != 0.0 => Expr::num(a / b),
            (Some(a), _) if a == 0.0 => Expr::zero(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            _ => Expr::new(Node::Div(self.clone(), rhs.clone())),
        }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self.as_num() {
            Some(v) => Expr::num(-v),
            None => Expr::new(Node::Neg(self.clone())),
        }
    }
}

macro_rules! forward_expr_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr { (&self).$m(&rhs) }
        }
        impl $tr<f64> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: f64) -> Expr { self.$m(&Expr::num(rhs)) }
        }
        impl $tr<&Expr> for f64 {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr { (&Expr::num(self)).$m(rhs) }
        }
    )*};
}
forward_expr_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::num(v)
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        write!(f, "-{:?}", -v)
    } else {
        write!(f, "{v:?}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        let prec = self.precedence();
        match self.node() {
            Node::Num(v) => write_num(f, *v),
            Node::Coord { name, .. } => f.write_str(name),
            Node::Neg(e) => {
                f.write_str("-")?;
                child(f, e, e.precedence() < 3)
            }
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                let op = match self.node() {
                    Node::Add(..) => " + ",
                    Node::Sub(..) => " - ",
                    Node::Mul(..) => "*",
                    _ => "/",
                };
                child(f, a, a.precedence() < prec)?;
                f.write_str(op)?;
                child(f, b, b.precedence() <= prec)
            }
            Node::Pow(base, e) => {
                child(f, base, base.precedence() < 5)?;
                f.write_str("^")?;
                write_num(f, *e)
            }
            Node::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}
