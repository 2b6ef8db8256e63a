use thiserror::Error;

use super::{Expr, Func, Node};
use crate::dual::DualVector;
use crate::scalar::{to_f64_vec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainErrorKind {
    DivisionByZero,
    SqrtOfNegative,
    LogOfNonPositive,
    /// Negative base with a non-integer exponent, or zero to a negative power.
    InvalidPower,
    /// Overflow or an infinite derivative (e.g. `sqrt` at 0).
    NonFinite,
    /// The point has fewer entries than the expression references.
    PointDimension,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("domain error ({kind:?}) in `{subexpression}` at {point:?}")]
pub struct EvalError {
    pub kind: DomainErrorKind,
    pub subexpression: String,
    pub point: Vec<f64>,
}

/// Anything the expression walker can compute with.
trait Carrier<T: Scalar>: Sized {
    fn constant(v: T, dim: usize) -> Self;
    fn coordinate(v: T, index: usize, dim: usize) -> Self;
    fn value(&self) -> T;
    fn finite(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn powf(&self, c: T) -> Self;
    fn func(&self, f: Func) -> Self;
}

impl<T: Scalar> Carrier<T> for T {
    fn constant(v: T, _: usize) -> Self {
        v
    }
    fn coordinate(v: T, _: usize, _: usize) -> Self {
        v
    }
    fn value(&self) -> T {
        *self
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn div(&self, o: &Self) -> Self {
        *self / *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn powi(&self, n: i32) -> Self {
        Float::powi(*self, n)
    }
    fn powf(&self, c: T) -> Self {
        Float::powf(*self, c)
    }
    fn func(&self, f: Func) -> Self {
        match f {
            Func::Sqrt => self.sqrt(),
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Exp => self.exp(),
            Func::Ln => self.ln(),
        }
    }
}

use num_traits::Float;

impl<T: Scalar> Carrier<T> for DualVector<T> {
    fn constant(v: T, dim: usize) -> Self {
        DualVector::constant(v, dim)
    }
    fn coordinate(v: T, index: usize, dim: usize) -> Self {
        DualVector::variable(v, index, dim)
    }
    fn value(&self) -> T {
        DualVector::value(self)
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn powi(&self, n: i32) -> Self {
        DualVector::powi(self, n)
    }
    fn powf(&self, c: T) -> Self {
        DualVector::powf(self, c)
    }
    fn func(&self, f: Func) -> Self {
        match f {
            Func::Sqrt => self.sqrt(),
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Exp => self.exp(),
            Func::Ln => self.ln(),
        }
    }
}

struct Walker<'p, T> {
    point: &'p [T],
}

impl<T: Scalar> Walker<'_, T> {
    fn fail(&self, kind: DomainErrorKind, at: &Expr) -> EvalError {
        EvalError {
            kind,
            subexpression: at.to_string(),
            point: to_f64_vec(self.point),
        }
    }

    fn walk<C: Carrier<T>>(&self, e: &Expr) -> Result<C, EvalError> {
        let n = self.point.len();
        let out = match e.node() {
            Node::Num(v) => C::constant(T::lit(*v), n),
            Node::Coord { index, .. } => match self.point.get(*index) {
                Some(v) => C::coordinate(*v, *index, n),
                None => return Err(self.fail(DomainErrorKind::PointDimension, e)),
            },
            Node::Neg(a) => self.walk::<C>(a)?.neg(),
            Node::Add(a, b) => self.walk::<C>(a)?.add(&self.walk(b)?),
            Node::Sub(a, b) => self.walk::<C>(a)?.sub(&self.walk(b)?),
            Node::Mul(a, b) => self.walk::<C>(a)?.mul(&self.walk(b)?),
            Node::Div(a, b) => {
                let den: C = self.walk(b)?;
                if den.value() == T::zero() {
                    return Err(self.fail(DomainErrorKind::DivisionByZero, e));
                }
                self.walk::<C>(a)?.div(&den)
            }
            Node::Pow(a, c) => {
                let base: C = self.walk(a)?;
                let bv = base.value();
                let integral = c.fract() == 0.0 && c.abs() <= i32::MAX as f64;
                if (bv < T::zero() && !integral) || (bv == T::zero() && *c < 0.0) {
                    return Err(self.fail(DomainErrorKind::InvalidPower, e));
                }
                if integral {
                    base.powi(*c as i32)
                } else {
                    base.powf(T::lit(*c))
                }
            }
            Node::Call(f, a) => {
                let arg: C = self.walk(a)?;
                let v = arg.value();
                match f {
                    Func::Sqrt if v < T::zero() => {
                        return Err(self.fail(DomainErrorKind::SqrtOfNegative, e))
                    }
                    Func::Ln if v <= T::zero() => {
                        return Err(self.fail(DomainErrorKind::LogOfNonPositive, e))
                    }
                    _ => arg.func(*f),
                }
            }
        };
        if out.finite() {
            Ok(out)
        } else {
            Err(self.fail(DomainErrorKind::NonFinite, e))
        }
    }
}

impl Expr {
    /// Plain value at `point`.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T, EvalError> {
        Walker { point }.walk(self)
    }

    /// Value and exact gradient at `point`.
    pub fn eval_dual<T: Scalar>(&self, point: &[T]) -> Result<DualVector<T>, EvalError> {
        Walker { point }.walk(self)
    }
}
