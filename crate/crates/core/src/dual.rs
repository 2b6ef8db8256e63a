//! Forward-mode dual numbers carrying a full gradient with respect to the
//! chart coordinates.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// A value together with its gradient `(d/dx^1, ..., d/dx^n)` at the
/// evaluation point.
#[derive(Clone, Debug, PartialEq)]
pub struct DualVector<T> {
    value: T,
    gradient: Vec<T>,
}

impl<T: Scalar> DualVector<T> {
    pub fn new(value: T, gradient: Vec<T>) -> Self {
        Self { value, gradient }
    }

    /// A constant: zero gradient of length `dim`.
    pub fn constant(value: T, dim: usize) -> Self {
        Self {
            value,
            gradient: vec![T::zero(); dim],
        }
    }

    /// The coordinate function `x^index`, whose gradient is a basis vector.
    pub fn variable(value: T, index: usize, dim: usize) -> Self {
        let mut gradient = vec![T::zero(); dim];
        gradient[index] = T::one();
        Self { value, gradient }
    }

    pub fn value(&self) -> T {
        self.value
    }

    pub fn gradient(&self) -> &[T] {
        &self.gradient
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn into_parts(self) -> (T, Vec<T>) {
        (self.value, self.gradient)
    }

    /// Directional derivative `v . grad`.
    pub fn directional(&self, direction: &[T]) -> T {
        self.gradient
            .iter()
            .zip(direction)
            .fold(T::zero(), |acc, (g, v)| acc + *g * *v)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.gradient.iter().all(|g| g.is_finite())
    }

    /// Chain rule: `f(u)` with `f'(u)` supplied by the caller.
    fn chain(&self, value: T, derivative: T) -> Self {
        Self {
            value,
            gradient: self.gradient.iter().map(|g| *g * derivative).collect(),
        }
    }

    pub fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, T::one() / (s + s))
    }

    pub fn sin(&self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }

    pub fn cos(&self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }

    pub fn ln(&self) -> Self {
        self.chain(self.value.ln(), T::one() / self.value)
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(T::one(), self.dim());
        }
        let d = T::lit(n as f64) * self.value.powi(n - 1);
        self.chain(self.value.powi(n), d)
    }

    pub fn powf(&self, c: T) -> Self {
        if c == T::zero() {
            return Self::constant(T::one(), self.dim());
        }
        let d = c * self.value.powf(c - T::one());
        self.chain(self.value.powf(c), d)
    }

    fn zip_with(&self, other: &Self, value: T, f: impl Fn(T, T) -> T) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            value,
            gradient: self
                .gradient
                .iter()
                .zip(&other.gradient)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl<T: Scalar> Add for &DualVector<T> {
    type Output = DualVector<T>;
    fn add(self, rhs: Self) -> DualVector<T> {
        self.zip_with(rhs, self.value + rhs.value, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for &DualVector<T> {
    type Output = DualVector<T>;
    fn sub(self, rhs: Self) -> DualVector<T> {
        self.zip_with(rhs, self.value - rhs.value, |a, b| a - b)
    }
}

impl<T: Scalar> Mul for &DualVector<T> {
    type Output = DualVector<T>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> DualVector<T> {
        let (u, v) = (self.value, rhs.value);
        self.zip_with(rhs, u * v, |du, dv| du * v + u * dv)
    }
}

impl<T: Scalar> Div for &DualVector<T> {
    type Output = DualVector<T>;
    fn div(self, rhs: Self) -> DualVector<T> {
        let (u, v) = (self.value, rhs.value);
        let v2 = v * v;
        self.zip_with(rhs, u / v, |du, dv| (du * v - u * dv) / v2)
    }
}

impl<T: Scalar> Neg for &DualVector<T> {
    type Output = DualVector<T>;
    fn neg(self) -> DualVector<T> {
        DualVector {
            value: -self.value,
            gradient: self.gradient.iter().map(|g| -*g).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<T: Scalar> $tr for DualVector<T> {
            type Output = DualVector<T>;
            fn $m(self, rhs: Self) -> DualVector<T> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl<T: Scalar> Neg for DualVector<T> {
    type Output = DualVector<T>;
    fn neg(self) -> DualVector<T> {
        -&self
    }
}

impl<T: Scalar> Mul<T> for &DualVector<T> {
    type Output = DualVector<T>;
    fn mul(self, rhs: T) -> DualVector<T> {
        self.chain(self.value * rhs, rhs)
    }
}
