//! Tensor fields on a single coordinate chart, Lie brackets and the
//! Nijenhuis tensor.
//!
//! All fields store their components as [`Expr`] trees. Derived fields such as
//! `J X` are built as new trees (products and sums of components), so their
//! derivatives come out of forward-mode AD exactly rather than by differencing.

use nalgebra::DMatrix;

use crate::dual::DualVector;
use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr, Parser};
use crate::linalg::{mat_vec, max_abs_vec, vec_sub};
use crate::metallic::MetallicParams;
use crate::scalar::Scalar;

/// A coordinate system `(x^1, ..., x^n)` with named coordinates.
#[derive(Clone, Debug)]
pub struct Chart {
    parser: Parser,
}

impl Chart {
    pub fn new<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        Ok(Chart {
            parser: Parser::new(coords).map_err(Error::Chart)?,
        })
    }

    /// Binds a named constant usable in component expressions (e.g. `rho`).
    pub fn with_constant(mut self, name: &str, value: f64) -> Self {
        self.parser = self.parser.with_constant(name, value);
        self
    }

    pub fn dim(&self) -> usize {
        self.parser.coords().len()
    }

    pub fn coords(&self) -> Vec<&str> {
        self.parser.coords().iter().map(|c| &**c).collect()
    }

    pub fn parser(&self) -> &Parser {
        &self.parser
    }

    pub fn parse(&self, src: &str) -> Result<Expr> {
        Ok(self.parser.parse(src)?)
    }

    pub fn coordinate(&self, index: usize) -> Expr {
        Expr::coord(index, self.parser.coords()[index].clone())
    }

    pub fn vector_field<S: AsRef<str>>(&self, components: &[S]) -> Result<VectorField> {
        let comps = components
            .iter()
            .map(|c| self.parse(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(self.dim(), comps)
    }

    /// Parses a (1,1)-tensor from rows: `rows[i][j]` is the component `A^i_j`.
    pub fn tensor11<S: AsRef<str>>(&self, rows: &[Vec<S>]) -> Result<TensorField11> {
        TensorField11::new(self.dim(), self.parse_square(rows)?)
    }

    pub fn metric<S: AsRef<str>>(&self, rows: &[Vec<S>]) -> Result<MetricField> {
        MetricField::new(self.dim(), self.parse_square(rows)?)
    }

    /// Parses `blocks[k][i][j]` as `Q^k_ij` (or `Gamma^k_ij`).
    pub fn tensor12<S: AsRef<str>>(&self, blocks: &[Vec<Vec<S>>]) -> Result<TensorField12> {
        let n = self.dim();
        if blocks.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: blocks.len(),
            });
        }
        let mut entries = Vec::with_capacity(n * n * n);
        for b in blocks {
            entries.extend(self.parse_square(b)?);
        }
        TensorField12::new(n, entries)
    }

    fn parse_square<S: AsRef<str>>(&self, rows: &[Vec<S>]) -> Result<Vec<Expr>> {
        let n = self.dim();
        if rows.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: rows.len(),
            });
        }
        let mut out = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            for s in row {
                out.push(self.parse(s.as_ref())?);
            }
        }
        Ok(out)
    }
}

fn check_coords(dim: usize, entries: &[Expr]) -> Result<()> {
    for e in entries {
        if let Some(i) = e.max_coord_index() {
            if i >= dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: i + 1,
                });
            }
        }
    }
    Ok(())
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// A vector field `X = X^i d/dx^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    components: Vec<Expr>,
}

impl VectorField {
    pub fn new(dim: usize, components: Vec<Expr>) -> Result<Self> {
        same_dim(dim, components.len())?;
        check_coords(dim, &components)?;
        Ok(VectorField { components })
    }

    /// The coordinate frame field `d/dx^index`.
    pub fn coordinate(index: usize, dim: usize) -> Self {
        VectorField {
            components: (0..dim)
                .map(|i| if i == index { Expr::one() } else { Expr::zero() })
                .collect(),
        }
    }

    pub fn frame(dim: usize) -> Vec<VectorField> {
        (0..dim).map(|i| Self::coordinate(i, dim)).collect()
    }

    pub fn constant(values: &[f64]) -> Self {
        VectorField {
            components: values.iter().map(|v| Expr::num(*v)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn eval<T: Scalar>(&self, p: &[T]) -> Result<Vec<T>, EvalError> {
        self.components.iter().map(|c| c.eval(p)).collect()
    }

    pub fn eval_dual<T: Scalar>(&self, p: &[T]) -> Result<Vec<DualVector<T>>, EvalError> {
        self.components.iter().map(|c| c.eval_dual(p)).collect()
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `f X` for a scalar field `f`.
    pub fn scale(&self, f: &Expr) -> VectorField {
        VectorField {
            components: self.components.iter().map(|c| f * c).collect(),
        }
    }

    /// Directional derivative `X(f)` at `p`.
    pub fn derivative_of<T: Scalar>(&self, f: &Expr, p: &[T]) -> Result<T> {
        let x = self.eval(p)?;
        Ok(f.eval_dual(p)?.directional(&x))
    }
}

/// A (1,1)-tensor field; column `j` is the image of `d/dx^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField11 {
    dim: usize,
    entries: Vec<Expr>,
}

impl TensorField11 {
    /// `entries` is row-major: `entries[i * dim + j] = A^i_j`.
    pub fn new(dim: usize, entries: Vec<Expr>) -> Result<Self> {
        same_dim(dim * dim, entries.len())?;
        check_coords(dim, &entries)?;
        Ok(TensorField11 { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Expr::one() } else { Expr::zero() })
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Expr::zero())
    }

    pub fn constant(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrix expected");
        Self::from_fn(m.nrows(), |i, j| Expr::num(m[(i, j)]))
    }

    fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Expr) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        TensorField11 { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    pub fn eval<T: Scalar>(&self, p: &[T]) -> Result<DMatrix<T>, EvalError> {
        let vals = self
            .entries
            .iter()
            .map(|e| e.eval(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DMatrix::from_row_slice(self.dim, self.dim, &vals))
    }

    /// The vector field `A X`, as derived expressions.
    pub fn apply_field(&self, x: &VectorField) -> VectorField {
        debug_assert_eq!(self.dim, x.dim());
        let n = self.dim;
        VectorField {
            components: (0..n)
                .map(|i| Expr::sum((0..n).map(|j| self.entry(i, j) * &x.components[j])))
                .collect(),
        }
    }

    /// `self . other`.
    pub fn compose(&self, other: &TensorField11) -> TensorField11 {
        let n = self.dim;
        Self::from_fn(n, |i, j| {
            Expr::sum((0..n).map(|k| self.entry(i, k) * other.entry(k, j)))
        })
    }

    pub fn add(&self, other: &TensorField11) -> TensorField11 {
        Self::from_fn(self.dim, |i, j| self.entry(i, j) + other.entry(i, j))
    }

    pub fn sub(&self, other: &TensorField11) -> TensorField11 {
        Self::from_fn(self.dim, |i, j| self.entry(i, j) - other.entry(i, j))
    }

    pub fn scale(&self, c: f64) -> TensorField11 {
        Self::from_fn(self.dim, |i, j| self.entry(i, j) * c)
    }

    /// `alpha I + beta self`.
    pub fn affine(&self, alpha: f64, beta: f64) -> TensorField11 {
        Self::from_fn(self.dim, |i, j| {
            let scaled = self.entry(i, j) * beta;
            if i == j {
                &scaled + &Expr::num(alpha)
            } else {
                scaled
            }
        })
    }

    pub fn transpose(&self) -> TensorField11 {
        Self::from_fn(self.dim, |i, j| self.entry(j, i).clone())
    }
}

/// A (0,2) metric field `g_ij`. Symmetry and definiteness are checked at
/// sample points by the callers that need them.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricField {
    dim: usize,
    entries: Vec<Expr>,
}

impl MetricField {
    pub fn new(dim: usize, entries: Vec<Expr>) -> Result<Self> {
        same_dim(dim * dim, entries.len())?;
        check_coords(dim, &entries)?;
        Ok(MetricField { dim, entries })
    }

    pub fn euclidean(dim: usize) -> Self {
        MetricField {
            dim,
            entries: TensorField11::identity(dim).entries,
        }
    }

    pub fn constant(m: &DMatrix<f64>) -> Self {
        let t = TensorField11::constant(m);
        MetricField {
            dim: t.dim,
            entries: t.entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.dim + j]
    }

    pub fn eval<T: Scalar>(&self, p: &[T]) -> Result<DMatrix<T>, EvalError> {
        let vals = self
            .entries
            .iter()
            .map(|e| e.eval(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DMatrix::from_row_slice(self.dim, self.dim, &vals))
    }

    /// Values and first derivatives of every entry, row-major.
    pub fn eval_dual<T: Scalar>(&self, p: &[T]) -> Result<Vec<DualVector<T>>, EvalError> {
        self.entries.iter().map(|e| e.eval_dual(p)).collect()
    }

    /// Largest `|g_ij - g_ji|` at `p`.
    pub fn asymmetry<T: Scalar>(&self, p: &[T]) -> Result<T, EvalError> {
        let g = self.eval(p)?;
        Ok(crate::linalg::max_abs(&(&g - g.transpose())))
    }
}

/// A (1,2)-tensor field `Q^k_ij`, stored `entries[k*n*n + i*n + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField12 {
    dim: usize,
    entries: Vec<Expr>,
}

impl TensorField12 {
    pub fn new(dim: usize, entries: Vec<Expr>) -> Result<Self> {
        same_dim(dim * dim * dim, entries.len())?;
        check_coords(dim, &entries)?;
        Ok(TensorField12 { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        TensorField12 {
            dim,
            entries: vec![Expr::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, k: usize, i: usize, j: usize) -> &Expr {
        &self.entries[(k * self.dim + i) * self.dim + j]
    }

    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    pub fn eval<T: Scalar>(&self, p: &[T]) -> Result<Vec<T>, EvalError> {
        self.entries.iter().map(|e| e.eval(p)).collect()
    }

    /// `Q(X, Y)^k = Q^k_ij X^i Y^j` with `Q` already evaluated at a point.
    pub fn contract<T: Scalar>(values: &[T], x: &[T], y: &[T]) -> Vec<T> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut s = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        s += values[(k * n + i) * n + j] * x[i] * y[j];
                    }
                }
                s
            })
            .collect()
    }
}

/// `(A X)(p)`.
pub fn apply<T: Scalar>(a: &TensorField11, x: &VectorField, p: &[T]) -> Result<Vec<T>> {
    same_dim(a.dim(), x.dim())?;
    Ok(mat_vec(&a.eval(p)?, &x.eval(p)?))
}

/// `[X, Y]^i = X^j d_j Y^i - Y^j d_j X^i` at `p`.
pub fn lie_bracket<T: Scalar>(x: &VectorField, y: &VectorField, p: &[T]) -> Result<Vec<T>> {
    same_dim(x.dim(), y.dim())?;
    same_dim(x.dim(), p.len())?;
    let xd = x.eval_dual(p)?;
    let yd = y.eval_dual(p)?;
    let xv: Vec<T> = xd.iter().map(|d| d.value()).collect();
    let yv: Vec<T> = yd.iter().map(|d| d.value()).collect();
    Ok(xd
        .iter()
        .zip(&yd)
        .map(|(xi, yi)| yi.directional(&xv) - xi.directional(&yv))
        .collect())
}

/// `N_A(X,Y) = A^2[X,Y] + [AX,AY] - A[AX,Y] - A[X,AY]` at `p`.
pub fn nijenhuis<T: Scalar>(
    a: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<Vec<T>> {
    same_dim(a.dim(), x.dim())?;
    same_dim(a.dim(), y.dim())?;
    let ax = a.apply_field(x);
    let ay = a.apply_field(y);
    let am = a.eval(p)?;
    let xy = lie_bracket(x, y, p)?;
    let axay = lie_bracket(&ax, &ay, p)?;
    let ax_y = lie_bracket(&ax, y, p)?;
    let x_ay = lie_bracket(x, &ay, p)?;
    let first = mat_vec(&am, &mat_vec(&am, &xy));
    let third = mat_vec(&am, &ax_y);
    let fourth = mat_vec(&am, &x_ay);
    Ok((0..a.dim())
        .map(|i| first[i] + axay[i] - third[i] - fourth[i])
        .collect())
}

/// Both sides of `N_F = 4/(2 rho - a)^2 N_J` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct NijenhuisScaling<T> {
    pub n_f: Vec<T>,
    pub n_j: Vec<T>,
    /// `|| N_F - 4/(a^2+4b) N_J ||_max`.
    pub residual: T,
}

/// Compares the Nijenhuis tensor of `J` with that of its associated almost
/// product structure `F = (2/(2rho-a)) J - (a/(2rho-a)) I`.
pub fn nijenhuis_scaling<T: Scalar>(
    j: &TensorField11,
    params: &MetallicParams<T>,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<NijenhuisScaling<T>> {
    let f = params.product_from_metallic(j);
    let n_f = nijenhuis(&f, x, y, p)?;
    let n_j = nijenhuis(j, x, y, p)?;
    let k = T::lit(4.0) / (params.disc() * params.disc());
    let scaled: Vec<T> = n_j.iter().map(|v| *v * k).collect();
    let residual = max_abs_vec(&vec_sub(&n_f, &scaled));
    Ok(NijenhuisScaling { n_f, n_j, residual })
}
