//! Concrete metallic matrices: the two-parameter 2x2 family, Clifford
//! generators, metallic reflections, triple structures and (split/bi)quaternion
//! elements.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{identity, max_abs, max_abs_complex, to_complex};
use crate::metallic::{complex_polynomial_residual, MetallicParams};
use crate::scalar::Scalar;

/// Which closed form of the 2x2 family to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family2DVariant {
    /// `[[r, -(r^2 - a r - b)/s], [s, a - r]]`, `s != 0`.
    GenericRS,
    /// `[[a - t, -(t^2 - a t - b)/s], [s, t]]`, `s != 0`; the `r` field holds `t`.
    GenericST,
    /// `[[r, 0], [s, a - r]]` with `r` a root.
    TriangularLower,
    /// `[[r, s], [0, a - r]]` with `r` a root.
    TriangularUpper,
    /// `diag(r, a - r)` with `r` a root and `s = 0`.
    Diagonal,
}

impl Family2DVariant {
    pub const ALL: [Family2DVariant; 5] = [
        Family2DVariant::GenericRS,
        Family2DVariant::GenericST,
        Family2DVariant::TriangularLower,
        Family2DVariant::TriangularUpper,
        Family2DVariant::Diagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family2DVariant::GenericRS => "generic-r-s",
            Family2DVariant::GenericST => "generic-s-t",
            Family2DVariant::TriangularLower => "triangular-lower",
            Family2DVariant::TriangularUpper => "triangular-upper",
            Family2DVariant::Diagonal => "diagonal",
        }
    }
}

impl fmt::Display for Family2DVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family2DVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|v| v.name()).collect();
                Error::Family(format!("unknown variant {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// A member of the 2x2 metallic family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Family2DSpec<T> {
    pub params: MetallicParams<T>,
    /// `r` (or `t` for [`Family2DVariant::GenericST`]).
    pub r: T,
    pub s: T,
    pub variant: Family2DVariant,
}

/// Relative distance below which `r` is treated as one of the two roots.
const ROOT_SNAP: f64 = 1e-9;

fn snap_root<T: Scalar>(r: T, params: &MetallicParams<T>, variant: Family2DVariant) -> Result<T> {
    for root in [params.rho(), params.rho_conjugate()] {
        if (r - root).abs() <= T::lit(ROOT_SNAP) * root.abs().max(T::one()) {
            return Ok(root);
        }
    }
    Err(Error::Family(format!(
        "{variant} requires r to be rho = {} or a - rho = {}, got {r}",
        params.rho(),
        params.rho_conjugate()
    )))
}

pub fn family_2d<T: Scalar>(spec: &Family2DSpec<T>) -> Result<DMatrix<T>> {
    let p = &spec.params;
    let (a, b, s) = (p.a(), p.b(), spec.s);
    let m = |v: [T; 4]| DMatrix::from_row_slice(2, 2, &v);
    match spec.variant {
        Family2DVariant::GenericRS | Family2DVariant::GenericST => {
            if s == T::zero() {
                return Err(Error::Family(format!(
                    "{} requires s != 0; use triangular-lower, triangular-upper or diagonal for s = 0",
                    spec.variant
                )));
            }
            let r = spec.r;
            let off = -(r * r - a * r - b) / s;
            Ok(if spec.variant == Family2DVariant::GenericRS {
                m([r, off, s, a - r])
            } else {
                m([a - r, off, s, r])
            })
        }
        Family2DVariant::TriangularLower => {
            let r = snap_root(spec.r, p, spec.variant)?;
            Ok(m([r, T::zero(), s, a - r]))
        }
        Family2DVariant::TriangularUpper => {
            let r = snap_root(spec.r, p, spec.variant)?;
            Ok(m([r, s, T::zero(), a - r]))
        }
        Family2DVariant::Diagonal => {
            if s != T::zero() {
                return Err(Error::Family(format!("diagonal requires s = 0, got {s}")));
            }
            let r = snap_root(spec.r, p, spec.variant)?;
            Ok(m([r, T::zero(), T::zero(), a - r]))
        }
    }
}

/// The orthonormal Clifford generators `e1 = diag(1, -1)`, `e2 = [[0, 1], [1, 0]]`.
pub fn clifford_generator<T: Scalar>(i: usize) -> Result<DMatrix<T>> {
    let (o, z) = (T::one(), T::zero());
    match i {
        1 => Ok(DMatrix::from_row_slice(2, 2, &[o, z, z, -o])),
        2 => Ok(DMatrix::from_row_slice(2, 2, &[z, o, o, z])),
        _ => Err(Error::Family(format!(
            "Clifford generator index must be 1 or 2, got {i}"
        ))),
    }
}

/// `J_i = (a I + sqrt(a^2+4b) e_i) / 2`.
pub fn clifford_metallic<T: Scalar>(i: usize, params: &MetallicParams<T>) -> Result<DMatrix<T>> {
    let e = clifford_generator::<T>(i)?;
    Ok(affine(&e, params))
}

fn affine<T: Scalar>(e: &DMatrix<T>, params: &MetallicParams<T>) -> DMatrix<T> {
    let half = T::lit(2.0);
    identity::<T>(e.nrows()) * (params.a() / half) + e * (params.disc() / half)
}

/// `|| J1 J2 + J2 J1 - a (J1 + J2) + (a^2/2) I ||_max`.
pub fn deformed_anticommutator_residual<T: Scalar>(
    j1: &DMatrix<T>,
    j2: &DMatrix<T>,
    params: &MetallicParams<T>,
) -> T {
    let a = params.a();
    let id = identity::<T>(j1.nrows());
    let lhs = j1 * j2 + j2 * j1;
    let rhs = (j1 + j2) * a - id * (a * a / T::lit(2.0));
    max_abs(&(lhs - rhs))
}

/// `J_v x = rho x - sqrt(a^2+4b) <x, v>/<v, v> v`.
pub fn metallic_reflection<T: Scalar>(v: &[T], params: &MetallicParams<T>) -> Result<DMatrix<T>> {
    let vv = v.iter().fold(T::zero(), |acc, x| acc + *x * *x);
    if vv == T::zero() || !vv.is_finite() {
        return Err(Error::Family("reflection normal must be a nonzero vector".into()));
    }
    let n = v.len();
    let k = params.disc() / vv;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { params.rho() } else { T::zero() };
        d - k * v[i] * v[j]
    }))
}

/// The four triple-structure algebras on `(F, T, K = T F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleKind {
    /// Almost hyperproduct: `F^2 = T^2 = I`, commuting.
    Ahp,
    /// Almost biproduct complex: `F^2 = T^2 = I`, anticommuting.
    Abpc,
    /// Almost product bicomplex: `F^2 = T^2 = -I`, commuting.
    Apbc,
    /// Almost hypercomplex: `F^2 = T^2 = -I`, anticommuting.
    Ahc,
}

impl TripleKind {
    pub const ALL: [TripleKind; 4] = [TripleKind::Ahp, TripleKind::Abpc, TripleKind::Apbc, TripleKind::Ahc];

    pub fn name(self) -> &'static str {
        match self {
            TripleKind::Ahp => "ahp",
            TripleKind::Abpc => "abpc",
            TripleKind::Apbc => "apbc",
            TripleKind::Ahc => "ahc",
        }
    }

    /// `+1` when `F^2 = T^2 = I`, `-1` when they square to `-I`.
    fn square_sign(self) -> f64 {
        match self {
            TripleKind::Ahp | TripleKind::Abpc => 1.0,
            TripleKind::Apbc | TripleKind::Ahc => -1.0,
        }
    }

    fn commuting(self) -> bool {
        matches!(self, TripleKind::Ahp | TripleKind::Apbc)
    }

    /// Whether `J_K` is metallic (otherwise complex metallic): `K^2 = I` exactly
    /// for the commuting kinds.
    pub fn k_is_metallic(self) -> bool {
        self.commuting()
    }

    /// A pair `(F, T)` satisfying the kind's algebra.
    pub fn canonical_pair<T: Scalar>(self) -> (DMatrix<T>, DMatrix<T>) {
        let c = |n: usize, v: &[f64]| DMatrix::from_row_slice(n, n, &v.iter().map(|x| T::lit(*x)).collect::<Vec<_>>());
        match self {
            TripleKind::Ahp => (
                DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
                    [1.0, -1.0, 1.0, -1.0].map(T::lit).to_vec(),
                )),
                DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
                    [1.0, 1.0, -1.0, -1.0].map(T::lit).to_vec(),
                )),
            ),
            TripleKind::Abpc => (c(2, &[1.0, 0.0, 0.0, -1.0]), c(2, &[0.0, 1.0, 1.0, 0.0])),
            TripleKind::Apbc => (
                c(4, &[
                    0.0, -1.0, 0.0, 0.0, //
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 0.0, 0.0, -1.0, //
                    0.0, 0.0, 1.0, 0.0,
                ]),
                c(4, &[
                    0.0, -1.0, 0.0, 0.0, //
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 0.0, 0.0, 1.0, //
                    0.0, 0.0, -1.0, 0.0,
                ]),
            ),
            TripleKind::Ahc => (
                quaternion_right_unit(1).map(T::lit),
                quaternion_right_unit(2).map(T::lit),
            ),
        }
    }
}

impl fmt::Display for TripleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TripleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Family(format!("unknown triple kind {s:?}; expected ahp, abpc, apbc or ahc")))
    }
}

/// Matrix of right multiplication `q -> q u` on quaternions `w + x i + y j + z k`
/// for `u = i, j, k` (`unit = 1, 2, 3`). With `F = R_i`, `T = R_j` the
/// composite `T F` is `R_k`.
pub fn quaternion_right_unit(unit: usize) -> DMatrix<f64> {
    let rows: [f64; 16] = match unit {
        1 => [
            0.0, -1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, -1.0, 0.0,
        ],
        2 => [
            0.0, 0.0, -1.0, 0.0, //
            0.0, 0.0, 0.0, -1.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0,
        ],
        3 => [
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, -1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0,
        ],
        _ => panic!("quaternion unit index must be 1, 2 or 3"),
    };
    DMatrix::from_row_slice(4, 4, &rows)
}

/// `(J_F, J_T, J_K)` with the verified relation and classification.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleStructure<T: Scalar> {
    pub kind: TripleKind,
    pub j_f: DMatrix<T>,
    pub j_t: DMatrix<T>,
    pub j_k: DMatrix<T>,
    /// `|| sqrt(a^2+4b) J_K - (2 J_T J_F - a J_T - a J_F + rho^2 I - b I) ||_max`.
    pub relation_residual: T,
    /// Worst residual of the polynomial each of `J_F`, `J_T`, `J_K` must satisfy
    /// for this kind (metallic or complex metallic).
    pub classification_residual: T,
    /// `J_F J_T - J_T J_F` for commuting kinds, the deformed anticommutator otherwise.
    pub pair_residual: T,
}

fn real_complex_metallic_residual<T: Scalar>(m: &DMatrix<T>, params: &MetallicParams<T>) -> T {
    complex_polynomial_residual(&to_complex(m), params)
}

pub fn triple_structure<T: Scalar>(
    f: &DMatrix<T>,
    t: &DMatrix<T>,
    kind: TripleKind,
    params: &MetallicParams<T>,
    tol: T,
) -> Result<TripleStructure<T>> {
    if f.shape() != t.shape() || f.nrows() != f.ncols() {
        return Err(Error::Family("F and T must be square matrices of the same size".into()));
    }
    let n = f.nrows();
    let sign = T::lit(kind.square_sign());
    let id = identity::<T>(n);
    let reject = |condition: String, residual: T| Error::Precondition {
        condition,
        residual: residual.to_f64_lossy(),
        point: Vec::new(),
    };
    let sq = if kind.square_sign() > 0.0 { "I" } else { "-I" };
    let rf = max_abs(&(f * f - &id * sign));
    if !(rf <= tol) {
        return Err(reject(format!("{kind}: F^2 = {sq}"), rf));
    }
    let rt = max_abs(&(t * t - &id * sign));
    if !(rt <= tol) {
        return Err(reject(format!("{kind}: T^2 = {sq}"), rt));
    }
    let (rc, name) = if kind.commuting() {
        (max_abs(&(t * f - f * t)), "TF - FT = 0")
    } else {
        (max_abs(&(t * f + f * t)), "TF + FT = 0")
    };
    if !(rc <= tol) {
        return Err(reject(format!("{kind}: {name}"), rc));
    }

    let k = t * f;
    let j_f = affine(f, params);
    let j_t = affine(t, params);
    let j_k = affine(&k, params);
    let (a, b, rho) = (params.a(), params.b(), params.rho());
    let rhs = &j_t * &j_f * T::lit(2.0) - &j_t * a - &j_f * a + &id * (rho * rho - b);
    let relation_residual = max_abs(&(&j_k * params.disc() - rhs));

    let classify = |m: &DMatrix<T>, metallic: bool| {
        if metallic {
            params.metallic_residual(m)
        } else {
            real_complex_metallic_residual(m, params)
        }
    };
    let product_kind = kind.square_sign() > 0.0;
    let classification_residual = classify(&j_f, product_kind)
        .max(classify(&j_t, product_kind))
        .max(classify(&j_k, kind.k_is_metallic()));
    let pair_residual = if kind.commuting() {
        max_abs(&(&j_f * &j_t - &j_t * &j_f))
    } else {
        deformed_anticommutator_residual(&j_f, &j_t, params)
    };
    Ok(TripleStructure {
        kind,
        j_f,
        j_t,
        j_k,
        relation_residual,
        classification_residual,
        pair_residual,
    })
}

/// What an algebra element is expected to square to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Squares to `I`.
    CliffordGenerator,
    /// Squares to `-I`.
    UnitQuaternionVector,
    /// Squares to `I`.
    SplitQuaternionVector,
}

impl AlgebraKind {
    fn square_sign(self) -> f64 {
        match self {
            AlgebraKind::UnitQuaternionVector => -1.0,
            _ => 1.0,
        }
    }
}

/// A square matrix verified to satisfy the squaring rule of its kind.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T: Scalar> {
    matrix: DMatrix<Complex<T>>,
    kind: AlgebraKind,
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn new(matrix: DMatrix<Complex<T>>, kind: AlgebraKind, tol: T) -> Result<Self> {
        let n = matrix.nrows();
        let sign = Complex::from(T::lit(kind.square_sign()));
        let r = max_abs_complex(&(&matrix * &matrix - identity::<Complex<T>>(n) * sign));
        if !(r <= tol) {
            let sq = if kind.square_sign() > 0.0 { "I" } else { "-I" };
            return Err(Error::Precondition {
                condition: format!("{kind:?} squares to {sq}"),
                residual: r.to_f64_lossy(),
                point: Vec::new(),
            });
        }
        Ok(AlgebraElement { matrix, kind })
    }

    pub fn real(matrix: &DMatrix<T>, kind: AlgebraKind, tol: T) -> Result<Self> {
        Self::new(to_complex(matrix), kind, tol)
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }
}

/// Split-quaternion units as real 2x2 matrices: `i^2 = -I`, `j^2 = k^2 = I`, `ij = k`.
pub fn split_quaternion_units<T: Scalar>() -> [DMatrix<T>; 3] {
    let m = |v: [f64; 4]| DMatrix::from_row_slice(2, 2, &v.map(T::lit));
    [
        m([0.0, -1.0, 1.0, 0.0]),
        m([0.0, 1.0, 1.0, 0.0]),
        m([-1.0, 0.0, 0.0, 1.0]),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuaternionFlavor {
    /// `J_q = a/2 + (sqrt(a^2+4b)/2) S0` with `S0^2 = I`.
    Split,
    /// `J_q = a/2 + (sqrt(a^2+4b) i/2) S0` with `S0^2 = -I`.
    Biquaternion,
}

pub fn quaternion_metallic<T: Scalar>(
    s0: &DMatrix<T>,
    flavor: QuaternionFlavor,
    params: &MetallicParams<T>,
    tol: T,
) -> Result<DMatrix<Complex<T>>> {
    let kind = match flavor {
        QuaternionFlavor::Split => AlgebraKind::SplitQuaternionVector,
        QuaternionFlavor::Biquaternion => AlgebraKind::UnitQuaternionVector,
    };
    let s0 = AlgebraElement::real(s0, kind, tol)?;
    let half = T::lit(2.0);
    let coeff = match flavor {
        QuaternionFlavor::Split => Complex::new(params.disc() / half, T::zero()),
        QuaternionFlavor::Biquaternion => Complex::new(T::zero(), params.disc() / half),
    };
    let n = s0.matrix().nrows();
    Ok(identity::<Complex<T>>(n) * Complex::from(params.a() / half) + s0.matrix() * coeff)
}

/// `|| M^2 - a M - b I ||_max` for a complex matrix.
pub fn complex_metallic_condition_residual<T: Scalar>(
    m: &DMatrix<Complex<T>>,
    params: &MetallicParams<T>,
) -> T {
    let id = identity::<Complex<T>>(m.nrows());
    max_abs_complex(&(m * m - m * Complex::from(params.a()) - id * Complex::from(params.b())))
}
