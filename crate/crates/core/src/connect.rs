//! Linear connections on a chart.
//!
//! A connection is anything that maps a pair of vector fields and a point to
//! `(nabla_X Y)(p)`. Coefficient connections use
//! `(nabla_X Y)^k = X^j d_j Y^k + Gamma^k_ij X^i Y^j`; the Schouten,
//! Vranceanu and Obata connections are evaluated verbatim from their defining
//! formulas on top of a coefficient connection.

use std::fmt;

use nalgebra::DMatrix;

use crate::chart::{lie_bracket, MetricField, TensorField11, TensorField12, VectorField};
use crate::check::Probe;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::{identity, lincomb, mat_vec, max_abs, max_abs_vec, solve, vec_add, vec_scale, vec_sub};
use crate::metallic::{require_metallic, MetallicParams};
use crate::scalar::{to_f64_vec, Scalar};

/// A linear connection evaluated pointwise.
pub trait Connection: Sync {
    fn dim(&self) -> usize;

    /// `(nabla_X Y)(p)`.
    fn covariant<T: Scalar>(&self, x: &VectorField, y: &VectorField, p: &[T]) -> Result<Vec<T>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectionKind {
    Flat,
    User,
    LeviCivita,
    Schouten,
    Vranceanu,
    Obata,
}

impl ConnectionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConnectionKind::Flat => "flat",
            ConnectionKind::User => "user",
            ConnectionKind::LeviCivita => "levi-civita",
            ConnectionKind::Schouten => "schouten",
            ConnectionKind::Vranceanu => "vranceanu",
            ConnectionKind::Obata => "obata",
        }
    }
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Coefficients {
    Flat,
    Explicit(TensorField12),
    /// Christoffel symbols computed pointwise from the metric.
    LeviCivita(MetricField),
}

/// Connection coefficients `Gamma^k_ij`, with `i` the differentiation slot.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCoeffs {
    dim: usize,
    coeffs: Coefficients,
}

/// Pivot ratio below which a metric is treated as singular.
const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

impl ConnectionCoeffs {
    pub fn flat(dim: usize) -> Self {
        ConnectionCoeffs {
            dim,
            coeffs: Coefficients::Flat,
        }
    }

    /// Coefficients given as expressions, `gamma.entry(k, i, j) = Gamma^k_ij`.
    pub fn from_tensor(gamma: TensorField12) -> Self {
        ConnectionCoeffs {
            dim: gamma.dim(),
            coeffs: Coefficients::Explicit(gamma),
        }
    }

    /// The Levi-Civita connection of `g`:
    /// `Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)`.
    pub fn levi_civita(g: &MetricField) -> Self {
        ConnectionCoeffs {
            dim: g.dim(),
            coeffs: Coefficients::LeviCivita(g.clone()),
        }
    }

    pub fn kind(&self) -> ConnectionKind {
        match self.coeffs {
            Coefficients::Flat => ConnectionKind::Flat,
            Coefficients::Explicit(_) => ConnectionKind::User,
            Coefficients::LeviCivita(_) => ConnectionKind::LeviCivita,
        }
    }

    /// All `n^3` coefficients at `p`, stored `[(k*n + i)*n + j]`.
    pub fn gamma_at<T: Scalar>(&self, p: &[T]) -> Result<Vec<T>> {
        let n = self.dim;
        match &self.coeffs {
            Coefficients::Flat => Ok(vec![T::zero(); n * n * n]),
            Coefficients::Explicit(g) => Ok(g.eval(p)?),
            Coefficients::LeviCivita(g) => christoffel(g, p),
        }
    }

    /// Largest `|Gamma^k_ij - Gamma^k_ji|` at `p`.
    pub fn asymmetry<T: Scalar>(&self, p: &[T]) -> Result<T> {
        let n = self.dim;
        let g = self.gamma_at(p)?;
        let mut worst = T::zero();
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    let d = g[(k * n + i) * n + j] - g[(k * n + j) * n + i];
                    worst = worst.max(d.abs());
                }
            }
        }
        Ok(worst)
    }
}

fn christoffel<T: Scalar>(g: &MetricField, p: &[T]) -> Result<Vec<T>> {
    let n = g.dim();
    let duals = g.eval_dual(p)?;
    let gm = DMatrix::from_fn(n, n, |i, j| duals[i * n + j].value());
    // dg(i, j, l) = d_l g_ij
    let dg = |i: usize, j: usize, l: usize| duals[i * n + j].gradient()[l];
    let half = T::lit(0.5);
    let rhs = DMatrix::from_fn(n, n * n, |l, col| {
        let (i, j) = (col / n, col % n);
        half * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l))
    });
    let singular = |ratio: f64| Error::SingularMetric {
        point: to_f64_vec(p),
        pivot_ratio: ratio,
    };
    let (sol, ratio) = solve(&gm, &rhs).ok_or_else(|| singular(0.0))?;
    if !(ratio.to_f64_lossy() >= SINGULAR_PIVOT_RATIO) {
        return Err(singular(ratio.to_f64_lossy()));
    }
    let mut out = vec![T::zero(); n * n * n];
    for k in 0..n {
        for col in 0..n * n {
            out[k * n * n + col] = sol[(k, col)];
        }
    }
    Ok(out)
}

impl Connection for ConnectionCoeffs {
    fn dim(&self) -> usize {
        self.dim
    }

    fn covariant<T: Scalar>(&self, x: &VectorField, y: &VectorField, p: &[T]) -> Result<Vec<T>> {
        let n = self.dim;
        for d in [x.dim(), y.dim(), p.len()] {
            if d != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: d,
                });
            }
        }
        let xv = x.eval(p)?;
        let yd = y.eval_dual(p)?;
        let mut out: Vec<T> = yd.iter().map(|c| c.directional(&xv)).collect();
        if let Coefficients::Flat = self.coeffs {
            return Ok(out);
        }
        let yv: Vec<T> = yd.iter().map(|c| c.value()).collect();
        let gamma = self.gamma_at(p)?;
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    *o += gamma[(k * n + i) * n + j] * xv[i] * yv[j];
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Derivation {
    Base,
    Schouten {
        l: TensorField11,
        m: TensorField11,
    },
    Vranceanu {
        l: TensorField11,
        m: TensorField11,
    },
    Obata {
        j: TensorField11,
        f: TensorField11,
        a: f64,
        b: f64,
        q: TensorField12,
    },
}

/// A connection built from a coefficient connection by one of the
/// constructions below, evaluated from its defining formula.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedConnection {
    base: ConnectionCoeffs,
    derivation: Derivation,
}

impl From<ConnectionCoeffs> for DerivedConnection {
    fn from(base: ConnectionCoeffs) -> Self {
        DerivedConnection {
            base,
            derivation: Derivation::Base,
        }
    }
}

impl DerivedConnection {
    pub fn kind(&self) -> ConnectionKind {
        match self.derivation {
            Derivation::Base => self.base.kind(),
            Derivation::Schouten { .. } => ConnectionKind::Schouten,
            Derivation::Vranceanu { .. } => ConnectionKind::Vranceanu,
            Derivation::Obata { .. } => ConnectionKind::Obata,
        }
    }

    pub fn base(&self) -> &ConnectionCoeffs {
        &self.base
    }
}

impl Connection for DerivedConnection {
    fn dim(&self) -> usize {
        self.base.dim
    }

    fn covariant<T: Scalar>(&self, x: &VectorField, y: &VectorField, p: &[T]) -> Result<Vec<T>> {
        let base = &self.base;
        match &self.derivation {
            Derivation::Base => base.covariant(x, y, p),
            Derivation::Schouten { l, m } => {
                // l(nabla_X lY) + m(nabla_X mY)
                let ly = base.covariant(x, &l.apply_field(y), p)?;
                let my = base.covariant(x, &m.apply_field(y), p)?;
                Ok(vec_add(&mat_vec(&l.eval(p)?, &ly), &mat_vec(&m.eval(p)?, &my)))
            }
            Derivation::Vranceanu { l, m } => {
                // l(nabla_{lX} lY) + m(nabla_{mX} mY) + l[mX, lY] + m[lX, mY]
                let (lx, ly) = (l.apply_field(x), l.apply_field(y));
                let (mx, my) = (m.apply_field(x), m.apply_field(y));
                let lpart = vec_add(&base.covariant(&lx, &ly, p)?, &lie_bracket(&mx, &ly, p)?);
                let mpart = vec_add(&base.covariant(&mx, &my, p)?, &lie_bracket(&lx, &my, p)?);
                Ok(vec_add(&mat_vec(&l.eval(p)?, &lpart), &mat_vec(&m.eval(p)?, &mpart)))
            }
            Derivation::Obata { j, f, a, b, q } => {
                let (a, b) = (T::lit(*a), T::lit(*b));
                let jm = j.eval(p)?;
                let d_xy = base.covariant(x, y, p)?;
                let d_xjy = base.covariant(x, &j.apply_field(y), p)?;
                let j_d_xjy = mat_vec(&jm, &d_xjy);
                let j_d_xy = mat_vec(&jm, &d_xy);
                let two = T::lit(2.0);
                let bracket = lincomb(&[
                    (a * a + two * b, &d_xy),
                    (two, &j_d_xjy),
                    (-a, &j_d_xy),
                    (-a, &d_xjy),
                ]);
                let main = vec_scale(&bracket, T::one() / (a * a + T::lit(4.0) * b));
                Ok(vec_add(&main, &obata_operator(q, f, x, y, p)?))
            }
        }
    }
}

/// `O_F Q(X, Y) = 1/2 [Q(X, Y) + F Q(X, F Y)]` at `p`.
pub fn obata_operator<T: Scalar>(
    q: &TensorField12,
    f: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<Vec<T>> {
    let qv = q.eval(p)?;
    let fm = f.eval(p)?;
    let xv = x.eval(p)?;
    let yv = y.eval(p)?;
    let fy = mat_vec(&fm, &yv);
    let q1 = TensorField12::contract(&qv, &xv, &yv);
    let q2 = mat_vec(&fm, &TensorField12::contract(&qv, &xv, &fy));
    Ok(vec_scale(&vec_add(&q1, &q2), T::lit(0.5)))
}

/// Worst residual of the complementary-projector identities
/// `l^2 = l, m^2 = m, lm = ml = 0, l + m = I` at `p`.
pub fn complementary_projector_residual<T: Scalar>(
    l: &TensorField11,
    m: &TensorField11,
    p: &[T],
) -> Result<T> {
    let (lm, mm) = (l.eval(p)?, m.eval(p)?);
    let n = lm.nrows();
    let id = identity::<T>(n);
    Ok([
        max_abs(&(&lm * &lm - &lm)),
        max_abs(&(&mm * &mm - &mm)),
        max_abs(&(&lm * &mm)),
        max_abs(&(&mm * &lm)),
        max_abs(&(&lm + &mm - id)),
    ]
    .into_iter()
    .fold(T::zero(), T::max))
}

fn require_projectors<T: Scalar>(
    base: &ConnectionCoeffs,
    l: &TensorField11,
    m: &TensorField11,
    probe: &Probe<'_, T>,
) -> Result<()> {
    for d in [l.dim(), m.dim()] {
        if d != base.dim {
            return Err(Error::Dimension {
                expected: base.dim,
                found: d,
            });
        }
    }
    probe.require("complementary projectors l^2 = l, m^2 = m, lm = ml = 0, l + m = I", |p| {
        complementary_projector_residual(l, m, p)
    })
}

/// The Schouten connection `l(nabla_X lY) + m(nabla_X mY)`.
pub fn schouten<T: Scalar>(
    base: &ConnectionCoeffs,
    l: &TensorField11,
    m: &TensorField11,
    probe: &Probe<'_, T>,
) -> Result<DerivedConnection> {
    require_projectors(base, l, m, probe)?;
    Ok(DerivedConnection {
        base: base.clone(),
        derivation: Derivation::Schouten {
            l: l.clone(),
            m: m.clone(),
        },
    })
}

/// The Vranceanu connection
/// `l(nabla_{lX} lY) + m(nabla_{mX} mY) + l[mX, lY] + m[lX, mY]`.
pub fn vranceanu<T: Scalar>(
    base: &ConnectionCoeffs,
    l: &TensorField11,
    m: &TensorField11,
    probe: &Probe<'_, T>,
) -> Result<DerivedConnection> {
    require_projectors(base, l, m, probe)?;
    Ok(DerivedConnection {
        base: base.clone(),
        derivation: Derivation::Vranceanu {
            l: l.clone(),
            m: m.clone(),
        },
    })
}

/// The connection
/// `1/(a^2+4b) [(a^2+2b) D_X Y + 2 J(D_X JY) - a J(D_X Y) - a D_X JY] + O_F Q(X, Y)`
/// built from a base connection `D`, which makes `J` parallel for every `Q`
/// (`Q = None` means zero).
pub fn obata_connection<T: Scalar>(
    base: &ConnectionCoeffs,
    j: &TensorField11,
    params: &MetallicParams<T>,
    q: Option<&TensorField12>,
    probe: &Probe<'_, T>,
) -> Result<DerivedConnection> {
    if j.dim() != base.dim {
        return Err(Error::Dimension {
            expected: base.dim,
            found: j.dim(),
        });
    }
    require_metallic(j, params, probe)?;
    let q = q.cloned().unwrap_or_else(|| TensorField12::zero(base.dim));
    if q.dim() != base.dim {
        return Err(Error::Dimension {
            expected: base.dim,
            found: q.dim(),
        });
    }
    Ok(DerivedConnection {
        base: base.clone(),
        derivation: Derivation::Obata {
            j: j.clone(),
            f: params.product_from_metallic(j),
            a: params.a().to_f64_lossy(),
            b: params.b().to_f64_lossy(),
            q,
        },
    })
}

pub fn covariant_derivative<C: Connection, T: Scalar>(
    conn: &C,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<Vec<T>> {
    conn.covariant(x, y, p)
}

/// `(nabla_X A) Y = nabla_X (A Y) - A (nabla_X Y)` at `p`.
pub fn nabla_tensor<C: Connection, T: Scalar>(
    conn: &C,
    a: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<Vec<T>> {
    let d_ay = conn.covariant(x, &a.apply_field(y), p)?;
    let d_y = conn.covariant(x, y, p)?;
    Ok(vec_sub(&d_ay, &mat_vec(&a.eval(p)?, &d_y)))
}

/// `(nabla_X J) Y`.
pub fn nabla_j<C: Connection, T: Scalar>(
    conn: &C,
    j: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<Vec<T>> {
    nabla_tensor(conn, j, x, y, p)
}

/// `(Delta J)(X, Y) = J nabla_X Y - J nabla_Y X - nabla_{JX} Y + nabla_Y (JX)`.
/// Not tensorial in `Y`, so it depends on the fields, not only their values at `p`.
pub fn delta_j<C: Connection, T: Scalar>(
    conn: &C,
    j: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<Vec<T>> {
    let jm = j.eval(p)?;
    let jx = j.apply_field(x);
    let t1 = mat_vec(&jm, &conn.covariant(x, y, p)?);
    let t2 = mat_vec(&jm, &conn.covariant(y, x, p)?);
    let t3 = conn.covariant(&jx, y, p)?;
    let t4 = conn.covariant(y, &jx, p)?;
    let one = T::one();
    Ok(lincomb(&[(one, &t1), (-one, &t2), (-one, &t3), (one, &t4)]))
}

/// Residuals of the half-parallel identities under a connection whose `J`
/// has projectors `l, m`: for `X' = lX`,
/// `m(Delta J)(X', Y) - (a - 2 rho) m[X', mY]`, and for `X' = mX`,
/// `l(Delta J)(X', Y) - (2 rho - a) l[X', lY]`. Returns the larger one.
#[allow(clippy::too_many_arguments)]
pub fn half_parallel_residual<C: Connection, T: Scalar>(
    conn: &C,
    j: &TensorField11,
    l: &TensorField11,
    m: &TensorField11,
    params: &MetallicParams<T>,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<T> {
    let (lm, mm) = (l.eval(p)?, m.eval(p)?);
    let k = params.a() - T::lit(2.0) * params.rho();

    let lx = l.apply_field(x);
    let lhs = mat_vec(&mm, &delta_j(conn, j, &lx, y, p)?);
    let rhs = vec_scale(&mat_vec(&mm, &lie_bracket(&lx, &m.apply_field(y), p)?), k);
    let r_l = max_abs_vec(&vec_sub(&lhs, &rhs));

    let mx = m.apply_field(x);
    let lhs = mat_vec(&lm, &delta_j(conn, j, &mx, y, p)?);
    let rhs = vec_scale(&mat_vec(&lm, &lie_bracket(&mx, &l.apply_field(y), p)?), -k);
    let r_m = max_abs_vec(&vec_sub(&lhs, &rhs));
    Ok(r_l.max(r_m))
}

/// `max(|l(Delta J)(lX, Y)|, |m(Delta J)(mX, Y)|)`: zero when `L` and `M` are
/// anti-half parallel.
pub fn anti_half_parallel_residual<C: Connection, T: Scalar>(
    conn: &C,
    j: &TensorField11,
    l: &TensorField11,
    m: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<T> {
    let (lm, mm) = (l.eval(p)?, m.eval(p)?);
    let r_l = max_abs_vec(&mat_vec(&lm, &delta_j(conn, j, &l.apply_field(x), y, p)?));
    let r_m = max_abs_vec(&mat_vec(&mm, &delta_j(conn, j, &m.apply_field(x), y, p)?));
    Ok(r_l.max(r_m))
}

/// `max(|m(nabla_X lY)|, |l(nabla_X mY)|)`: zero when `L` and `M` are parallel.
pub fn distribution_parallel_residual<C: Connection, T: Scalar>(
    conn: &C,
    l: &TensorField11,
    m: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<T> {
    let in_l = conn.covariant(x, &l.apply_field(y), p)?;
    let in_m = conn.covariant(x, &m.apply_field(y), p)?;
    let r1 = max_abs_vec(&mat_vec(&m.eval(p)?, &in_l));
    let r2 = max_abs_vec(&mat_vec(&l.eval(p)?, &in_m));
    Ok(r1.max(r2))
}

/// Worst `|(nabla_X A) Y|` over the given tensors and field pairs at `p`.
pub fn parallelism_residual<C: Connection, T: Scalar>(
    conn: &C,
    tensors: &[&TensorField11],
    fields: &[VectorField],
    p: &[T],
) -> Result<T> {
    let mut worst = T::zero();
    for a in tensors {
        for x in fields {
            for y in fields {
                worst = worst.max(max_abs_vec(&nabla_tensor(conn, a, x, y, p)?));
            }
        }
    }
    Ok(worst)
}

/// `N_F(X, Y) = (nabla_{FX} F) Y - (nabla_{FY} F) X - F (nabla_X F) Y + F (nabla_Y F) X`
/// for a symmetric connection; rejects connections whose coefficients are not
/// symmetric at `p` within `tol`.
pub fn nijenhuis_via_connection<T: Scalar>(
    conn: &ConnectionCoeffs,
    f: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
    tol: T,
) -> Result<Vec<T>> {
    let asym = conn.asymmetry(p)?;
    if !(asym <= tol) {
        return Err(Error::AsymmetricConnection {
            point: to_f64_vec(p),
            residual: asym.to_f64_lossy(),
        });
    }
    let fm = f.eval(p)?;
    let (fx, fy) = (f.apply_field(x), f.apply_field(y));
    let t1 = nabla_tensor(conn, f, &fx, y, p)?;
    let t2 = nabla_tensor(conn, f, &fy, x, p)?;
    let t3 = mat_vec(&fm, &nabla_tensor(conn, f, x, y, p)?);
    let t4 = mat_vec(&fm, &nabla_tensor(conn, f, y, x, p)?);
    let one = T::one();
    Ok(lincomb(&[(one, &t1), (-one, &t2), (-one, &t3), (one, &t4)]))
}

/// `Gamma^k_ij = (nabla_{d_i} d_j)^k` at `p`, stored `[(k*n + i)*n + j]`.
pub fn extract_coefficients<C: Connection, T: Scalar>(conn: &C, p: &[T]) -> Result<Vec<T>> {
    let n = conn.dim();
    let frame = VectorField::frame(n);
    let mut out = vec![T::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let v = conn.covariant(&frame[i], &frame[j], p)?;
            for k in 0..n {
                out[(k * n + i) * n + j] = v[k];
            }
        }
    }
    Ok(out)
}

/// Largest `|(nabla_k g)_ij| = |d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il|` at `p`.
pub fn metric_compatibility_residual<T: Scalar>(
    g: &MetricField,
    conn: &ConnectionCoeffs,
    p: &[T],
) -> Result<T> {
    let n = g.dim();
    let duals = g.eval_dual(p)?;
    let gamma = conn.gamma_at(p)?;
    let gv = |i: usize, j: usize| duals[i * n + j].value();
    let gam = |l: usize, k: usize, i: usize| gamma[(l * n + k) * n + i];
    let mut worst = T::zero();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut r = duals[i * n + j].gradient()[k];
                for l in 0..n {
                    r -= gam(l, k, i) * gv(l, j) + gam(l, k, j) * gv(i, l);
                }
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(worst)
}

/// Worst residual of the connection axioms at `p`: additivity in both slots,
/// `nabla_X (fY) = X(f) Y + f nabla_X Y` and `nabla_{fX} Y = f nabla_X Y`.
pub fn connection_axioms_residual<C: Connection, T: Scalar>(
    conn: &C,
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
    f: &Expr,
    p: &[T],
) -> Result<T> {
    let fv: T = f.eval(p)?;
    let xf = x.derivative_of(f, p)?;
    let d_xy = conn.covariant(x, y, p)?;

    let add_y = vec_sub(
        &conn.covariant(x, &y.add(z), p)?,
        &vec_add(&d_xy, &conn.covariant(x, z, p)?),
    );
    let add_x = vec_sub(
        &conn.covariant(&x.add(z), y, p)?,
        &vec_add(&d_xy, &conn.covariant(z, y, p)?),
    );
    let yv = y.eval(p)?;
    let leibniz = vec_sub(
        &conn.covariant(x, &y.scale(f), p)?,
        &lincomb(&[(xf, &yv), (fv, &d_xy)]),
    );
    let linear = vec_sub(&conn.covariant(&x.scale(f), y, p)?, &vec_scale(&d_xy, fv));
    Ok([add_y, add_x, leibniz, linear]
        .iter()
        .map(|v| max_abs_vec(v))
        .fold(T::zero(), T::max))
}
