//! Checks for metallic (semi-)Riemannian structures `(g, J)` with
//! `g(JX, Y) = g(X, JY)`.

use nalgebra::DMatrix;

use crate::chart::{nijenhuis, MetricField, TensorField11, VectorField};
use crate::check::{sweep, CheckResult};
use crate::connect::{nabla_tensor, ConnectionCoeffs};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_vec, vec_sub};
use crate::metallic::MetallicParams;
use crate::scalar::{to_f64_vec, Scalar};

fn symmetric_metric<T: Scalar>(g: &MetricField, p: &[T], tol: T) -> Result<DMatrix<T>> {
    let gm = g.eval(p)?;
    let asym = max_abs(&(&gm - gm.transpose()));
    if !(asym <= tol) {
        return Err(Error::Precondition {
            condition: "metric symmetry g_ij = g_ji".into(),
            residual: asym.to_f64_lossy(),
            point: to_f64_vec(p),
        });
    }
    Ok(gm)
}

/// `max_ij |g(A e_i, e_j) - g(e_i, A e_j)|` over the coordinate frame at `p`.
pub fn g_symmetry_residual<T: Scalar>(g: &MetricField, a: &TensorField11, p: &[T]) -> Result<T> {
    let gm = g.eval(p)?;
    let am = a.eval(p)?;
    let n = gm.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            // g(A e_i, e_j) = A^k_i g_kj, g(e_i, A e_j) = g_ik A^k_j
            let mut lhs = T::zero();
            let mut rhs = T::zero();
            for k in 0..n {
                lhs += am[(k, i)] * gm[(k, j)];
                rhs += gm[(i, k)] * am[(k, j)];
            }
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

/// `|| G A - A^T G ||_max` at `p`.
pub fn g_symmetry_matrix_residual<T: Scalar>(g: &MetricField, a: &TensorField11, p: &[T]) -> Result<T> {
    let gm = g.eval(p)?;
    let am = a.eval(p)?;
    Ok(max_abs(&(&gm * &am - am.transpose() * &gm)))
}

/// Whether `A` is `g`-symmetric at every point.
pub fn g_symmetry_check<T: Scalar>(
    g: &MetricField,
    a: &TensorField11,
    points: &[Vec<T>],
    tol: T,
) -> CheckResult<T> {
    sweep(points, tol, |p| {
        symmetric_metric(g, p, tol)?;
        g_symmetry_residual(g, a, p)
    })
}

/// `g`-symmetry of `J` and of its almost product structure `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryEquivalence<T> {
    pub j: CheckResult<T>,
    /// Checked against `tol * 2/(2rho - a)`, the image of `tol` under `J -> F`.
    pub f: CheckResult<T>,
    /// Both verdicts agree.
    pub agree: bool,
}

/// `F` is `g`-symmetric iff `J` is; the `F` residual is `2/(2rho - a)` times
/// the `J` residual pointwise.
pub fn equivalence_f_j_symmetry<T: Scalar>(
    g: &MetricField,
    j: &TensorField11,
    params: &MetallicParams<T>,
    points: &[Vec<T>],
    tol: T,
) -> SymmetryEquivalence<T> {
    let f = params.product_from_metallic(j);
    let jr = g_symmetry_check(g, j, points, tol);
    let fr = g_symmetry_check(g, &f, points, tol * T::lit(2.0) / params.disc());
    let agree = jr.pass == fr.pass;
    SymmetryEquivalence { j: jr, f: fr, agree }
}

/// `max_ij |g(l e_i, m e_j)|` at `p`.
pub fn orthogonality_residual<T: Scalar>(
    g: &MetricField,
    l: &TensorField11,
    m: &TensorField11,
    p: &[T],
) -> Result<T> {
    let gm = g.eval(p)?;
    Ok(max_abs(&(l.eval(p)?.transpose() * gm * m.eval(p)?)))
}

/// Whether the eigendistributions `im l` and `im m` are `g`-orthogonal.
pub fn orthogonality_check<T: Scalar>(
    g: &MetricField,
    l: &TensorField11,
    m: &TensorField11,
    points: &[Vec<T>],
    tol: T,
) -> CheckResult<T> {
    sweep(points, tol, |p| {
        symmetric_metric(g, p, tol)?;
        orthogonality_residual(g, l, m, p)
    })
}

/// `|N_J(JX, Y) - N_J(X, JY)|` at `p`.
pub fn nj_symmetry_residual<T: Scalar>(
    j: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    p: &[T],
) -> Result<T> {
    let lhs = nijenhuis(j, &j.apply_field(x), y, p)?;
    let rhs = nijenhuis(j, x, &j.apply_field(y), p)?;
    Ok(max_abs_vec(&vec_sub(&lhs, &rhs)))
}

pub fn nj_symmetry_check<T: Scalar>(
    j: &TensorField11,
    x: &VectorField,
    y: &VectorField,
    points: &[Vec<T>],
    tol: T,
) -> CheckResult<T> {
    sweep(points, tol, |p| nj_symmetry_residual(j, x, y, p))
}

/// Worst `|N_J(e_i, e_j)|` over coordinate frame pairs at `p`.
pub fn nijenhuis_frame_residual<T: Scalar>(j: &TensorField11, p: &[T]) -> Result<T> {
    let frame = VectorField::frame(j.dim());
    let mut worst = T::zero();
    for (i, x) in frame.iter().enumerate() {
        for y in &frame[i + 1..] {
            worst = worst.max(max_abs_vec(&nijenhuis(j, x, y, p)?));
        }
    }
    Ok(worst)
}

/// Worst `|(nabla_{e_i} A) e_j|` over coordinate frame pairs at `p`.
pub fn frame_parallelism_residual<T: Scalar>(
    conn: &ConnectionCoeffs,
    a: &TensorField11,
    p: &[T],
) -> Result<T> {
    let frame = VectorField::frame(a.dim());
    let mut worst = T::zero();
    for x in &frame {
        for y in &frame {
            worst = worst.max(max_abs_vec(&nabla_tensor(conn, a, x, y, p)?));
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocallyProductVerdict {
    /// `F` is Levi-Civita parallel, hence `J` is integrable.
    LocallyProduct,
    /// Not locally product, but `N_J` vanishes anyway.
    IntegrableOnly,
    Neither,
    /// `F` is parallel but `N_J` does not vanish: contradicts the implication,
    /// which indicates numerical trouble.
    Inconsistent,
}

impl LocallyProductVerdict {
    pub fn describe(self) -> &'static str {
        match self {
            LocallyProductVerdict::LocallyProduct => "locally product; integrable",
            LocallyProductVerdict::IntegrableOnly => "not locally product; integrable anyway",
            LocallyProductVerdict::Neither => "not locally product; not integrable",
            LocallyProductVerdict::Inconsistent => {
                "F is Levi-Civita parallel but N_J does not vanish"
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocallyProduct<T> {
    /// `(nabla^g F)` over frame pairs.
    pub parallel: CheckResult<T>,
    /// `N_J` over frame pairs.
    pub integrable: CheckResult<T>,
    pub verdict: LocallyProductVerdict,
}

/// Whether `F` is parallel for the Levi-Civita connection of `g`, together with
/// the integrability of `J` that this implies.
pub fn locally_product_check<T: Scalar>(
    g: &MetricField,
    j: &TensorField11,
    params: &MetallicParams<T>,
    points: &[Vec<T>],
    tol: T,
) -> LocallyProduct<T> {
    let f = params.product_from_metallic(j);
    let lc = ConnectionCoeffs::levi_civita(g);
    let parallel = sweep(points, tol, |p| {
        symmetric_metric(g, p, tol)?;
        frame_parallelism_residual(&lc, &f, p)
    });
    let integrable = sweep(points, tol, |p| nijenhuis_frame_residual(j, p));
    let verdict = match (parallel.pass, integrable.pass) {
        (true, true) => LocallyProductVerdict::LocallyProduct,
        (true, false) => LocallyProductVerdict::Inconsistent,
        (false, true) => LocallyProductVerdict::IntegrableOnly,
        (false, false) => LocallyProductVerdict::Neither,
    };
    LocallyProduct {
        parallel,
        integrable,
        verdict,
    }
}

/// Smallest pivot of an unpivoted `LDL^T` elimination at `p`; positive iff `g`
/// is positive definite there.
pub fn min_pivot<T: Scalar>(g: &MetricField, p: &[T]) -> Result<T> {
    let mut a = g.eval(p)?;
    let n = a.nrows();
    let mut least = T::infinity();
    for c in 0..n {
        let piv = a[(c, c)];
        least = least.min(piv);
        if piv <= T::zero() {
            return Ok(least);
        }
        for r in c + 1..n {
            let f = a[(r, c)] / piv;
            for k in c..n {
                let v = a[(c, k)];
                a[(r, k)] -= f * v;
            }
        }
    }
    Ok(least)
}

/// Fails at the first point where `g` is not positive definite.
pub fn definiteness_check<T: Scalar>(g: &MetricField, points: &[Vec<T>], tol: T) -> CheckResult<T> {
    sweep(points, tol, |p| {
        let piv = min_pivot(g, p)?;
        if piv > T::zero() {
            Ok(T::zero())
        } else {
            Err(Error::Precondition {
                condition: "positive definite metric".into(),
                residual: piv.to_f64_lossy(),
                point: to_f64_vec(p),
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;

    fn pts() -> Vec<Vec<f64>> {
        vec![vec![0.5, -1.0], vec![1.25, 0.75], vec![-0.3, 0.2]]
    }

    fn golden() -> MetallicParams<f64> {
        MetallicParams::new(1, 1).unwrap()
    }

    fn m2(v: [f64; 4]) -> TensorField11 {
        TensorField11::constant(&DMatrix::from_row_slice(2, 2, &v))
    }

    #[test]
    fn symmetric_structure_passes() {
        let s5 = 5f64.sqrt();
        let j2 = m2([0.5, s5 / 2.0, s5 / 2.0, 0.5]);
        let r = g_symmetry_check(&MetricField::euclidean(2), &j2, &pts(), 0.0);
        assert!(r.pass && r.max_residual == 0.0);
    }

    #[test]
    fn triangular_structure_fails_with_unit_residual() {
        let p = golden();
        let j = m2([p.rho(), 1.0, 0.0, p.rho_conjugate()]);
        let r = g_symmetry_check(&MetricField::euclidean(2), &j, &pts(), 1e-8);
        assert!(!r.pass);
        assert_eq!(r.max_residual, 1.0);
        let e = equivalence_f_j_symmetry(&MetricField::euclidean(2), &j, &p, &pts(), 1e-8);
        assert!(e.agree && !e.j.pass && !e.f.pass);
    }

    #[test]
    fn frame_and_matrix_forms_agree() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let g = c.metric(&[vec!["2 + x^2", "x*y"], vec!["x*y", "1 + y^2"]]).unwrap();
        let a = c.tensor11(&[vec!["x", "1"], vec!["y^2", "sin(x)"]]).unwrap();
        for p in pts() {
            let r1 = g_symmetry_residual(&g, &a, &p).unwrap();
            let r2 = g_symmetry_matrix_residual(&g, &a, &p).unwrap();
            assert!((r1 - r2).abs() <= 1e-12);
        }
    }

    #[test]
    fn orthogonality_examples() {
        let g = MetricField::euclidean(2);
        let r = orthogonality_check(&g, &m2([1.0, 0.0, 0.0, 0.0]), &m2([0.0, 0.0, 0.0, 1.0]), &pts(), 1e-12);
        assert!(r.pass && r.max_residual == 0.0);
        let l = m2([1.0, 1.0, 0.0, 0.0]);
        let m = m2([0.0, -1.0, 0.0, 1.0]);
        let r = orthogonality_check(&g, &l, &m, &pts(), 1e-8);
        assert!(!r.pass);
        assert_eq!(r.max_residual, 1.0);
    }

    #[test]
    fn asymmetric_metric_fails_the_check() {
        let g = MetricField::constant(&DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]));
        let r = g_symmetry_check(&g, &TensorField11::identity(2), &pts(), 1e-8);
        assert!(!r.pass && r.failure.unwrap().contains("metric symmetry"));
    }

    #[test]
    fn constant_structures_are_locally_product() {
        let p = MetallicParams::<f64>::new(2, 1).unwrap();
        let j = m2([p.rho(), 0.0, 0.0, p.rho_conjugate()]);
        let lp = locally_product_check(&MetricField::euclidean(2), &j, &p, &pts(), 1e-10);
        assert_eq!(lp.verdict, LocallyProductVerdict::LocallyProduct);
        let e = VectorField::frame(2);
        assert!(nj_symmetry_check(&j, &e[0], &e[1], &pts(), 0.0).pass);
    }

    #[test]
    fn definiteness() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let g = c.metric(&[vec!["1", "0"], vec!["0", "x"]]).unwrap();
        assert!(!definiteness_check(&g, &pts(), 0.0).pass);
        assert!(definiteness_check(&MetricField::euclidean(2), &pts(), 0.0).pass);
    }
}
