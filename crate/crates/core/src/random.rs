//! Seeded generators for random test data: polynomials, smooth expressions,
//! vector fields, (1,2)-tensors, almost product structures and orthogonal
//! matrices.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::chart::{Chart, TensorField11, TensorField12, VectorField};
use crate::expr::{Expr, Func};

/// Exponent tuples of all monomials of total degree `<= degree` in `dim`
/// variables, in graded lexicographic order.
fn monomials(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(dim, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, degree, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| m.iter().sum::<u32>());
    out
}

fn monomial(chart: &Chart, exps: &[u32]) -> Expr {
    exps.iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .fold(Expr::one(), |acc, (i, e)| {
            let x = chart.coordinate(i);
            let factor = if *e == 1 { x } else { x.pow(*e as f64) };
            &acc * &factor
        })
}

/// A polynomial of total degree `<= degree` whose coefficients are uniform in
/// `[-scale, scale]`.
pub fn polynomial<R: Rng + ?Sized>(rng: &mut R, chart: &Chart, degree: u32, scale: f64) -> Expr {
    Expr::sum(monomials(chart.dim(), degree).iter().map(|m| {
        let c: f64 = rng.random_range(-scale..=scale);
        &monomial(chart, m) * c
    }))
}

pub fn polynomial_field<R: Rng + ?Sized>(rng: &mut R, chart: &Chart, degree: u32, scale: f64) -> VectorField {
    let comps = (0..chart.dim())
        .map(|_| polynomial(rng, chart, degree, scale))
        .collect();
    VectorField::new(chart.dim(), comps).expect("components built on the chart")
}

/// A (1,2)-tensor with polynomial entries of degree `<= 2` in `[-1, 1]`.
pub fn polynomial_tensor12<R: Rng + ?Sized>(rng: &mut R, chart: &Chart) -> TensorField12 {
    let n = chart.dim();
    let entries = (0..n * n * n).map(|_| polynomial(rng, chart, 2, 1.0)).collect();
    TensorField12::new(n, entries).expect("entries built on the chart")
}

/// A random expression tree that is defined and smooth everywhere: every
/// `sqrt`, `ln` and division acts on something bounded away from zero.
pub fn smooth_expr<R: Rng + ?Sized>(rng: &mut R, chart: &Chart, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.2) {
        return if rng.random_bool(0.7) {
            let i = rng.random_range(0..chart.dim());
            chart.coordinate(i)
        } else {
            Expr::num((rng.random_range(-2.0..2.0f64) * 4.0).round() / 4.0)
        };
    }
    let a = smooth_expr(rng, chart, depth - 1);
    let positive = |e: &Expr| &Expr::one() + &e.pow(2.0);
    match rng.random_range(0..10) {
        0 => &a + &smooth_expr(rng, chart, depth - 1),
        1 => &a - &smooth_expr(rng, chart, depth - 1),
        2 | 3 => &a * &smooth_expr(rng, chart, depth - 1),
        4 => &a / &positive(&smooth_expr(rng, chart, depth - 1)),
        5 => Expr::call(Func::Sin, a),
        6 => Expr::call(Func::Cos, a),
        7 => Expr::call(Func::Exp, Expr::call(Func::Sin, a)),
        8 => Expr::call(Func::Ln, positive(&a)),
        _ => Expr::call(Func::Sqrt, positive(&a)),
    }
}

/// The reflection field `F = I - 2 u u^T / <u, u>` with `u = e_k` plus a
/// polynomial perturbation of degree `<= 2` with coefficients in
/// `[-perturbation, perturbation]`. `F^2 = I` and `F^T = F` wherever `u != 0`.
pub fn almost_product<R: Rng + ?Sized>(rng: &mut R, chart: &Chart, perturbation: f64) -> TensorField11 {
    let n = chart.dim();
    let k = rng.random_range(0..n);
    let u: Vec<Expr> = (0..n)
        .map(|i| {
            let p = polynomial(rng, chart, 2, perturbation);
            if i == k {
                &p + &Expr::one()
            } else {
                p
            }
        })
        .collect();
    let norm = Expr::sum(u.iter().map(|c| c * c));
    let entries = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let outer = &(&u[i] * &u[j]) * 2.0;
            let term = &outer / &norm;
            if i == j {
                &Expr::one() - &term
            } else {
                -&term
            }
        })
        .collect();
    TensorField11::new(n, entries).expect("entries built on the chart")
}

/// `S F S^{-1}` for a random constant `S = I + small noise`: still an
/// involution, generally not symmetric.
pub fn conjugated_almost_product<R: Rng + ?Sized>(
    rng: &mut R,
    chart: &Chart,
    perturbation: f64,
    skew: f64,
) -> TensorField11 {
    let f = almost_product(rng, chart, perturbation);
    let n = chart.dim();
    let s = DMatrix::<f64>::identity(n, n) + DMatrix::from_fn(n, n, |_, _| rng.random_range(-skew..=skew));
    let s_inv = s.clone().try_inverse().expect("near-identity matrix is invertible");
    TensorField11::constant(&s).compose(&f).compose(&TensorField11::constant(&s_inv))
}

/// A Haar-ish random orthogonal matrix: the `Q` factor of a Gaussian matrix.
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    g.qr().q()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chart() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(3, 2).len(), 10);
        assert_eq!(monomials(2, 0), vec![vec![0, 0]]);
    }

    #[test]
    fn almost_product_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = chart();
        for _ in 0..10 {
            let f = almost_product(&mut rng, &c, 0.08);
            let g = conjugated_almost_product(&mut rng, &c, 0.08, 0.3);
            for p in [[0.3, -0.9], [1.0, 1.0], [-1.0, 0.2]] {
                let m = f.eval(&p).unwrap();
                assert!(max_abs(&(&m * &m - DMatrix::identity(2, 2))) < 1e-12);
                assert!(max_abs(&(&m - m.transpose())) < 1e-15);
                let m = g.eval(&p).unwrap();
                assert!(max_abs(&(&m * &m - DMatrix::identity(2, 2))) < 1e-12);
            }
        }
    }

    #[test]
    fn smooth_expressions_evaluate_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = chart();
        for _ in 0..200 {
            let e = smooth_expr(&mut rng, &c, 4);
            let v: f64 = e.eval(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]).unwrap();
            assert!(v.is_finite());
        }
    }

    #[test]
    fn orthogonal_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = orthogonal(&mut rng, 4);
        assert!(max_abs(&(q.transpose() * &q - DMatrix::identity(4, 4))) < 1e-14);
    }
}
