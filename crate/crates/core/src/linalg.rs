//! Small dense helpers on top of `nalgebra` that only need a num-traits float.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::scalar::Scalar;

/// Max-norm over entries.
pub fn max_abs<T: Scalar>(m: &DMatrix<T>) -> T {
    m.iter().map(|e| e.abs()).fold(T::zero(), T::max)
}

/// Max-norm over the moduli of complex entries.
pub fn max_abs_complex<T: Scalar>(m: &DMatrix<Complex<T>>) -> T {
    m.iter().map(|e| e.re.hypot(e.im)).fold(T::zero(), T::max)
}

pub fn max_abs_vec<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|e| e.abs()).fold(T::zero(), T::max)
}

pub fn identity<E: nalgebra::Scalar + num_traits::Zero + num_traits::One>(n: usize) -> DMatrix<E> {
    DMatrix::identity(n, n)
}

pub fn mat_vec<T: Scalar>(m: &DMatrix<T>, v: &[T]) -> Vec<T> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).fold(T::zero(), |acc, j| acc + m[(i, j)] * v[j]))
        .collect()
}

pub fn vec_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

pub fn vec_add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

pub fn vec_scale<T: Scalar>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|x| *x * s).collect()
}

/// `sum_i c_i v_i` over equally sized vectors.
pub fn lincomb<T: Scalar>(terms: &[(T, &[T])]) -> Vec<T> {
    let n = terms.first().map_or(0, |(_, v)| v.len());
    let mut out = vec![T::zero(); n];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += *c * *x;
        }
    }
    out
}

/// Solution of `a x = b` by Gaussian elimination with partial pivoting.
///
/// Returns the solution and the ratio `min |pivot| / max |pivot|`; `None` when a
/// pivot vanishes exactly.
pub fn solve<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> Option<(DMatrix<T>, T)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.nrows());
    let mut a = a.clone();
    let mut b = b.clone();
    let (mut pmin, mut pmax) = (T::infinity(), T::zero());
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[(i, col)].abs().partial_cmp(&a[(j, col)].abs()).unwrap())
            .unwrap();
        let pv = a[(piv, col)].abs();
        if pv == T::zero() || !pv.is_finite() {
            return None;
        }
        pmin = pmin.min(pv);
        pmax = pmax.max(pv);
        a.swap_rows(col, piv);
        b.swap_rows(col, piv);
        for r in col + 1..n {
            let f = a[(r, col)] / a[(col, col)];
            if f == T::zero() {
                continue;
            }
            for c in col..n {
                let v = a[(col, c)];
                a[(r, c)] -= f * v;
            }
            for c in 0..b.ncols() {
                let v = b[(col, c)];
                b[(r, c)] -= f * v;
            }
        }
    }
    for c in 0..b.ncols() {
        for r in (0..n).rev() {
            let mut s = b[(r, c)];
            for k in r + 1..n {
                s -= a[(r, k)] * b[(k, c)];
            }
            b[(r, c)] = s / a[(r, r)];
        }
    }
    Some((b, pmin / pmax))
}

/// Eigenvalues of a real 2x2 matrix from its characteristic polynomial.
pub fn eigenvalues_2x2<T: Scalar>(m: &DMatrix<T>) -> [Complex<T>; 2] {
    assert_eq!((m.nrows(), m.ncols()), (2, 2));
    let two = T::lit(2.0);
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = tr * tr - T::lit(4.0) * det;
    let half = tr / two;
    if disc >= T::zero() {
        let r = disc.sqrt() / two;
        [Complex::new(half + r, T::zero()), Complex::new(half - r, T::zero())]
    } else {
        let r = (-disc).sqrt() / two;
        [Complex::new(half, r), Complex::new(half, -r)]
    }
}

pub fn to_complex<T: Scalar>(m: &DMatrix<T>) -> DMatrix<Complex<T>> {
    m.map(|x| Complex::new(x, T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_matches_known_inverse() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        let (x, ratio) = solve(&a, &DMatrix::identity(3, 3)).unwrap();
        let prod = &a * &x;
        assert!(max_abs(&(prod - DMatrix::identity(3, 3))) < 1e-14);
        assert!(ratio > 0.1);
    }

    #[test]
    fn solve_detects_singularity() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(solve(&a, &DMatrix::identity(2, 2)).is_none());
    }

    #[test]
    fn rotation_eigenvalues_are_imaginary() {
        let r = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let [l1, l2] = eigenvalues_2x2(&r);
        assert_eq!(l1, Complex::new(0.0, 1.0));
        assert_eq!(l2, Complex::new(0.0, -1.0));
    }
}
