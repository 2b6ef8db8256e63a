//! Metallic structures `J^2 = aJ + bI` and their relatives.
//!
//! The affine correspondence `J = (a/2) I + (sqrt(a^2+4b)/2) F` links a
//! metallic structure to an almost product structure `F` (`F^2 = I`). The
//! same map sends almost tangent (`T^2 = 0`) and almost complex (`C^2 = -I`)
//! structures to tangent and complex metallic structures, which obey their own
//! quadratic relations rather than the metallic one.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::chart::TensorField11;
use crate::check::{sweep, CheckResult, Probe};
use crate::error::{Error, Result};
use crate::linalg::{identity, max_abs, max_abs_complex};
use crate::scalar::Scalar;

/// Parameters `(a, b)` of the metallic polynomial `x^2 - a x - b`, with the
/// derived metallic ratio `rho = (a + sqrt(a^2+4b)) / 2` and
/// `disc = sqrt(a^2+4b) = 2 rho - a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetallicParams<T> {
    a: T,
    b: T,
    rho: T,
    disc: T,
}

impl<T: Scalar> MetallicParams<T> {
    /// Positive integer parameters.
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::Params(format!(
                "a and b must be positive integers, got a={a}, b={b}"
            )));
        }
        Ok(Self::from_positive(T::lit(a as f64), T::lit(b as f64)))
    }

    /// Real-valued parameters. Unless `allow_real` is set they must still be
    /// positive integers.
    pub fn from_values(a: f64, b: f64, allow_real: bool) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::Params(format!(
                "a and b must be positive, got a={a}, b={b}"
            )));
        }
        if !allow_real && (a.fract() != 0.0 || b.fract() != 0.0) {
            return Err(Error::Params(format!(
                "a and b must be integers, got a={a}, b={b} (use real parameters explicitly to relax)"
            )));
        }
        Ok(Self::from_positive(T::lit(a), T::lit(b)))
    }

    fn from_positive(a: T, b: T) -> Self {
        let disc = (a * a + T::lit(4.0) * b).sqrt();
        let rho = (a + disc) / T::lit(2.0);
        MetallicParams { a, b, rho, disc }
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// The metallic ratio `rho_{a,b}`.
    pub fn rho(&self) -> T {
        self.rho
    }

    /// The second eigenvalue `a - rho`.
    pub fn rho_conjugate(&self) -> T {
        self.a - self.rho
    }

    /// `sqrt(a^2 + 4b)`.
    pub fn disc(&self) -> T {
        self.disc
    }

    /// Tangent real metallic ratio `a/2`.
    pub fn tangent_ratio(&self) -> T {
        self.a / T::lit(2.0)
    }

    /// Complex metallic ratio `a/2 + (sqrt(a^2+4b)/2) i` and its conjugate.
    pub fn complex_ratios(&self) -> [Complex<T>; 2] {
        let half = T::lit(2.0);
        let re = self.a / half;
        let im = self.disc / half;
        [Complex::new(re, im), Complex::new(re, -im)]
    }

    fn f(x: T) -> f64 {
        x.to_f64_lossy()
    }

    /// `J = (a/2) I + ((2rho - a)/2) F`, without checking `F^2 = I`.
    pub fn metallic_from_product(&self, f: &TensorField11) -> TensorField11 {
        f.affine(Self::f(self.a) / 2.0, Self::f(self.disc) / 2.0)
    }

    /// `F = (2/(2rho - a)) J - (a/(2rho - a)) I`, without checking `J`.
    pub fn product_from_metallic(&self, j: &TensorField11) -> TensorField11 {
        let d = Self::f(self.disc);
        j.affine(-Self::f(self.a) / d, 2.0 / d)
    }

    /// The conjugate structure `a I - J`.
    pub fn conjugate(&self, j: &TensorField11) -> TensorField11 {
        j.affine(Self::f(self.a), -1.0)
    }

    /// `J^{-1} = (J - a I) / b`.
    pub fn inverse(&self, j: &TensorField11) -> TensorField11 {
        let b = Self::f(self.b);
        j.affine(-Self::f(self.a) / b, 1.0 / b)
    }

    /// Eigen-projectors `(l, m)` onto the `rho`- and `(a - rho)`-eigendistributions:
    /// `l = J/(2rho-a) - ((a-rho)/(2rho-a)) I`, `m = -J/(2rho-a) + (rho/(2rho-a)) I`.
    pub fn projectors(&self, j: &TensorField11) -> (TensorField11, TensorField11) {
        let d = Self::f(self.disc);
        let rho = Self::f(self.rho);
        let a = Self::f(self.a);
        let l = j.affine(-(a - rho) / d, 1.0 / d);
        let m = j.affine(rho / d, -1.0 / d);
        (l, m)
    }

    /// `J = rho I - sqrt(a^2+4b) v` for a projector `v`.
    pub fn metallic_from_projector(&self, v: &TensorField11) -> TensorField11 {
        v.affine(Self::f(self.rho), -Self::f(self.disc))
    }

    /// `J_t = (a/2) I + ((2rho - a)/2) T`.
    pub fn tangent_from_almost_tangent(&self, t: &TensorField11) -> TensorField11 {
        self.metallic_from_product(t)
    }

    /// `|| M^2 - a M - b I ||_max`.
    pub fn metallic_residual(&self, m: &DMatrix<T>) -> T {
        let n = m.nrows();
        let r = m * m - m * self.a - identity::<T>(n) * self.b;
        max_abs(&r)
    }

    /// `|| (M - rho I)(M - (a - rho) I) ||_max`: zero iff the spectrum of `M`
    /// lies in `{rho, a - rho}` and `M` is diagonalizable.
    pub fn spectrum_residual(&self, m: &DMatrix<T>) -> T {
        let n = m.nrows();
        let id = identity::<T>(n);
        let r = (m - &id * self.rho) * (m - &id * self.rho_conjugate());
        max_abs(&r)
    }
}

/// `rho_{a,b} = (a + sqrt(a^2 + 4b)) / 2` for positive integers `a`, `b`.
pub fn metallic_ratio<T: Scalar>(a: u32, b: u32) -> Result<T> {
    Ok(MetallicParams::<T>::new(a, b)?.rho())
}

/// Named members of the metallic means family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetallicMean {
    Golden,
    Silver,
    Bronze,
    Subtle,
    Copper,
    Nickel,
}

impl MetallicMean {
    pub const ALL: [MetallicMean; 6] = [
        MetallicMean::Golden,
        MetallicMean::Silver,
        MetallicMean::Bronze,
        MetallicMean::Subtle,
        MetallicMean::Copper,
        MetallicMean::Nickel,
    ];

    pub fn ab(self) -> (u32, u32) {
        match self {
            MetallicMean::Golden => (1, 1),
            MetallicMean::Silver => (2, 1),
            MetallicMean::Bronze => (3, 1),
            MetallicMean::Subtle => (4, 1),
            MetallicMean::Copper => (1, 2),
            MetallicMean::Nickel => (1, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MetallicMean::Golden => "golden",
            MetallicMean::Silver => "silver",
            MetallicMean::Bronze => "bronze",
            MetallicMean::Subtle => "subtle",
            MetallicMean::Copper => "copper",
            MetallicMean::Nickel => "nickel",
        }
    }

    pub fn ratio(self) -> f64 {
        let (a, b) = self.ab();
        metallic_ratio(a, b).expect("named means have positive parameters")
    }
}

/// First `len` terms of `G(k+1) = a G(k) + b G(k-1)` with `G(0) = c`, `G(1) = d`.
pub fn generalized_fibonacci(a: f64, b: f64, c: f64, d: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let (mut prev, mut cur) = (c, d);
    for k in 0..len {
        if k == 0 {
            out.push(c);
            continue;
        }
        out.push(cur);
        let next = a * cur + b * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// Sweeps `|| J(p)^2 - a J(p) - b I ||_max` over `points`.
pub fn is_metallic<T: Scalar>(
    j: &TensorField11,
    params: &MetallicParams<T>,
    points: &[Vec<T>],
    tol: T,
) -> CheckResult<T> {
    sweep(points, tol, |p| Ok(params.metallic_residual(&j.eval(p)?)))
}

fn involution_residual<T: Scalar>(f: &TensorField11, p: &[T], sign: T) -> Result<T> {
    let m = f.eval(p)?;
    let n = m.nrows();
    Ok(max_abs(&(&m * &m - identity::<T>(n) * sign)))
}

/// Metallic structure from an almost product structure; rejects `F` when
/// `F^2 != I` at a probe point.
pub fn from_product<T: Scalar>(
    f: &TensorField11,
    params: &MetallicParams<T>,
    probe: &Probe<'_, T>,
) -> Result<TensorField11> {
    probe.require("almost product condition F^2 = I", |p| {
        involution_residual(f, p, T::one())
    })?;
    Ok(params.metallic_from_product(f))
}

/// Almost product structure associated with a metallic `J`.
pub fn to_product<T: Scalar>(
    j: &TensorField11,
    params: &MetallicParams<T>,
    probe: &Probe<'_, T>,
) -> Result<TensorField11> {
    require_metallic(j, params, probe)?;
    Ok(params.product_from_metallic(j))
}

pub(crate) fn require_metallic<T: Scalar>(
    j: &TensorField11,
    params: &MetallicParams<T>,
    probe: &Probe<'_, T>,
) -> Result<()> {
    probe.require("metallic condition J^2 = aJ + bI", |p| {
        Ok(params.metallic_residual(&j.eval(p)?))
    })
}

/// `a I - J`, again metallic for the same `(a, b)`.
pub fn conjugate<T: Scalar>(j: &TensorField11, params: &MetallicParams<T>) -> TensorField11 {
    params.conjugate(j)
}

/// `J^{-1} = (J - a I)/b`, which satisfies `b K^2 + a K - I = 0`.
pub fn inverse_structure<T: Scalar>(
    j: &TensorField11,
    params: &MetallicParams<T>,
) -> TensorField11 {
    params.inverse(j)
}

/// `max(|| J K - I ||, || b K^2 + a K - I ||)` at `p`, with `K` the inverse structure.
pub fn inverse_residual<T: Scalar>(
    j: &TensorField11,
    params: &MetallicParams<T>,
    p: &[T],
) -> Result<T> {
    let jm = j.eval(p)?;
    let km = params.inverse(j).eval(p)?;
    let id = identity::<T>(jm.nrows());
    let r1 = max_abs(&(&jm * &km - &id));
    let r2 = max_abs(&(&km * &km * params.b() + &km * params.a() - &id));
    Ok(r1.max(r2))
}

/// A tangent metallic structure: annihilated by `x^2 - a x + a^2/4`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentMetallic<T> {
    pub field: TensorField11,
    /// Tangent real metallic ratio `a/2`.
    pub ratio: T,
}

pub fn tangent_metallic<T: Scalar>(
    t: &TensorField11,
    params: &MetallicParams<T>,
    probe: &Probe<'_, T>,
) -> Result<TangentMetallic<T>> {
    probe.require("almost tangent condition T^2 = 0", |p| {
        let m = t.eval(p)?;
        Ok(max_abs(&(&m * &m)))
    })?;
    Ok(TangentMetallic {
        field: params.tangent_from_almost_tangent(t),
        ratio: params.tangent_ratio(),
    })
}

/// `|| J_t^2 - a J_t + (a^2/4) I ||_max` at `p`.
pub fn tangent_residual<T: Scalar>(jt: &TensorField11, params: &MetallicParams<T>, p: &[T]) -> Result<T> {
    let m = jt.eval(p)?;
    let a = params.a();
    let id = identity::<T>(m.nrows());
    Ok(max_abs(&(&m * &m - &m * a + id * (a * a / T::lit(4.0)))))
}

/// A complex metallic structure (constant matrix, complex entries allowed).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMetallic<T: Scalar> {
    pub matrix: DMatrix<Complex<T>>,
    /// `a/2 + (sqrt(a^2+4b)/2) i`.
    pub ratio: Complex<T>,
    /// `|| J_c^2 - a J_c + ((a^2+2b)/2) I ||_max`.
    pub residual: T,
}

/// `J_c = (a/2) I + ((2rho - a)/2) C` for a constant `C` with `C^2 = -I`.
pub fn complex_metallic<T: Scalar>(
    c: &DMatrix<Complex<T>>,
    params: &MetallicParams<T>,
    tol: T,
) -> Result<ComplexMetallic<T>> {
    let n = c.nrows();
    let id = identity::<Complex<T>>(n);
    let sq = max_abs_complex(&(c * c + &id));
    if !(sq <= tol) {
        return Err(Error::Precondition {
            condition: "almost complex condition C^2 = -I".into(),
            residual: sq.to_f64_lossy(),
            point: Vec::new(),
        });
    }
    let half = T::lit(2.0);
    let jc = &id * Complex::from(params.a() / half) + c * Complex::from(params.disc() / half);
    let residual = complex_polynomial_residual(&jc, params);
    Ok(ComplexMetallic {
        matrix: jc,
        ratio: params.complex_ratios()[0],
        residual,
    })
}

/// `|| M^2 - a M + ((a^2+2b)/2) I ||_max` for a (possibly complex) matrix.
pub fn complex_polynomial_residual<T: Scalar>(
    m: &DMatrix<Complex<T>>,
    params: &MetallicParams<T>,
) -> T {
    let a = params.a();
    let k = (a * a + T::lit(2.0) * params.b()) / T::lit(2.0);
    let id = identity::<Complex<T>>(m.nrows());
    max_abs_complex(&(m * m - m * Complex::from(a) + id * Complex::from(k)))
}

/// Eigen-projectors of a metallic `J`; rejects non-metallic input.
pub fn projectors<T: Scalar>(
    j: &TensorField11,
    params: &MetallicParams<T>,
    probe: &Probe<'_, T>,
) -> Result<(TensorField11, TensorField11)> {
    require_metallic(j, params, probe)?;
    Ok(params.projectors(j))
}

/// Worst residual at `p` over the projector identities
/// `l^2 = l, m^2 = m, lm = ml = 0, l + m = I` and the eigen-relations
/// `Jl = lJ = rho l, Jm = mJ = (a - rho) m`.
pub fn projector_identity_residual<T: Scalar>(
    j: &TensorField11,
    l: &TensorField11,
    m: &TensorField11,
    params: &MetallicParams<T>,
    p: &[T],
) -> Result<T> {
    let (jm, lm, mm) = (j.eval(p)?, l.eval(p)?, m.eval(p)?);
    let n = jm.nrows();
    let id = identity::<T>(n);
    let zero = DMatrix::<T>::zeros(n, n);
    let rho = params.rho();
    let rhoc = params.rho_conjugate();
    let pairs = [
        (&lm * &lm, lm.clone()),
        (&mm * &mm, mm.clone()),
        (&lm * &mm, zero.clone()),
        (&mm * &lm, zero),
        (&lm + &mm, id),
        (&jm * &lm, &lm * rho),
        (&lm * &jm, &lm * rho),
        (&jm * &mm, &mm * rhoc),
        (&mm * &jm, &mm * rhoc),
    ];
    Ok(pairs
        .iter()
        .map(|(x, y)| max_abs(&(x - y)))
        .fold(T::zero(), T::max))
}

/// Metallic structure whose `rho`-eigenspace is `ker v` and whose
/// `(a - rho)`-eigenspace is `im v`; rejects non-idempotent `v`.
pub fn metallic_from_projector<T: Scalar>(
    v: &TensorField11,
    params: &MetallicParams<T>,
    probe: &Probe<'_, T>,
) -> Result<TensorField11> {
    probe.require("idempotence v^2 = v", |p| {
        let m = v.eval(p)?;
        Ok(max_abs(&(&m * &m - &m)))
    })?;
    Ok(params.metallic_from_projector(v))
}

/// `max(|| J (I - v) - rho (I - v) ||, || J v - (a - rho) v ||)` at `p`.
pub fn projector_eigen_residual<T: Scalar>(
    j: &TensorField11,
    v: &TensorField11,
    params: &MetallicParams<T>,
    p: &[T],
) -> Result<T> {
    let jm = j.eval(p)?;
    let vm = v.eval(p)?;
    let h = identity::<T>(vm.nrows()) - &vm;
    let r1 = max_abs(&(&jm * &h - &h * params.rho()));
    let r2 = max_abs(&(&jm * &vm - &vm * params.rho_conjugate()));
    Ok(r1.max(r2))
}

/// `|| (Jp - rho I)(Jp - (a - rho) I) ||_max` for a matrix at a point.
pub fn annihilating_spectrum_check<T: Scalar>(jp: &DMatrix<T>, params: &MetallicParams<T>) -> T {
    params.spectrum_residual(jp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::linalg::{eigenvalues_2x2, to_complex};

    fn m2(v: [f64; 4]) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &v)
    }

    fn golden() -> MetallicParams<f64> {
        MetallicParams::new(1, 1).unwrap()
    }

    fn pts() -> Vec<Vec<f64>> {
        vec![vec![0.5, -1.0], vec![1.5, 0.25], vec![-0.7, 0.9]]
    }

    #[test]
    fn named_means() {
        assert_eq!(metallic_ratio::<f64>(1, 1).unwrap(), 1.618_033_988_749_895);
        assert_eq!(metallic_ratio::<f64>(2, 1).unwrap(), 2.414_213_562_373_095);
        assert_eq!(metallic_ratio::<f64>(1, 2).unwrap(), 2.0);
        assert_eq!(metallic_ratio::<f64>(3, 1).unwrap(), 3.302_775_637_731_995);
        assert_eq!(MetallicMean::Subtle.ratio(), 2.0 + 5f64.sqrt());
        assert_eq!(MetallicMean::Nickel.name(), "nickel");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MetallicParams::<f64>::new(0, 1).is_err());
        assert!(MetallicParams::<f64>::new(1, 0).is_err());
        assert!(MetallicParams::<f64>::from_values(1.5, 1.0, false).is_err());
        assert!(MetallicParams::<f64>::from_values(-1.0, 1.0, true).is_err());
        let p = MetallicParams::<f64>::from_values(1.5, 0.5, true).unwrap();
        assert!((p.rho() * p.rho() - 1.5 * p.rho() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn ratio_invariants_over_grid() {
        for a in 1..=50 {
            for b in 1..=50 {
                let p = MetallicParams::<f64>::new(a, b).unwrap();
                let rho = p.rho();
                let scale = rho * rho;
                assert!((rho * rho - p.a() * rho - p.b()).abs() <= 1e-12 * scale.max(1.0));
                assert!((p.disc() - (2.0 * rho - p.a())).abs() <= 1e-12 * rho);
            }
        }
    }

    #[test]
    fn fibonacci_sequence() {
        assert_eq!(
            generalized_fibonacci(1.0, 1.0, 0.0, 1.0, 8),
            vec![0.0, 1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0]
        );
        // c, d, ad + bc, a(ad + bc) + bd
        assert_eq!(
            generalized_fibonacci(2.0, 3.0, 1.0, 1.0, 4),
            vec![1.0, 1.0, 5.0, 13.0]
        );
    }

    #[test]
    fn is_metallic_examples() {
        let p = golden();
        let j1 = TensorField11::constant(&m2([p.rho(), 0.0, 0.0, 1.0 - p.rho()]));
        let r = is_metallic(&j1, &p, &pts(), 1e-12);
        assert!(r.pass && r.max_residual <= 1e-12);
        let r = is_metallic(&TensorField11::identity(2), &p, &pts(), 1e-12);
        assert!(!r.pass);
        assert_eq!(r.max_residual, 1.0);
    }

    #[test]
    fn from_product_examples() {
        let p = golden();
        let probe_pts = pts();
        let probe = Probe::new(&probe_pts, 1e-12);
        let f = TensorField11::constant(&m2([1.0, 0.0, 0.0, -1.0]));
        let j = from_product(&f, &p, &probe).unwrap().eval(&[0.0, 0.0]).unwrap();
        assert!((j - m2([p.rho(), 0.0, 0.0, 1.0 - p.rho()])).amax() < 1e-15);

        let j = from_product(&TensorField11::identity(2), &p, &probe).unwrap();
        assert!((j.eval(&[0.0, 0.0]).unwrap() - m2([p.rho(), 0.0, 0.0, p.rho()])).amax() < 1e-15);

        let e2 = TensorField11::constant(&m2([0.0, 1.0, 1.0, 0.0]));
        let j2 = from_product(&e2, &p, &probe).unwrap().eval(&[0.0, 0.0]).unwrap();
        let s5 = 5f64.sqrt();
        assert!((j2 - m2([0.5, s5 / 2.0, s5 / 2.0, 0.5])).amax() < 1e-15);

        let bad = TensorField11::constant(&m2([2.0, 0.0, 0.0, 1.0]));
        assert!(matches!(
            from_product(&bad, &p, &probe),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn to_product_examples() {
        let p = MetallicParams::<f64>::new(3, 2).unwrap();
        let probe_pts = pts();
        let probe = Probe::new(&probe_pts, 1e-12);
        let j = TensorField11::constant(&m2([p.rho(), 0.0, 0.0, p.rho_conjugate()]));
        let f = to_product(&j, &p, &probe).unwrap().eval(&[0.0, 0.0]).unwrap();
        assert!((f - m2([1.0, 0.0, 0.0, -1.0])).amax() < 1e-14);
        let f = to_product(&TensorField11::identity(2).scale(p.rho()), &p, &probe).unwrap();
        assert!((f.eval(&[0.0, 0.0]).unwrap() - DMatrix::identity(2, 2)).amax() < 1e-14);
        assert!(to_product(&TensorField11::identity(2), &p, &probe).is_err());
    }

    #[test]
    fn product_round_trip_on_a_field() {
        let c = Chart::new(&["x", "y"]).unwrap();
        // a reflection field: F^2 = I everywhere
        let f = c
            .tensor11(&[
                vec!["cos(x)", "sin(x)"],
                vec!["sin(x)", "-cos(x)"],
            ])
            .unwrap();
        let p = MetallicParams::<f64>::new(2, 5).unwrap();
        let probe_pts = pts();
        let probe = Probe::new(&probe_pts, 1e-12);
        let j = from_product(&f, &p, &probe).unwrap();
        assert!(is_metallic(&j, &p, &probe_pts, 1e-12).pass);
        let back = to_product(&j, &p, &probe).unwrap();
        for q in &probe_pts {
            assert!((back.eval(q).unwrap() - f.eval(q).unwrap()).amax() <= 1e-12);
        }
    }

    #[test]
    fn conjugate_examples() {
        let p = golden();
        let s5 = 5f64.sqrt();
        let j = TensorField11::constant(&m2([p.rho(), 0.0, 0.0, 1.0 - p.rho()]));
        let jc = conjugate(&j, &p).eval(&[0.0, 0.0]).unwrap();
        assert!((jc - m2([1.0 - p.rho(), 0.0, 0.0, p.rho()])).amax() < 1e-15);
        let j2 = TensorField11::constant(&m2([0.5, s5 / 2.0, s5 / 2.0, 0.5]));
        let jc2 = conjugate(&j2, &p).eval(&[0.0, 0.0]).unwrap();
        assert!((jc2 - m2([0.5, -s5 / 2.0, -s5 / 2.0, 0.5])).amax() < 1e-15);
        let back = conjugate(&conjugate(&j2, &p), &p).eval(&[0.0, 0.0]).unwrap();
        assert!((back - j2.eval(&[0.0, 0.0]).unwrap()).amax() == 0.0);
        assert!(is_metallic(&conjugate(&j2, &p), &p, &pts(), 1e-12).pass);
    }

    #[test]
    fn inverse_examples() {
        let p = golden();
        let j = TensorField11::constant(&m2([p.rho(), 0.0, 0.0, 1.0 - p.rho()]));
        let k = inverse_structure(&j, &p).eval(&[0.0, 0.0]).unwrap();
        // oracle: numeric inverse of the diagonal
        let oracle = m2([1.0 / p.rho(), 0.0, 0.0, 1.0 / (1.0 - p.rho())]);
        assert!((&k - oracle).amax() < 1e-14);
        assert!((k - m2([p.rho() - 1.0, 0.0, 0.0, -p.rho()])).amax() < 1e-14);
        assert!(inverse_residual(&j, &p, &[0.0, 0.0]).unwrap() < 1e-14);
        let scalar = TensorField11::identity(2).scale(p.rho());
        let ks = inverse_structure(&scalar, &p).eval(&[0.0, 0.0]).unwrap();
        assert!((ks - DMatrix::identity(2, 2) / p.rho()).amax() < 1e-14);
    }

    #[test]
    fn tangent_examples() {
        let p = golden();
        let probe_pts = pts();
        let probe = Probe::new(&probe_pts, 1e-12);
        let t = TensorField11::constant(&m2([0.0, 0.0, 1.0, 0.0]));
        let jt = tangent_metallic(&t, &p, &probe).unwrap();
        let s5 = 5f64.sqrt();
        assert!((jt.field.eval(&[0.0, 0.0]).unwrap() - m2([0.5, 0.0, s5 / 2.0, 0.5])).amax() < 1e-15);
        assert!(tangent_residual(&jt.field, &p, &[0.0, 0.0]).unwrap() <= 1e-12);
        assert_eq!(jt.ratio, 0.5);
        let z = tangent_metallic(&TensorField11::zero(2), &p, &probe).unwrap();
        assert!((z.field.eval(&[0.0, 0.0]).unwrap() - DMatrix::identity(2, 2) * 0.5).amax() == 0.0);
        assert!(tangent_metallic(&TensorField11::identity(2), &p, &probe).is_err());
    }

    #[test]
    fn complex_examples() {
        let p = golden();
        let c = to_complex(&m2([0.0, -1.0, 1.0, 0.0]));
        let jc = complex_metallic(&c, &p, 1e-12).unwrap();
        let s5 = 5f64.sqrt();
        let expected = to_complex(&m2([0.5, -s5 / 2.0, s5 / 2.0, 0.5]));
        assert!(max_abs_complex(&(&jc.matrix - expected)) < 1e-15);
        assert!(jc.residual <= 1e-12);
        let real = jc.matrix.map(|z| z.re);
        let [l1, l2] = eigenvalues_2x2(&real);
        assert!((l1 - Complex::new(0.5, s5 / 2.0)).norm() < 1e-14);
        assert!((l2 - Complex::new(0.5, -s5 / 2.0)).norm() < 1e-14);
        assert_eq!(jc.ratio, Complex::new(0.5, s5 / 2.0));
        assert!(complex_metallic(&to_complex(&DMatrix::identity(2, 2)), &p, 1e-12).is_err());
    }

    #[test]
    fn projector_examples() {
        let p = MetallicParams::<f64>::new(2, 3).unwrap();
        let probe_pts = pts();
        let probe = Probe::new(&probe_pts, 1e-12);
        let j = TensorField11::constant(&m2([p.rho(), 0.0, 0.0, p.rho_conjugate()]));
        let (l, m) = projectors(&j, &p, &probe).unwrap();
        assert!((l.eval(&[0.0, 0.0]).unwrap() - m2([1.0, 0.0, 0.0, 0.0])).amax() < 1e-15);
        assert!((m.eval(&[0.0, 0.0]).unwrap() - m2([0.0, 0.0, 0.0, 1.0])).amax() < 1e-15);
        assert!(projector_identity_residual(&j, &l, &m, &p, &[0.0, 0.0]).unwrap() < 1e-14);
        assert!(projectors(&TensorField11::identity(2), &p, &probe).is_err());
    }

    #[test]
    fn structure_from_projector_examples() {
        let p = MetallicParams::<f64>::new(1, 3).unwrap();
        let probe_pts = pts();
        let probe = Probe::new(&probe_pts, 1e-12);
        let j0 = metallic_from_projector(&TensorField11::zero(2), &p, &probe).unwrap();
        assert!((j0.eval(&[0.0, 0.0]).unwrap() - DMatrix::identity(2, 2) * p.rho()).amax() < 1e-15);
        let v = TensorField11::constant(&m2([0.0, 0.0, 0.0, 1.0]));
        let j = metallic_from_projector(&v, &p, &probe).unwrap();
        assert!((j.eval(&[0.0, 0.0]).unwrap() - m2([p.rho(), 0.0, 0.0, p.rho_conjugate()])).amax() < 1e-14);
        assert!(projector_eigen_residual(&j, &v, &p, &[0.0, 0.0]).unwrap() < 1e-14);
        let bad = TensorField11::identity(2).scale(2.0);
        assert!(metallic_from_projector(&bad, &p, &probe).is_err());
    }

    #[test]
    fn spectrum_check_examples() {
        let p = golden();
        let d = m2([p.rho(), 0.0, 0.0, 1.0 - p.rho()]);
        assert!(annihilating_spectrum_check(&d, &p) < 1e-15);
        // direct evaluation: (1 - rho)(1 - (1 - rho)) = rho - rho^2 = -1
        let r = annihilating_spectrum_check(&DMatrix::identity(2, 2), &p);
        assert!((r - 1.0).abs() < 1e-15 && r > 0.5);
    }

    #[test]
    fn single_precision_params() {
        let p = MetallicParams::<f32>::new(1, 1).unwrap();
        assert!((p.rho() - 1.618_034f32).abs() < 1e-6);
    }
}
