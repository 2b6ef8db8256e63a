mod common;

use common::*;
use metallic_core::connect::{
    connection_axioms_residual, metric_compatibility_residual, nijenhuis_via_connection,
    obata_connection, schouten, vranceanu,
};
use rand::Rng;
use metallic_core::random::{almost_product, polynomial, polynomial_field, polynomial_tensor12};
use metallic_core::{
    nijenhuis, Chart, Connection, ConnectionCoeffs, DerivedConnection, Expr, Matrix, MetricField,
    Params, Probe, TensorField11, VectorField,
};

/// `I + eps * (symmetric polynomial perturbation)`.
fn random_metric(r: &mut rand_chacha::ChaCha8Rng, chart: &Chart, eps: f64) -> MetricField {
    let n = chart.dim();
    let mut rows = vec![vec![String::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let p = polynomial(r, chart, 2, eps);
            let s = if i == j { format!("1 + {p}") } else { p.to_string() };
            rows[i][j] = s.clone();
            rows[j][i] = s;
        }
    }
    chart.metric(&rows).unwrap()
}

/// Christoffel symbols from central differences of `g` and a dense inverse.
fn christoffel_fd(g: &MetricField, p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let h = 1e-5;
    let dg: Vec<Matrix> = (0..n)
        .map(|l| {
            let mut a = p.to_vec();
            let mut b = p.to_vec();
            a[l] += h;
            b[l] -= h;
            (g.eval(&a).unwrap() - g.eval(&b).unwrap()) / (2.0 * h)
        })
        .collect();
    let ginv = g.eval(p).unwrap().try_inverse().unwrap();
    let mut out = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                out[(k * n + i) * n + j] = 0.5 * s;
            }
        }
    }
    out
}

#[test]
fn levi_civita_matches_difference_oracle_and_is_compatible() {
    let mut r = rng(21);
    for dim in [2, 3] {
        let names: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
        let chart = Chart::new(&names).unwrap();
        for _ in 0..10 {
            let g = random_metric(&mut r, &chart, 0.1);
            let lc = ConnectionCoeffs::levi_civita(&g);
            for p in points(r.random::<u64>(), 5, dim, 1.0, 0.0) {
                let ad = lc.gamma_at(&p).unwrap();
                let fd = christoffel_fd(&g, &p);
                assert!(max_abs(&sub(&ad, &fd)) < 1e-7);
                assert!(metric_compatibility_residual(&g, &lc, &p).unwrap() <= 1e-8);
                assert!(lc.asymmetry(&p).unwrap() <= 1e-15);
            }
        }
    }
}

#[test]
fn parallel_distributions_make_schouten_equal_to_the_base() {
    // constant projectors onto span(1, 2) along span(1, -1)
    let s = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 2.0, -1.0]);
    let s_inv = s.clone().try_inverse().unwrap();
    let lm = &s * Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]) * &s_inv;
    let l = TensorField11::constant(&lm);
    let m = TensorField11::identity(2).sub(&l);
    let pts = points(3, 20, 2, 2.0, 0.0);
    let flat = ConnectionCoeffs::flat(2);
    let sc = schouten(&flat, &l, &m, &Probe::new(&pts, 1e-12)).unwrap();
    let chart = Chart::new(&["x", "y"]).unwrap();
    let mut r = rng(4);
    for p in &pts {
        let x = polynomial_field(&mut r, &chart, 2, 1.0);
        let y = polynomial_field(&mut r, &chart, 2, 1.0);
        let d = sub(&sc.covariant(&x, &y, p).unwrap(), &flat.covariant(&x, &y, p).unwrap());
        assert!(max_abs(&d) <= 1e-8);
    }
}

#[test]
fn derived_connections_satisfy_the_axioms() {
    let params = Params::new(1, 1).unwrap();
    let chart = plane(&params);
    let mut r = rng(8);
    let pts = points(10, 20, 2, 2.0, 0.1);
    let probe = Probe::new(&pts, 1e-9);
    let j = radial_j(&params);
    let (l, m) = (radial_l(&params), radial_m(&params));
    let bases = [
        ConnectionCoeffs::flat(2),
        ConnectionCoeffs::levi_civita(&random_metric(&mut r, &Chart::new(&["x", "y"]).unwrap(), 0.05)),
    ];
    for base in &bases {
        let q = polynomial_tensor12(&mut r, &chart);
        let conns: Vec<DerivedConnection> = vec![
            schouten(base, &l, &m, &probe).unwrap(),
            vranceanu(base, &l, &m, &probe).unwrap(),
            obata_connection(base, &j, &params, Some(&q), &probe).unwrap(),
        ];
        for conn in &conns {
            for p in &pts {
                let x = polynomial_field(&mut r, &chart, 2, 1.0);
                let y = polynomial_field(&mut r, &chart, 2, 1.0);
                let z = polynomial_field(&mut r, &chart, 2, 1.0);
                let f = polynomial(&mut r, &chart, 2, 1.0);
                let res = connection_axioms_residual(conn, &x, &y, &z, &f, p).unwrap();
                assert!(res <= 1e-8, "{} at {p:?}: {res:e}", conn.kind());
            }
        }
    }
}

#[test]
fn connection_formula_for_nijenhuis_matches_brackets() {
    let chart = Chart::new(&["x", "y"]).unwrap();
    let mut r = rng(30);
    let e = VectorField::frame(2);
    for _ in 0..50 {
        let f = almost_product(&mut r, &chart, 0.08);
        let g = random_metric(&mut r, &chart, 0.05);
        let lc = ConnectionCoeffs::levi_civita(&g);
        let x = polynomial_field(&mut r, &chart, 2, 1.0);
        let y = polynomial_field(&mut r, &chart, 2, 1.0);
        for p in points(r.random::<u64>(), 4, 2, 1.0, 0.0) {
            for (a, b) in [(&e[0], &e[1]), (&x, &y)] {
                let via = nijenhuis_via_connection(&lc, &f, a, b, &p, 1e-12).unwrap();
                let direct = nijenhuis(&f, a, b, &p).unwrap();
                assert!(max_abs(&sub(&via, &direct)) <= 1e-7);
            }
        }
    }
}

#[test]
fn contact_structure_via_connection() {
    let chart = Chart::new(&["x", "y", "z"]).unwrap();
    let f = chart
        .tensor11(&[vec!["1", "0", "0"], vec!["0", "1", "0"], vec!["0", "2*x", "-1"]])
        .unwrap();
    let e = VectorField::frame(3);
    for p in [[0.5, 0.0, 0.0], [-1.0, 2.0, 0.3]] {
        let via = nijenhuis_via_connection(&ConnectionCoeffs::flat(3), &f, &e[0], &e[1], &p, 0.0).unwrap();
        assert!(max_abs(&sub(&via, &[0.0, 0.0, 4.0])) <= 1e-12);
    }
}

#[test]
fn leibniz_rule_fails_for_a_broken_evaluator() {
    // sanity check that the axiom residual detects a non-connection:
    // nabla_X Y := Y (ignores X entirely)
    struct Broken;
    impl Connection for Broken {
        fn dim(&self) -> usize {
            2
        }
        fn covariant<T: metallic_core::Scalar>(
            &self,
            _x: &VectorField,
            y: &VectorField,
            p: &[T],
        ) -> metallic_core::Result<Vec<T>> {
            Ok(y.eval(p)?)
        }
    }
    let chart = Chart::new(&["x", "y"]).unwrap();
    let x = chart.vector_field(&["1", "0"]).unwrap();
    let y = chart.vector_field(&["x", "y"]).unwrap();
    let f: Expr = chart.parse("x").unwrap();
    let res = connection_axioms_residual(&Broken, &x, &y, &y, &f, &[1.0, 1.0]).unwrap();
    assert!(res > 0.5);
}
