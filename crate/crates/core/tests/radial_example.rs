//! The rotation-invariant structure on the punctured plane: integrable,
//! Euclidean-symmetric, with orthogonal eigenlines.

mod common;

use common::*;
use metallic_core::connect::{
    anti_half_parallel_residual, distribution_parallel_residual, half_parallel_residual,
    nabla_j, nijenhuis_via_connection, obata_connection, parallelism_residual, schouten,
    vranceanu,
};
use metallic_core::metallic::projector_identity_residual;
use metallic_core::random::{polynomial_field, polynomial_tensor12};
use metallic_core::{
    is_metallic, locally_product_check, nijenhuis, nijenhuis_scaling, orthogonality_check,
    projectors, g_symmetry_check, Check, ConnectionCoeffs, LocallyProductVerdict, MetricField,
    Params, Probe, VectorField,
};

fn param_sets() -> [Params; 2] {
    [Params::new(1, 1).unwrap(), Params::new(2, 1).unwrap()]
}

fn sample() -> Vec<Vec<f64>> {
    points(42, 100, 2, 2.0, 0.1)
}

fn assert_pass(r: &Check, what: &str) {
    assert!(r.pass, "{what}: residual {:e} at {:?} ({:?})", r.max_residual, r.worst_point, r.failure);
}

#[test]
fn is_metallic_and_matches_closed_form_projectors() {
    let pts = sample();
    for params in param_sets() {
        let j = radial_j(&params);
        assert_pass(&is_metallic(&j, &params, &pts, 1e-9), "metallic");
        let probe = Probe::new(&pts, 1e-9);
        let (l, m) = projectors(&j, &params, &probe).unwrap();
        let (lc, mc) = (radial_l(&params), radial_m(&params));
        for p in &pts {
            let dl = (l.eval(p).unwrap() - lc.eval(p).unwrap()).amax();
            let dm = (m.eval(p).unwrap() - mc.eval(p).unwrap()).amax();
            assert!(dl <= 1e-9 && dm <= 1e-9, "projectors differ at {p:?}");
            assert!(projector_identity_residual(&j, &lc, &mc, &params, p).unwrap() <= 1e-9);
            assert!(projector_identity_residual(&j, &l, &m, &params, p).unwrap() <= 1e-9);
        }
    }
}

#[test]
fn is_integrable() {
    let pts = sample();
    let e = VectorField::frame(2);
    for params in param_sets() {
        let j = radial_j(&params);
        for p in &pts {
            assert!(max_abs(&nijenhuis(&j, &e[0], &e[1], p).unwrap()) <= 1e-8);
            assert!(nijenhuis_scaling(&j, &params, &e[0], &e[1], p).unwrap().residual <= 1e-8);
        }
    }
}

#[test]
fn is_euclidean_symmetric_with_orthogonal_eigenlines() {
    let pts = sample();
    let g = MetricField::euclidean(2);
    for params in param_sets() {
        let j = radial_j(&params);
        assert_pass(&g_symmetry_check(&g, &j, &pts, 1e-9), "J symmetric");
        let (l, m) = (radial_l(&params), radial_m(&params));
        assert_pass(&g_symmetry_check(&g, &l, &pts, 1e-9), "l symmetric");
        assert_pass(&g_symmetry_check(&g, &m, &pts, 1e-9), "m symmetric");
        assert_pass(&orthogonality_check(&g, &l, &m, &pts, 1e-9), "orthogonal");
    }
}

#[test]
fn is_integrable_without_being_locally_product() {
    let pts = sample();
    let params = Params::new(1, 1).unwrap();
    let lp = locally_product_check(&MetricField::euclidean(2), &radial_j(&params), &params, &pts, 1e-8);
    assert_eq!(lp.verdict, LocallyProductVerdict::IntegrableOnly);
    assert!(lp.integrable.pass && !lp.parallel.pass);
}

#[test]
fn is_not_flat_parallel() {
    let params = Params::new(1, 1).unwrap();
    let j = radial_j(&params);
    let e = VectorField::frame(2);
    let p = [1.0f64, 1.0];
    // oracle: central differences of the matrix entries along x, applied to e_y
    let h = 1e-6;
    let dj = (j.eval(&[1.0 + h, 1.0]).unwrap() - j.eval(&[1.0 - h, 1.0]).unwrap()) / (2.0 * h);
    let got: Vec<f64> = nabla_j(&ConnectionCoeffs::flat(2), &j, &e[0], &e[1], &p).unwrap();
    assert!((got[0] - dj[(0, 1)]).abs() < 1e-6 && (got[1] - dj[(1, 1)]).abs() < 1e-6);
    assert!(max_abs(&got) > 0.1);
}

#[test]
fn connection_based_nijenhuis_agrees_with_brackets() {
    let params = Params::new(1, 1).unwrap();
    let f = params.product_from_metallic(&radial_j(&params));
    let e = VectorField::frame(2);
    let p = [1.0, 2.0];
    let via = nijenhuis_via_connection(&ConnectionCoeffs::flat(2), &f, &e[0], &e[1], &p, 1e-12).unwrap();
    let direct = nijenhuis(&f, &e[0], &e[1], &p).unwrap();
    assert!(max_abs(&sub(&via, &direct)) <= 1e-8);
    assert!(max_abs(&direct) <= 1e-8);
}

#[test]
fn projectors_and_structure_are_schouten_and_vranceanu_parallel() {
    let pts = sample();
    let mut r = rng(5);
    let flat = ConnectionCoeffs::flat(2);
    for params in param_sets() {
        let j = radial_j(&params);
        let (l, m) = (radial_l(&params), radial_m(&params));
        let probe = Probe::new(&pts, 1e-9);
        let s = schouten(&flat, &l, &m, &probe).unwrap();
        let v = vranceanu(&flat, &l, &m, &probe).unwrap();
        let chart = plane(&params);
        let mut fields = VectorField::frame(2);
        fields.push(polynomial_field(&mut r, &chart, 2, 1.0));
        for p in &pts {
            for conn in [&s, &v] {
                let res = parallelism_residual(conn, &[&l, &m, &j], &fields, p).unwrap();
                assert!(res <= 1e-8, "{} at {p:?}: {res:e}", conn.kind());
                for x in &fields {
                    for y in &fields {
                        let d = distribution_parallel_residual(conn, &l, &m, x, y, p).unwrap();
                        assert!(d <= 1e-8);
                    }
                }
            }
        }
    }
}

#[test]
fn vranceanu_half_parallel_identities() {
    let pts = points(9, 50, 2, 2.0, 0.1);
    let mut r = rng(11);
    for params in param_sets() {
        let chart = plane(&params);
        let j = radial_j(&params);
        let (l, m) = (radial_l(&params), radial_m(&params));
        let v = vranceanu(&ConnectionCoeffs::flat(2), &l, &m, &Probe::new(&pts, 1e-9)).unwrap();
        for p in &pts {
            let x = polynomial_field(&mut r, &chart, 2, 1.0);
            let y = polynomial_field(&mut r, &chart, 2, 1.0);
            let h = half_parallel_residual(&v, &j, &l, &m, &params, &x, &y, p).unwrap();
            let ah = anti_half_parallel_residual(&v, &j, &l, &m, &x, &y, p).unwrap();
            assert!(h <= 1e-8 && ah <= 1e-8, "at {p:?}: {h:e} {ah:e}");
        }
    }
}

#[test]
fn obata_connections_make_the_structure_parallel() {
    let pts = points(13, 30, 2, 2.0, 0.1);
    let mut r = rng(17);
    let params = Params::new(1, 1).unwrap();
    let chart = plane(&params);
    let j = radial_j(&params);
    let flat = ConnectionCoeffs::flat(2);
    let probe = Probe::new(&pts, 1e-9);
    let fields = VectorField::frame(2);
    let zero = obata_connection(&flat, &j, &params, None, &probe).unwrap();
    for p in &pts {
        assert!(parallelism_residual(&zero, &[&j], &fields, p).unwrap() <= 1e-8);
    }
    for _ in 0..5 {
        let q = polynomial_tensor12(&mut r, &chart);
        let ob = obata_connection(&flat, &j, &params, Some(&q), &probe).unwrap();
        for p in &pts {
            assert!(parallelism_residual(&ob, &[&j], &fields, p).unwrap() <= 1e-8);
        }
    }
}
