#![allow(dead_code)]

use metallic_core::{Chart, Params, TensorField11};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Chart `(x, y)` with `a`, `b`, `rho`, `disc` bound as constants.
pub fn plane(params: &Params) -> Chart {
    Chart::new(&["x", "y"])
        .unwrap()
        .with_constant("a", params.a())
        .with_constant("b", params.b())
        .with_constant("rho", params.rho())
        .with_constant("disc", params.disc())
}

/// The rotation-invariant structure on the punctured plane whose
/// `rho`-eigenline is the radial direction.
pub fn radial_j(params: &Params) -> TensorField11 {
    plane(params)
        .tensor11(&[
            vec!["(rho*x^2 + (a - rho)*y^2)/(x^2 + y^2)", "disc*x*y/(x^2 + y^2)"],
            vec!["disc*x*y/(x^2 + y^2)", "((a - rho)*x^2 + rho*y^2)/(x^2 + y^2)"],
        ])
        .unwrap()
}

/// Radial projector, written out independently of `J`.
pub fn radial_l(params: &Params) -> TensorField11 {
    plane(params)
        .tensor11(&[
            vec!["x^2/(x^2 + y^2)", "x*y/(x^2 + y^2)"],
            vec!["x*y/(x^2 + y^2)", "y^2/(x^2 + y^2)"],
        ])
        .unwrap()
}

/// Angular projector, written out independently of `J`.
pub fn radial_m(params: &Params) -> TensorField11 {
    plane(params)
        .tensor11(&[
            vec!["y^2/(x^2 + y^2)", "-x*y/(x^2 + y^2)"],
            vec!["-x*y/(x^2 + y^2)", "x^2/(x^2 + y^2)"],
        ])
        .unwrap()
}

/// `count` uniform points in `[-half, half]^dim` with norm at least `min_radius`.
pub fn points(seed: u64, count: usize, dim: usize, half: f64, min_radius: f64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<f64> = (0..dim).map(|_| r.random_range(-half..half)).collect();
        if p.iter().map(|v| v * v).sum::<f64>().sqrt() >= min_radius {
            out.push(p);
        }
    }
    out
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
