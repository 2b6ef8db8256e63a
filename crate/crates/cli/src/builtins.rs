//! Built-in demos. `r2_example`, `family2d` and `obata` are ordinary
//! scenarios; `clifford`, `reflection` and `triple` test constant matrices
//! directly and report one record per identity, with the worst parameter
//! tuple in place of a sample point.

use metallic_core::families::{
    complex_metallic_condition_residual, deformed_anticommutator_residual, quaternion_right_unit,
    split_quaternion_units,
};
use metallic_core::random::orthogonal;
use metallic_core::{
    clifford_metallic, family_2d, metallic_reflection, quaternion_metallic, triple_structure,
    Family2DSpec, Family2DVariant, Matrix, Params, QuaternionFlavor, TripleKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::report::{CheckRecord, Report};
use crate::scenario::{
    Entry, FieldsFile, Overrides, ParamsFile, SamplingFile, Scenario, ScenarioFile,
};

pub const DEMOS: [&str; 6] = ["r2_example", "family2d", "clifford", "reflection", "triple", "obata"];

const R2_EXAMPLE: &str = include_str!("../scenarios/r2_example.json");
const OBATA: &str = include_str!("../scenarios/obata.json");

/// Default tolerance, seed and sample count of the matrix demos.
const MATRIX_TOL: f64 = 1e-12;
const MATRIX_SEED: u64 = 42;
const MATRIX_SAMPLES: usize = 100;

/// The scenario file behind a scenario-based demo.
pub fn scenario_file(name: &str) -> Option<ScenarioFile> {
    match name {
        "r2_example" => Some(ScenarioFile::from_json(R2_EXAMPLE).expect("built-in scenario parses")),
        "obata" => Some(ScenarioFile::from_json(OBATA).expect("built-in scenario parses")),
        "family2d" => Some(family2d_file()),
        _ => None,
    }
}

/// The constant member of the generic family with `(a, b) = (2, 1)`, `r = 0`, `s = 1`.
fn family2d_file() -> ScenarioFile {
    let params = Params::new(2, 1).expect("valid parameters");
    let j = family_2d(&Family2DSpec {
        params,
        r: 0.0,
        s: 1.0,
        variant: Family2DVariant::GenericRS,
    })
    .expect("valid family member");
    let rows = (0..2)
        .map(|i| (0..2).map(|k| Entry::Number(j[(i, k)])).collect())
        .collect();
    ScenarioFile {
        name: "family2d".into(),
        dim: Some(2),
        coords: vec!["x".into(), "y".into()],
        params: ParamsFile { a: 2.0, b: 1.0 },
        fields: FieldsFile {
            j: Some(rows),
            ..FieldsFile::default()
        },
        sampling: SamplingFile {
            bounds: vec![[-1.0, 1.0], [-1.0, 1.0]],
            count: 10,
            seed: 1,
            exclude: None,
        },
        tolerance: None,
        tolerances: Default::default(),
        checks: vec![
            "metallic".into(),
            "projector_identities".into(),
            "nijenhuis_integrability".into(),
            "nf_nj_scaling".into(),
        ],
        riemannian: false,
    }
}

/// Runs a built-in demo by name.
pub fn run_demo(name: &str, overrides: &Overrides) -> Result<Report> {
    if let Some(file) = scenario_file(name) {
        return crate::run(&Scenario::from_file(&file, overrides)?);
    }
    let tol = overrides.tolerance.unwrap_or(MATRIX_TOL);
    let seed = overrides.seed.unwrap_or(MATRIX_SEED);
    let samples = overrides.samples.unwrap_or(MATRIX_SAMPLES);
    if samples == 0 {
        return Err(CliError::Sampling("count must be at least 1".into()));
    }
    let checks = match name {
        "clifford" => clifford(tol),
        "reflection" => reflection(tol, seed, samples),
        "triple" => triple(tol, seed, samples),
        _ => {
            return Err(CliError::UnknownDemo {
                name: name.to_string(),
                valid: DEMOS.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(Report::new(name, seed, checks))
}

/// Every demo in order.
pub fn run_all(overrides: &Overrides) -> Result<Vec<Report>> {
    DEMOS.iter().map(|d| run_demo(d, overrides)).collect()
}

/// `(a, b)` over `{1, 2, 3}^2`.
fn param_grid() -> Vec<Params> {
    (1..=3)
        .flat_map(|a| (1..=3).map(move |b| Params::new(a, b).expect("positive parameters")))
        .collect()
}

/// Worst-case accumulator for a matrix demo record.
struct Worst {
    name: &'static str,
    tol: f64,
    residual: f64,
    at: Option<Vec<f64>>,
    count: usize,
    failure: Option<String>,
}

impl Worst {
    fn new(name: &'static str, tol: f64) -> Self {
        Worst {
            name,
            tol,
            residual: 0.0,
            at: None,
            count: 0,
            failure: None,
        }
    }

    fn add(&mut self, residual: f64, at: Vec<f64>) {
        self.count += 1;
        if self.at.is_none() || residual > self.residual || residual.is_nan() {
            self.residual = residual;
            self.at = Some(at);
        }
    }

    fn fail(&mut self, message: String, at: Vec<f64>) {
        if self.failure.is_none() {
            self.failure = Some(message);
            self.at = Some(at);
        }
    }

    fn record(self) -> CheckRecord {
        CheckRecord {
            name: self.name.to_string(),
            pass: self.failure.is_none() && self.residual <= self.tol,
            max_residual: self.residual.is_finite().then_some(self.residual),
            worst_point: self.at,
            points_evaluated: self.count,
            message: self.failure,
        }
    }
}

fn ab(p: &Params) -> Vec<f64> {
    vec![p.a(), p.b()]
}

fn clifford(tol: f64) -> Vec<CheckRecord> {
    let mut metallic = Worst::new("clifford_metallic", tol);
    let mut anti = Worst::new("clifford_anticommutator", tol);
    for p in param_grid() {
        let j1 = clifford_metallic(1, &p).expect("generator 1");
        let j2 = clifford_metallic(2, &p).expect("generator 2");
        metallic.add(p.metallic_residual(&j1).max(p.metallic_residual(&j2)), ab(&p));
        anti.add(deformed_anticommutator_residual(&j1, &j2, &p), ab(&p));
    }
    vec![metallic.record(), anti.record()]
}

fn reflection(tol: f64, seed: u64, samples: usize) -> Vec<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut metallic = Worst::new("reflection_metallic", tol);
    let mut eigen = Worst::new("reflection_eigenvector", tol);
    for i in 0..samples {
        for p in param_grid() {
            let n = 2 + i % 4;
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let at = [ab(&p), v.clone()].concat();
            match metallic_reflection(&v, &p) {
                Ok(j) => {
                    metallic.add(p.metallic_residual(&j), at.clone());
                    let vv = nalgebra::DVector::from_vec(v);
                    let scale = vv.amax().max(1.0);
                    eigen.add((&j * &vv - &vv * p.rho_conjugate()).amax() / scale, at);
                }
                Err(e) => {
                    metallic.fail(e.to_string(), at.clone());
                    eigen.fail(e.to_string(), at);
                }
            }
        }
    }
    vec![metallic.record(), eigen.record()]
}

fn triple(tol: f64, seed: u64, samples: usize) -> Vec<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = param_grid();
    let mut out = Vec::new();
    for kind in TripleKind::ALL {
        let name = match kind {
            TripleKind::Ahp => "triple_ahp",
            TripleKind::Abpc => "triple_abpc",
            TripleKind::Apbc => "triple_apbc",
            TripleKind::Ahc => "triple_ahc",
        };
        let mut w = Worst::new(name, tol);
        let (f0, t0): (Matrix, Matrix) = kind.canonical_pair();
        for i in 0..samples {
            let p = grid[i % grid.len()];
            let q = orthogonal(&mut rng, f0.nrows());
            let f = &q * &f0 * q.transpose();
            let t = &q * &t0 * q.transpose();
            match triple_structure(&f, &t, kind, &p, 1e-10) {
                Ok(s) => w.add(
                    s.relation_residual.max(s.classification_residual).max(s.pair_residual),
                    ab(&p),
                ),
                Err(e) => w.fail(e.to_string(), ab(&p)),
            }
        }
        out.push(w.record());
    }

    let mut split = Worst::new("quaternion_split", tol);
    let mut bi = Worst::new("quaternion_biquaternion", tol);
    let [i, j, k]: [Matrix; 3] = split_quaternion_units();
    for n in 0..samples {
        let p = grid[n % grid.len()];
        let (th, phi): (f64, f64) = (rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(-1.0..1.0));
        let s0 = &i * phi.sinh() + (&j * th.cos() + &k * th.sin()) * phi.cosh();
        match quaternion_metallic(&s0, QuaternionFlavor::Split, &p, 1e-10) {
            Ok(m) => split.add(complex_metallic_condition_residual(&m, &p), ab(&p)),
            Err(e) => split.fail(e.to_string(), ab(&p)),
        }
        // a random unit pure quaternion acting by right multiplication
        let u: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
        let s0 = (1..=3).fold(Matrix::zeros(4, 4), |acc, e| acc + quaternion_right_unit(e) * (u[e - 1] / norm));
        match quaternion_metallic(&s0, QuaternionFlavor::Biquaternion, &p, 1e-10) {
            Ok(m) => bi.add(complex_metallic_condition_residual(&m, &p), ab(&p)),
            Err(e) => bi.fail(e.to_string(), ab(&p)),
        }
    }
    out.push(split.record());
    out.push(bi.record());
    out
}
