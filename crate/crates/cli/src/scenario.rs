//! Scenario files: a JSON description of a chart, metallic parameters, tensor
//! fields, a sampling plan and the checks to run.

use std::collections::BTreeMap;
use std::path::Path;

use metallic_core::{Chart, MetricField, Params, TensorField11, TensorField12, VectorField};
use serde::{Deserialize, Serialize};

use crate::checks::CheckName;
use crate::error::{CliError, Result};
use crate::sampling::{Exclusion, Sampling};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// A component entry: an expression or a plain number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Expr(String),
}

impl Entry {
    fn source(&self) -> String {
        match self {
            Entry::Number(v) => format!("{v:?}"),
            Entry::Expr(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldsFile {
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<Entry>>>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<Entry>>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<Vec<Entry>>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Vec<Vec<Entry>>>>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Entry>>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Entry>>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<Vec<Entry>>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingFile {
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclude: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub a: f64,
    pub b: f64,
}

/// The on-disk scenario format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub coords: Vec<String>,
    pub params: ParamsFile,
    #[serde(default)]
    pub fields: FieldsFile,
    pub sampling: SamplingFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Per-check overrides of `tolerance`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<String>,
    /// Requests a positive-definiteness check of `g` at the sample points.
    #[serde(default)]
    pub riemannian: bool,
}

impl ScenarioFile {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| CliError::Format {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&src)
    }
}

/// Parsed tensor fields; every one is optional.
#[derive(Clone, Debug, Default)]
pub struct Fields {
    pub j: Option<TensorField11>,
    pub f: Option<TensorField11>,
    pub t: Option<TensorField11>,
    pub c: Option<TensorField11>,
    pub v: Option<TensorField11>,
    pub l: Option<TensorField11>,
    pub m: Option<TensorField11>,
    pub g: Option<MetricField>,
    pub gamma: Option<TensorField12>,
    pub x: Option<VectorField>,
    pub y: Option<VectorField>,
    pub q: Option<TensorField12>,
}

/// A validated scenario: expressions parsed, checks resolved.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub chart: Chart,
    pub params: Params,
    pub fields: Fields,
    pub sampling: Sampling,
    pub tolerance: f64,
    pub tolerances: BTreeMap<CheckName, f64>,
    pub checks: Vec<CheckName>,
    pub riemannian: bool,
}

/// Options that override parts of a scenario at load time.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    /// Replaces the scenario tolerance and every per-check override.
    pub tolerance: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    /// Accept positive real `a`, `b` instead of positive integers.
    pub allow_real_params: bool,
}

fn field_err(field: &str) -> impl Fn(metallic_core::Error) -> CliError + '_ {
    move |e| CliError::Field {
        field: field.to_string(),
        message: e.to_string(),
    }
}

fn sources2(rows: &[Vec<Entry>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(Entry::source).collect()).collect()
}

fn sources3(blocks: &[Vec<Vec<Entry>>]) -> Vec<Vec<Vec<String>>> {
    blocks.iter().map(|b| sources2(b)).collect()
}

fn sources1(comps: &[Entry]) -> Vec<String> {
    comps.iter().map(Entry::source).collect()
}

impl Scenario {
    pub fn from_file(file: &ScenarioFile, overrides: &Overrides) -> Result<Self> {
        if let Some(d) = file.dim {
            if d != file.coords.len() {
                return Err(CliError::Invalid(format!(
                    "dim is {d} but {} coordinates are declared",
                    file.coords.len()
                )));
            }
        }
        let params = Params::from_values(file.params.a, file.params.b, overrides.allow_real_params)
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        let mut chart = Chart::new(&file.coords).map_err(|e| CliError::Invalid(e.to_string()))?;
        let constants = [
            ("a", params.a()),
            ("b", params.b()),
            ("rho", params.rho()),
            ("disc", params.disc()),
        ];
        for (name, value) in constants {
            if !file.coords.iter().any(|c| c == name) {
                chart = chart.with_constant(name, value);
            }
        }

        let ff = &file.fields;
        let t11 = |name: &str, rows: &Option<Vec<Vec<Entry>>>| -> Result<Option<TensorField11>> {
            rows.as_ref()
                .map(|r| chart.tensor11(&sources2(r)).map_err(field_err(name)))
                .transpose()
        };
        let t12 = |name: &str, blocks: &Option<Vec<Vec<Vec<Entry>>>>| -> Result<Option<TensorField12>> {
            blocks
                .as_ref()
                .map(|b| chart.tensor12(&sources3(b)).map_err(field_err(name)))
                .transpose()
        };
        let vf = |name: &str, comps: &Option<Vec<Entry>>| -> Result<Option<VectorField>> {
            comps
                .as_ref()
                .map(|c| {
                    if c.len() != chart.dim() {
                        return Err(CliError::Field {
                            field: name.to_string(),
                            message: format!("expected {} components, found {}", chart.dim(), c.len()),
                        });
                    }
                    chart.vector_field(&sources1(c)).map_err(field_err(name))
                })
                .transpose()
        };
        let fields = Fields {
            j: t11("J", &ff.j)?,
            f: t11("F", &ff.f)?,
            t: t11("T", &ff.t)?,
            c: t11("C", &ff.c)?,
            v: t11("v", &ff.v)?,
            l: t11("l", &ff.l)?,
            m: t11("m", &ff.m)?,
            g: ff
                .g
                .as_ref()
                .map(|r| chart.metric(&sources2(r)).map_err(field_err("g")))
                .transpose()?,
            gamma: t12("gamma", &ff.gamma)?,
            x: vf("X", &ff.x)?,
            y: vf("Y", &ff.y)?,
            q: t12("Q", &ff.q)?,
        };

        let mut sampling = SamplingFile::clone(&file.sampling);
        if let Some(n) = overrides.samples {
            sampling.count = n;
        }
        if let Some(s) = overrides.seed {
            sampling.seed = s;
        }
        if sampling.bounds.len() != chart.dim() {
            return Err(CliError::Invalid(format!(
                "sampling box has {} intervals for {} coordinates",
                sampling.bounds.len(),
                chart.dim()
            )));
        }
        let exclude = sampling
            .exclude
            .as_deref()
            .map(|src| Exclusion::parse(&chart, src))
            .transpose()?;
        let sampling = Sampling {
            bounds: sampling.bounds,
            count: sampling.count,
            seed: sampling.seed,
            exclude,
        };
        sampling.validate()?;

        let checks = file
            .checks
            .iter()
            .map(|c| c.parse::<CheckName>())
            .collect::<Result<Vec<_>>>()?;
        if checks.is_empty() {
            return Err(CliError::Invalid("no checks requested".into()));
        }
        let tolerance = overrides.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE);
        valid_tolerance("tolerance", tolerance)?;
        let mut tolerances = BTreeMap::new();
        if overrides.tolerance.is_none() {
            for (name, tol) in &file.tolerances {
                valid_tolerance(name, *tol)?;
                tolerances.insert(name.parse::<CheckName>()?, *tol);
            }
        }

        let scenario = Scenario {
            name: file.name.clone(),
            chart,
            params,
            fields,
            sampling,
            tolerance,
            tolerances,
            checks,
            riemannian: file.riemannian,
        };
        for c in &scenario.checks {
            c.require_fields(&scenario.fields)?;
        }
        if scenario.riemannian && scenario.fields.g.is_none() {
            return Err(CliError::MissingField {
                check: "riemannian".into(),
                needs: "g".into(),
            });
        }
        Ok(scenario)
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        Self::from_file(&ScenarioFile::load(path)?, overrides)
    }

    pub fn tolerance_for(&self, check: CheckName) -> f64 {
        self.tolerances.get(&check).copied().unwrap_or(self.tolerance)
    }
}

fn valid_tolerance(name: &str, tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("tolerance for {name} must be finite and non-negative, got {tol}")))
    }
}
