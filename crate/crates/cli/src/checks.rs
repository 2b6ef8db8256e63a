//! The check registry: maps check names to core operations and runs them
//! over the sampled points.

use std::fmt;
use std::str::FromStr;

use metallic_core::linalg::to_complex;
use metallic_core::random::{polynomial, polynomial_field};
use metallic_core::riemann::{
    definiteness_check, nijenhuis_frame_residual, nj_symmetry_residual,
};
use metallic_core::{
    anti_half_parallel_residual, complex_metallic, connection_axioms_residual, g_symmetry_check,
    half_parallel_residual, locally_product_check, metric_compatibility_residual,
    nijenhuis_scaling, obata_connection, orthogonality_check, parallelism_residual, schouten,
    sweep, tangent_metallic, vranceanu, Check, ConnectionCoeffs, DerivedConnection,
    Error, LocallyProductVerdict, MetricField, Params, Probe, TensorField11, VectorField,
};
use metallic_core::metallic::{
    metallic_from_projector, projector_eigen_residual, projector_identity_residual,
    tangent_residual,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::report::CheckRecord;
use crate::scenario::{Fields, Scenario};

macro_rules! check_names {
    ($($variant:ident => $name:literal, $needs:literal, $about:literal;)*) => {
        /// A named verification.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum CheckName {
            $($variant,)*
        }

        impl CheckName {
            pub const ALL: &'static [CheckName] = &[$(CheckName::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CheckName::$variant => $name,)*
                }
            }

            /// Fields the check needs, as shown by `list-checks`.
            pub fn needs(self) -> &'static str {
                match self {
                    $(CheckName::$variant => $needs,)*
                }
            }

            pub fn about(self) -> &'static str {
                match self {
                    $(CheckName::$variant => $about,)*
                }
            }
        }
    };
}

check_names! {
    Metallic => "metallic", "structure", "J^2 = aJ + bI";
    ProjectorIdentities => "projector_identities", "structure",
        "l^2 = l, m^2 = m, lm = ml = 0, l + m = I, Jl = lJ = rho l, Jm = mJ = (a - rho) m";
    NijenhuisIntegrability => "nijenhuis_integrability", "structure", "N_J vanishes on coordinate frame pairs";
    NfNjScaling => "nf_nj_scaling", "structure", "N_F = 4/(a^2+4b) N_J";
    SchoutenParallel => "schouten_parallel", "structure; gamma optional",
        "l, m, J parallel under the Schouten connection";
    VranceanuParallel => "vranceanu_parallel", "structure; gamma optional",
        "l, m, J parallel under the Vranceanu connection";
    HalfParallel => "half_parallel", "structure; gamma, X, Y optional",
        "m(DJ)(lX, Y) = (a - 2rho) m[lX, mY] and l(DJ)(mX, Y) = (2rho - a) l[mX, lY] under Vranceanu";
    AntiHalfParallel => "anti_half_parallel", "structure; gamma, X, Y optional",
        "l(DJ)(lX, Y) = 0 and m(DJ)(mX, Y) = 0 under Vranceanu";
    ObataParallel => "obata_parallel", "structure; gamma, Q optional",
        "J parallel under the Obata connection";
    GSymmetry => "g_symmetry", "structure; g optional", "g(JX, Y) = g(X, JY)";
    Orthogonality => "orthogonality", "structure; g optional", "g(lX, mY) = 0";
    NjSymmetry => "nj_symmetry", "structure", "N_J(JX, Y) = N_J(X, JY)";
    LocallyProduct => "locally_product", "structure; g optional",
        "Levi-Civita parallel F implies N_J = 0";
    ConnectionAxioms => "connection_axioms", "gamma optional; structure adds derived connections",
        "additivity, Leibniz rule in Y, function-linearity in X";
    LeviCivitaCompat => "levi_civita_compat", "g", "Levi-Civita connection is metric and torsion-free";
    GDefinite => "g_definite", "g", "g is positive definite";
    TangentMetallic => "tangent_metallic", "T", "J_t^2 - a J_t + (a^2/4) I = 0 for J_t built from T^2 = 0";
    ComplexMetallic => "complex_metallic", "C",
        "J_c^2 - a J_c + ((a^2+2b)/2) I = 0 for J_c built from C^2 = -I";
    VerticalProjector => "vertical_projector", "v",
        "J built from an idempotent v is metallic with eigenspaces ker v and im v";
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::UnknownCheck {
                name: s.to_string(),
                valid: CheckName::ALL.iter().map(|c| c.name().to_string()).collect(),
            })
    }
}

/// Where `J` comes from: given directly, or derived from `F`, `v`, or `(l, m)`.
fn structure(fields: &Fields, params: &Params) -> Option<TensorField11> {
    if let Some(j) = &fields.j {
        return Some(j.clone());
    }
    if let Some(f) = &fields.f {
        return Some(params.metallic_from_product(f));
    }
    if let Some(v) = &fields.v {
        return Some(params.metallic_from_projector(v));
    }
    match (&fields.l, &fields.m) {
        (Some(_), Some(m)) => Some(params.metallic_from_projector(m)),
        _ => None,
    }
}

impl CheckName {
    pub(crate) fn require_fields(self, fields: &Fields) -> Result<()> {
        let has_structure = fields.j.is_some()
            || fields.f.is_some()
            || fields.v.is_some()
            || (fields.l.is_some() && fields.m.is_some());
        let missing = |needs: &str| {
            Err(CliError::MissingField {
                check: self.name().into(),
                needs: needs.into(),
            })
        };
        match self {
            CheckName::ConnectionAxioms => Ok(()),
            CheckName::LeviCivitaCompat | CheckName::GDefinite if fields.g.is_none() => missing("g"),
            CheckName::LeviCivitaCompat | CheckName::GDefinite => Ok(()),
            CheckName::TangentMetallic if fields.t.is_none() => missing("T"),
            CheckName::ComplexMetallic if fields.c.is_none() => missing("C"),
            CheckName::VerticalProjector if fields.v.is_none() => missing("v"),
            CheckName::TangentMetallic | CheckName::ComplexMetallic | CheckName::VerticalProjector => Ok(()),
            _ if !has_structure => missing("J (or F, v, or both l and m)"),
            _ => Ok(()),
        }
    }
}

/// Everything a check may need, resolved once per run.
struct Context<'a> {
    scenario: &'a Scenario,
    points: &'a [Vec<f64>],
    j: Option<TensorField11>,
    l: Option<TensorField11>,
    m: Option<TensorField11>,
    g: MetricField,
    base: ConnectionCoeffs,
    frame: Vec<VectorField>,
    /// Frame, user `X`/`Y` and seeded random polynomial fields, for
    /// identities that are not tensorial in their arguments.
    fields: Vec<VectorField>,
}

/// Seed offset so the random test fields do not share a stream with the points.
const FIELD_STREAM: u64 = 0x5eed_f1e1d;

impl<'a> Context<'a> {
    fn new(scenario: &'a Scenario, points: &'a [Vec<f64>]) -> Self {
        let n = scenario.chart.dim();
        let params = &scenario.params;
        let j = structure(&scenario.fields, params);
        let (l, m) = match (&scenario.fields.l, &scenario.fields.m, &j) {
            (Some(l), Some(m), _) => (Some(l.clone()), Some(m.clone())),
            (_, _, Some(j)) => {
                let (l, m) = params.projectors(j);
                (Some(l), Some(m))
            }
            _ => (None, None),
        };
        let frame = VectorField::frame(n);
        let mut fields = frame.clone();
        fields.extend(scenario.fields.x.iter().cloned());
        fields.extend(scenario.fields.y.iter().cloned());
        let mut rng = ChaCha8Rng::seed_from_u64(scenario.sampling.seed ^ FIELD_STREAM);
        for _ in 0..2 {
            fields.push(polynomial_field(&mut rng, &scenario.chart, 2, 1.0));
        }
        Context {
            scenario,
            points,
            j,
            l,
            m,
            g: scenario.fields.g.clone().unwrap_or_else(|| MetricField::euclidean(n)),
            base: scenario
                .fields
                .gamma
                .clone()
                .map_or_else(|| ConnectionCoeffs::flat(n), ConnectionCoeffs::from_tensor),
            frame,
            fields,
        }
    }

    fn params(&self) -> &Params {
        &self.scenario.params
    }

    fn j(&self) -> &TensorField11 {
        self.j.as_ref().expect("structure checked at load time")
    }

    fn lm(&self) -> (&TensorField11, &TensorField11) {
        (
            self.l.as_ref().expect("structure checked at load time"),
            self.m.as_ref().expect("structure checked at load time"),
        )
    }

    fn frame_pairs(&self) -> impl Iterator<Item = (&VectorField, &VectorField)> {
        self.frame
            .iter()
            .enumerate()
            .flat_map(move |(i, x)| self.frame[i + 1..].iter().map(move |y| (x, y)))
    }

    /// Consecutive pairs of the test fields, wrapping around.
    fn chain_pairs(&self) -> impl Iterator<Item = (&VectorField, &VectorField)> {
        let k = self.fields.len();
        (0..k).map(move |i| (&self.fields[i], &self.fields[(i + 1) % k]))
    }

    /// Frame vectors against every test field: enough for expressions that
    /// are tensorial in the first argument only.
    fn frame_by_fields(&self) -> impl Iterator<Item = (&VectorField, &VectorField)> {
        self.frame.iter().flat_map(move |x| self.fields.iter().map(move |y| (x, y)))
    }
}

fn worst<I, F>(items: I, mut f: F) -> metallic_core::Result<f64>
where
    I: IntoIterator,
    F: FnMut(I::Item) -> metallic_core::Result<f64>,
{
    items.into_iter().try_fold(0.0f64, |acc, item| Ok(acc.max(f(item)?)))
}

/// A check whose setup failed: a violated precondition or an evaluation error.
fn setup_failure(e: Error, points: usize) -> Check {
    let (residual, point) = match &e {
        Error::Precondition { residual, point, .. } if !point.is_empty() => (*residual, Some(point.clone())),
        Error::Precondition { residual, .. } => (*residual, None),
        Error::SingularMetric { point, .. } | Error::AsymmetricConnection { point, .. } => {
            (f64::NAN, Some(point.clone()))
        }
        _ => (f64::NAN, None),
    };
    Check {
        pass: false,
        max_residual: residual,
        worst_point: point,
        points_evaluated: points.min(usize::from(residual.is_finite())),
        failure: Some(e.to_string()),
    }
}

fn run_one(ctx: &Context<'_>, name: CheckName) -> CheckRecord {
    let tol = ctx.scenario.tolerance_for(name);
    let pts = ctx.points;
    let params = *ctx.params();
    let probe = Probe::new(pts, tol);
    let mut message = None;
    let result: Check = match name {
        CheckName::Metallic => metallic_core::is_metallic(ctx.j(), &params, pts, tol),
        CheckName::ProjectorIdentities => {
            let (l, m) = ctx.lm();
            sweep(pts, tol, |p| projector_identity_residual(ctx.j(), l, m, &params, p))
        }
        CheckName::NijenhuisIntegrability => sweep(pts, tol, |p| nijenhuis_frame_residual(ctx.j(), p)),
        CheckName::NfNjScaling => sweep(pts, tol, |p| {
            worst(ctx.frame_pairs(), |(x, y)| Ok(nijenhuis_scaling(ctx.j(), &params, x, y, p)?.residual))
        }),
        CheckName::SchoutenParallel | CheckName::VranceanuParallel => {
            let (l, m) = ctx.lm();
            let conn = if name == CheckName::SchoutenParallel {
                schouten(&ctx.base, l, m, &probe)
            } else {
                vranceanu(&ctx.base, l, m, &probe)
            };
            match conn {
                Ok(conn) => sweep(pts, tol, |p| parallelism_residual(&conn, &[l, m, ctx.j()], &ctx.frame, p)),
                Err(e) => setup_failure(e, pts.len()),
            }
        }
        CheckName::HalfParallel | CheckName::AntiHalfParallel => {
            let (l, m) = ctx.lm();
            match vranceanu(&ctx.base, l, m, &probe) {
                Ok(conn) => sweep(pts, tol, |p| {
                    worst(ctx.frame_by_fields(), |(x, y)| {
                        if name == CheckName::HalfParallel {
                            half_parallel_residual(&conn, ctx.j(), l, m, &params, x, y, p)
                        } else {
                            anti_half_parallel_residual(&conn, ctx.j(), l, m, x, y, p)
                        }
                    })
                }),
                Err(e) => setup_failure(e, pts.len()),
            }
        }
        CheckName::ObataParallel => {
            match obata_connection(&ctx.base, ctx.j(), &params, ctx.scenario.fields.q.as_ref(), &probe) {
                Ok(conn) => sweep(pts, tol, |p| parallelism_residual(&conn, &[ctx.j()], &ctx.frame, p)),
                Err(e) => setup_failure(e, pts.len()),
            }
        }
        CheckName::GSymmetry => g_symmetry_check(&ctx.g, ctx.j(), pts, tol),
        CheckName::Orthogonality => {
            let (l, m) = ctx.lm();
            orthogonality_check(&ctx.g, l, m, pts, tol)
        }
        CheckName::NjSymmetry => sweep(pts, tol, |p| {
            worst(ctx.frame_pairs(), |(x, y)| nj_symmetry_residual(ctx.j(), x, y, p))
        }),
        CheckName::LocallyProduct => {
            // passes when "F parallel implies N_J = 0" holds; the residual is N_J's
            let lp = locally_product_check(&ctx.g, ctx.j(), &params, pts, tol);
            message = Some(format!(
                "{}; |nabla F| up to {:.3e}",
                lp.verdict.describe(),
                lp.parallel.max_residual
            ));
            let mut r = lp.integrable;
            if lp.parallel.failure.is_some() {
                r.failure = lp.parallel.failure;
                r.worst_point = lp.parallel.worst_point;
            }
            r.pass = lp.verdict != LocallyProductVerdict::Inconsistent && r.failure.is_none();
            r
        }
        CheckName::ConnectionAxioms => connection_axioms(ctx, tol, &probe),
        CheckName::LeviCivitaCompat => {
            let g = ctx.scenario.fields.g.as_ref().expect("g checked at load time");
            let lc = ConnectionCoeffs::levi_civita(g);
            sweep(pts, tol, |p| Ok(metric_compatibility_residual(g, &lc, p)?.max(lc.asymmetry(p)?)))
        }
        CheckName::GDefinite => {
            definiteness_check(ctx.scenario.fields.g.as_ref().expect("g checked at load time"), pts, tol)
        }
        CheckName::TangentMetallic => {
            let t = ctx.scenario.fields.t.as_ref().expect("T checked at load time");
            match tangent_metallic(t, &params, &probe) {
                Ok(jt) => sweep(pts, tol, |p| tangent_residual(&jt.field, &params, p)),
                Err(e) => setup_failure(e, pts.len()),
            }
        }
        CheckName::ComplexMetallic => {
            let c = ctx.scenario.fields.c.as_ref().expect("C checked at load time");
            sweep(pts, tol, |p| Ok(complex_metallic(&to_complex(&c.eval(p)?), &params, tol)?.residual))
        }
        CheckName::VerticalProjector => {
            let v = ctx.scenario.fields.v.as_ref().expect("v checked at load time");
            match metallic_from_projector(v, &params, &probe) {
                Ok(j) => sweep(pts, tol, |p| {
                    let eig = projector_eigen_residual(&j, v, &params, p)?;
                    Ok(eig.max(params.metallic_residual(&j.eval(p)?)))
                }),
                Err(e) => setup_failure(e, pts.len()),
            }
        }
    };
    CheckRecord::from_check(name.name(), result, message)
}

/// Axioms for the base connection and, when a structure is present, for the
/// Schouten, Vranceanu and Obata connections built on it.
fn connection_axioms(ctx: &Context<'_>, tol: f64, probe: &Probe<'_, f64>) -> Check {
    let mut conns: Vec<DerivedConnection> = vec![ctx.base.clone().into()];
    if ctx.j.is_some() {
        let (l, m) = ctx.lm();
        let derived = [
            schouten(&ctx.base, l, m, probe),
            vranceanu(&ctx.base, l, m, probe),
            obata_connection(&ctx.base, ctx.j(), ctx.params(), ctx.scenario.fields.q.as_ref(), probe),
        ];
        for d in derived {
            match d {
                Ok(c) => conns.push(c),
                Err(e) => return setup_failure(e, ctx.points.len()),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.scenario.sampling.seed ^ FIELD_STREAM ^ 1);
    let chart = &ctx.scenario.chart;
    let f = polynomial(&mut rng, chart, 2, 1.0);
    let z = polynomial_field(&mut rng, chart, 2, 1.0);
    sweep(ctx.points, tol, |p| {
        worst(&conns, |c| worst(ctx.chain_pairs(), |(x, y)| connection_axioms_residual(c, x, y, &z, &f, p)))
    })
}

/// Runs every requested check over `points`, concurrently across checks; the
/// records come back in request order.
pub fn run_checks(scenario: &Scenario, points: &[Vec<f64>]) -> Vec<CheckRecord> {
    let ctx = Context::new(scenario, points);
    let mut names = scenario.checks.clone();
    if scenario.riemannian && !names.contains(&CheckName::GDefinite) {
        names.push(CheckName::GDefinite);
    }
    names.par_iter().map(|n| run_one(&ctx, *n)).collect()
}
