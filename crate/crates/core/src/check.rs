//! Sample-point verification: every identity is checked by sweeping a finite
//! set of chart points and reporting the worst residual.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{to_f64_vec, Scalar};

/// Outcome of a residual sweep over sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult<T> {
    pub pass: bool,
    pub max_residual: T,
    /// The point attaining `max_residual`, or the point where evaluation failed.
    pub worst_point: Option<Vec<T>>,
    pub points_evaluated: usize,
    /// Set when evaluation failed at some point; the check then fails.
    pub failure: Option<String>,
}

impl<T: Scalar> CheckResult<T> {
    /// Combines two sweeps over the same points: fails if either fails.
    pub fn merge(self, other: CheckResult<T>) -> CheckResult<T> {
        let max_residual = self.max_residual.max(other.max_residual);
        let worst_point = match (&self.failure, &other.failure) {
            (Some(_), _) => self.worst_point,
            (None, Some(_)) => other.worst_point,
            _ if other.max_residual > self.max_residual => other.worst_point,
            _ => self.worst_point,
        };
        CheckResult {
            pass: self.pass && other.pass,
            max_residual,
            worst_point,
            points_evaluated: self.points_evaluated.max(other.points_evaluated),
            failure: self.failure.or(other.failure),
        }
    }
}

/// Points plus tolerance used to verify structural preconditions.
#[derive(Clone, Copy, Debug)]
pub struct Probe<'a, T> {
    pub points: &'a [Vec<T>],
    pub tol: T,
}

impl<'a, T: Scalar> Probe<'a, T> {
    pub fn new(points: &'a [Vec<T>], tol: T) -> Self {
        Probe { points, tol }
    }

    /// Errors with [`Error::Precondition`] at the worst point when the residual
    /// exceeds the tolerance; evaluation errors propagate.
    pub fn require<F>(&self, condition: &str, residual: F) -> Result<()>
    where
        F: Fn(&[T]) -> Result<T> + Sync,
    {
        for p in self.points {
            let r = residual(p)?;
            if !(r <= self.tol) {
                return Err(Error::Precondition {
                    condition: condition.to_string(),
                    residual: r.to_f64_lossy(),
                    point: to_f64_vec(p),
                });
            }
        }
        Ok(())
    }
}

/// Evaluates `residual` at every point (in parallel) and reduces in point
/// order, so the result is deterministic.
pub fn sweep<T, F>(points: &[Vec<T>], tol: T, residual: F) -> CheckResult<T>
where
    T: Scalar,
    F: Fn(&[T]) -> Result<T> + Sync,
{
    let values: Vec<Result<T>> = points.par_iter().map(|p| residual(p)).collect();
    let mut out = CheckResult {
        pass: true,
        max_residual: T::zero(),
        worst_point: None,
        points_evaluated: 0,
        failure: None,
    };
    for (p, v) in points.iter().zip(values) {
        match v {
            Ok(r) => {
                out.points_evaluated += 1;
                if r.is_nan() {
                    out.failure = Some(format!("residual is NaN at {:?}", to_f64_vec(p)));
                    out.worst_point = Some(p.clone());
                    break;
                }
                if r > out.max_residual || out.worst_point.is_none() {
                    out.max_residual = r.max(out.max_residual);
                    out.worst_point = Some(p.clone());
                }
            }
            Err(e) => {
                out.failure = Some(e.to_string());
                out.worst_point = Some(p.clone());
                break;
            }
        }
    }
    out.pass = out.failure.is_none() && out.max_residual <= tol;
    out
}
