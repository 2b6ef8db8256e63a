//! Seeded sampling of chart points with an optional exclusion region.

use metallic_core::{Chart, Expr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

/// `lhs < rhs` (or `<=`, `>`, `>=`), or a bare expression that excludes a
/// point when it is nonzero.
#[derive(Clone, Debug)]
pub struct Exclusion {
    source: String,
    lhs: Expr,
    rhs: Option<(Cmp, Expr)>,
}

impl Exclusion {
    pub fn parse(chart: &Chart, src: &str) -> Result<Self> {
        let err = |e: metallic_core::Error| CliError::Field {
            field: "sampling.exclude".into(),
            message: e.to_string(),
        };
        let ops = [("<=", Cmp::Le), (">=", Cmp::Ge), ("<", Cmp::Lt), (">", Cmp::Gt)];
        let found = ops.iter().find_map(|(tok, op)| src.find(tok).map(|at| (at, *tok, *op)));
        let (lhs, rhs) = match found {
            Some((at, tok, op)) => {
                let (l, r) = (&src[..at], &src[at + tok.len()..]);
                if ops.iter().any(|(t, _)| r.contains(t)) {
                    return Err(CliError::Field {
                        field: "sampling.exclude".into(),
                        message: "at most one comparison is allowed".into(),
                    });
                }
                (chart.parse(l).map_err(err)?, Some((op, chart.parse(r).map_err(err)?)))
            }
            None => (chart.parse(src).map_err(err)?, None),
        };
        Ok(Exclusion {
            source: src.to_string(),
            lhs,
            rhs,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Whether `p` lies in the excluded region. Points where the condition
    /// cannot be evaluated are excluded too.
    pub fn excludes(&self, p: &[f64]) -> bool {
        let Ok(l) = self.lhs.eval::<f64>(p) else {
            return true;
        };
        match &self.rhs {
            None => l != 0.0 || l.is_nan(),
            Some((op, rhs)) => {
                let Ok(r) = rhs.eval::<f64>(p) else {
                    return true;
                };
                match op {
                    Cmp::Lt => l < r,
                    Cmp::Le => l <= r,
                    Cmp::Gt => l > r,
                    Cmp::Ge => l >= r,
                }
            }
        }
    }
}

/// A sampling plan: uniform points in a box, seeded.
#[derive(Clone, Debug)]
pub struct Sampling {
    pub bounds: Vec<[f64; 2]>,
    pub count: usize,
    pub seed: u64,
    pub exclude: Option<Exclusion>,
}

impl Sampling {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(CliError::Sampling("count must be at least 1".into()));
        }
        for (i, [lo, hi]) in self.bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(CliError::Sampling(format!(
                    "interval {i} must be finite with lower <= upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// `count` points drawn from the seeded generator, skipping excluded
    /// ones; gives up after `count * 100` draws.
    pub fn sample(&self) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let cap = self.count.saturating_mul(100);
        let mut out = Vec::with_capacity(self.count);
        let mut draws = 0usize;
        while out.len() < self.count {
            if draws == cap {
                let why = self.exclude.as_ref().map_or(String::new(), |e| format!(" by {:?}", e.source()));
                return Err(CliError::Sampling(format!(
                    "only {} of {} points accepted after {cap} draws; the excluded region{why} is too large",
                    out.len(),
                    self.count
                )));
            }
            draws += 1;
            let p: Vec<f64> = self
                .bounds
                .iter()
                .map(|[lo, hi]| if lo == hi { *lo } else { rng.random_range(*lo..*hi) })
                .collect();
            if !self.exclude.as_ref().is_some_and(|e| e.excludes(&p)) {
                out.push(p);
            }
        }
        Ok(out)
    }
}
