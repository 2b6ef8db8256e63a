//! Verification reports and their canonical JSON form.

use std::fmt::Write as _;

use metallic_core::Check;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    /// `None` when no residual could be computed.
    pub max_residual: Option<f64>,
    pub worst_point: Option<Vec<f64>>,
    pub points_evaluated: usize,
    pub message: Option<String>,
}

impl CheckRecord {
    pub fn from_check(name: &str, check: Check, note: Option<String>) -> Self {
        let message = match (check.failure, note) {
            (Some(f), Some(n)) => Some(format!("{n}; {f}")),
            (f, n) => f.or(n),
        };
        CheckRecord {
            name: name.to_string(),
            pass: check.pass,
            max_residual: check.max_residual.is_finite().then_some(check.max_residual),
            worst_point: check.worst_point,
            points_evaluated: check.points_evaluated,
            message,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub version: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(scenario: &str, seed: u64, checks: Vec<CheckRecord>) -> Self {
        Report {
            scenario: scenario.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    /// Sorted keys, no whitespace, floats with 17 significant digits.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        write_canonical(&value, &mut out);
        out
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} (seed {}, version {})", self.scenario, self.seed, self.version);
        for c in &self.checks {
            let residual = c.max_residual.map_or("n/a".to_string(), |r| format!("{r:.3e}"));
            let _ = write!(
                out,
                "  {} {:<24} max residual {:<10} points {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                residual,
                c.points_evaluated
            );
            if !c.pass {
                if let Some(p) = &c.worst_point {
                    let _ = write!(out, " worst at {p:?}");
                }
            }
            if let Some(m) = &c.message {
                let _ = write!(out, " ({m})");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_u64() {
                let _ = write!(out, "{i}");
            } else if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else {
                let _ = write!(out, "{:.16e}", n.as_f64().expect("finite number"));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&map[k], out);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(pass: bool, r: Option<f64>) -> CheckRecord {
        CheckRecord {
            name: "metallic".into(),
            pass,
            max_residual: r,
            worst_point: Some(vec![0.5, -1.0]),
            points_evaluated: 3,
            message: None,
        }
    }

    #[test]
    fn canonical_form_is_sorted_and_fixed_precision() {
        let r = Report::new("demo", 7, vec![record(true, Some(2.0e-16))]);
        let s = r.canonical_json();
        assert!(s.starts_with(r#"{"checks":[{"max_residual":2.0000000000000000e-16,"message":null,"name":"metallic","pass":true,"points_evaluated":3,"worst_point":[5.0000000000000000e-1,-1.0000000000000000e0]}],"pass":true,"scenario":"demo","seed":7,"version":""#), "{s}");
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn overall_pass_requires_every_check() {
        let r = Report::new("demo", 0, vec![record(true, Some(0.0)), record(false, None)]);
        assert!(!r.pass);
        assert!(r.canonical_json().contains(r#""max_residual":null"#));
        assert!(r.text().lines().last().unwrap() == "FAIL");
    }
}
