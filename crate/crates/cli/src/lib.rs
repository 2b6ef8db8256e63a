//! Scenario-driven verification of metallic structures: load a JSON scenario,
//! sample chart points, run the requested checks and emit a report.

pub mod builtins;
pub mod checks;
pub mod error;
pub mod report;
pub mod sampling;
pub mod scenario;

pub use builtins::{run_all, run_demo, DEMOS};
pub use checks::CheckName;
pub use error::{CliError, Result};
pub use report::{CheckRecord, Report};
pub use scenario::{Overrides, Scenario, ScenarioFile};

/// Exit status for a run whose checks all pass.
pub const EXIT_PASS: i32 = 0;
/// Exit status when at least one check fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for usage, input and domain errors.
pub const EXIT_INPUT: i32 = 2;

/// Samples the scenario's points and runs its checks. A failing check never
/// stops the others.
pub fn run(scenario: &Scenario) -> Result<Report> {
    let points = scenario.sampling.sample()?;
    let checks = checks::run_checks(scenario, &points);
    Ok(Report::new(&scenario.name, scenario.sampling.seed, checks))
}

pub fn exit_code(report: &Report) -> i32 {
    if report.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
