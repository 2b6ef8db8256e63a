use std::path::PathBuf;
use std::process::Command;

use metallic_cli::builtins::scenario_file;
use metallic_cli::{run, run_demo, CliError, Overrides, Scenario, ScenarioFile, DEMOS};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_metallic"))
}

fn load(src: &str) -> Result<Scenario, CliError> {
    Scenario::from_file(&ScenarioFile::from_json(src)?, &Overrides::default())
}

const PLANE: &str = r#"
  "coords": ["x", "y"],
  "params": {"a": 1, "b": 1},
  "sampling": {"box": [[-1, 1], [-1, 1]], "count": 10, "seed": 3}
"#;

fn scenario(fields: &str, checks: &str) -> String {
    format!(r#"{{"name": "t", {PLANE}, "fields": {fields}, "checks": {checks}}}"#)
}

#[test]
fn built_in_r2_example_declares_the_punctured_plane() {
    let file = scenario_file("r2_example").unwrap();
    assert_eq!(file.coords, ["x", "y"]);
    assert_eq!(file.sampling.exclude.as_deref(), Some("x^2 + y^2 < 0.01"));
    let s = Scenario::from_file(&file, &Overrides::default()).unwrap();
    let pts = s.sampling.sample().unwrap();
    assert!(pts.iter().all(|p| p[0].hypot(p[1]) >= 0.1));
}

#[test]
fn missing_fields_and_unknown_checks_are_reported() {
    let err = load(&scenario("{}", r#"["schouten_parallel"]"#)).unwrap_err();
    assert!(matches!(err, CliError::MissingField { ref check, .. } if check == "schouten_parallel"), "{err}");

    let err = load(&scenario(r#"{"J": [[1, 0], [0, 1]]}"#, r#"["unknown_check"]"#)).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("unknown_check") && msg.contains("vranceanu_parallel"), "{msg}");

    let err = load(&scenario(r#"{"J": [["x +", 0], [0, 1]]}"#, r#"["metallic"]"#)).unwrap_err();
    assert!(matches!(err, CliError::Field { ref field, .. } if field == "J"), "{err}");

    let err = load(&scenario(r#"{"J": [[1, 0]]}"#, r#"["metallic"]"#)).unwrap_err();
    assert!(err.to_string().contains("dimension"), "{err}");

    let err = ScenarioFile::from_json("{\n  \"name\": 3\n}").unwrap_err();
    assert!(matches!(err, CliError::Format { line: 2, .. }), "{err}");
}

#[test]
fn parameters_must_be_positive_integers_unless_relaxed() {
    let src = scenario(r#"{"J": [[1, 0], [0, 1]]}"#, r#"["metallic"]"#).replace(r#""a": 1"#, r#""a": 1.5"#);
    assert!(load(&src).is_err());
    let relaxed = Overrides {
        allow_real_params: true,
        ..Overrides::default()
    };
    let s = Scenario::from_file(&ScenarioFile::from_json(&src).unwrap(), &relaxed).unwrap();
    assert_eq!(s.params.a(), 1.5);
}

#[test]
fn domain_errors_fail_one_check_and_record_the_point() {
    let src = scenario(r#"{"J": [["sqrt(x)", 0], [0, 1]]}"#, r#"["metallic", "nijenhuis_integrability"]"#);
    let s = load(&src).unwrap();
    let r = run(&s).unwrap();
    assert!(!r.pass);
    assert_eq!(r.checks.len(), 2);
    for c in &r.checks {
        assert!(!c.pass);
        let p = c.worst_point.as_ref().unwrap();
        assert!(p[0] < 0.0, "{p:?}");
        assert!(c.message.as_ref().unwrap().contains("sqrt"));
    }
}

#[test]
fn failed_preconditions_fail_the_check_only() {
    let src = scenario(
        r#"{"J": [["rho", 0], [0, "a - rho"]], "l": [[1, 0], [0, 1]], "m": [[0, 0], [0, 1]]}"#,
        r#"["schouten_parallel", "metallic"]"#,
    );
    let r = run(&load(&src).unwrap()).unwrap();
    assert!(!r.checks[0].pass);
    assert!(r.checks[0].message.as_ref().unwrap().contains("complementary projectors"));
    assert!(r.checks[1].pass);
}

#[test]
fn non_integrable_contact_structure_fails_integrability() {
    let src = r#"{"name": "contact", "coords": ["x", "y", "z"], "params": {"a": 1, "b": 1},
        "fields": {"F": [[1, 0, 0], [0, 1, 0], [0, "2*x", -1]]},
        "sampling": {"box": [[-1, 1], [-1, 1], [-1, 1]], "count": 5, "seed": 1},
        "checks": ["metallic", "nijenhuis_integrability", "nf_nj_scaling"]}"#;
    let r = run(&load(src).unwrap()).unwrap();
    let pass: Vec<bool> = r.checks.iter().map(|c| c.pass).collect();
    assert_eq!(pass, [true, false, true]);
    // |N_J(d_x, d_y)| = a^2 + 4b = 5
    assert!((r.checks[1].max_residual.unwrap() - 5.0).abs() < 1e-12);
}

#[test]
fn tiny_tolerance_exposes_rounding() {
    let over = Overrides {
        tolerance: Some(1e-20),
        ..Overrides::default()
    };
    let r = run_demo("r2_example", &over).unwrap();
    assert!(!r.pass);
    assert!(r.checks.iter().any(|c| c.name == "metallic" && !c.pass));
}

#[test]
fn sampling_overrides_and_errors() {
    let base = scenario(r#"{"J": [[1, 0], [0, 1]]}"#, r#"["nijenhuis_integrability"]"#);
    let over = Overrides {
        samples: Some(4),
        seed: Some(11),
        ..Overrides::default()
    };
    let s = Scenario::from_file(&ScenarioFile::from_json(&base).unwrap(), &over).unwrap();
    let r = run(&s).unwrap();
    assert_eq!((r.seed, r.checks[0].points_evaluated), (11, 4));

    let zero = base.replace(r#""count": 10"#, r#""count": 0"#);
    assert!(matches!(load(&zero), Err(CliError::Sampling(_))));
    let all = base.replace(r#""seed": 3"#, r#""seed": 3, "exclude": "1""#);
    let s = load(&all).unwrap();
    assert!(matches!(run(&s), Err(CliError::Sampling(_))));
}

#[test]
fn reports_are_deterministic() {
    for d in DEMOS {
        let a = run_demo(d, &Overrides::default()).unwrap().canonical_json();
        let b = run_demo(d, &Overrides::default()).unwrap().canonical_json();
        assert_eq!(a, b, "{d}");
    }
}

#[test]
fn built_in_reports_match_pinned_copies() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for d in DEMOS {
        let got = run_demo(d, &Overrides::default()).unwrap().canonical_json() + "\n";
        let path = dir.join(format!("{d}.json"));
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &got).unwrap();
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(got, want, "{d} report differs from {}", path.display());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let ok = write("ok.json", &scenario(r#"{"J": [["rho", 0], [0, "a - rho"]]}"#, r#"["metallic"]"#));
    let bad = write("bad.json", &scenario(r#"{"J": [[1, 0], [0, 1]]}"#, r#"["metallic"]"#));
    let broken = write("broken.json", "{");

    let status = |args: &[&std::ffi::OsStr]| bin().args(args).output().unwrap().status.code();
    assert_eq!(status(&["verify".as_ref(), ok.as_os_str()]), Some(0));
    assert_eq!(status(&["verify".as_ref(), bad.as_os_str()]), Some(1));
    assert_eq!(status(&["verify".as_ref(), broken.as_os_str()]), Some(2));
    assert_eq!(status(&["verify".as_ref(), dir.path().join("missing.json").as_os_str()]), Some(2));
    assert_eq!(status(&["demo".as_ref(), "nope".as_ref()]), Some(2));
    assert_eq!(status(&["frobnicate".as_ref()]), Some(2));
    assert_eq!(status(&["family", "--a", "2", "--b", "1", "--r", "0", "--s", "1"].map(AsRef::as_ref)), Some(0));
    assert_eq!(status(&["family", "--a", "2", "--b", "1", "--r", "0", "--s", "0"].map(AsRef::as_ref)), Some(2));

    let out = bin()
        .args(["verify".as_ref(), ok.as_os_str(), "--report".as_ref(), "structured".as_ref()])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 3);

    let list = bin().arg("list-checks").output().unwrap();
    let text = String::from_utf8(list.stdout).unwrap();
    assert_eq!(text.lines().count(), metallic_cli::CheckName::ALL.len());
}

#[test]
fn family_subcommand_prints_the_matrix() {
    let out = bin()
        .args(["family", "--a", "2", "--b", "1", "--t", "1", "--s", "-2", "--variant", "generic-s-t"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("generic-s-t") && text.contains("|J^2 - aJ - bI|_max"), "{text}");
}
