use sasaki_core::job::{run_and_write, run_job, JobConfig, RunOptions, Status};

const NIL3: &str = r#"
seed = 7
tolerance = 1e-5
checks = [{ kind = "classify", expect = "biharmonic_vector_field" }, { kind = "bienergy", name = "energy" }]

[manifold]
id = "nil3"

[field]
family = "nil3-e1"
params = [0.0, 1.0, 0.0, 0.0]

[domain]
lower = [-1.0, -1.0, -1.0]
upper = [1.0, 1.0, 1.0]
quadrature_points = 8
sample_points = 3
"#;

const HALF_PLANE: &str = r#"
seed = 3
checks = ["first-variation", { kind = "ode", name = "profile" }]

[manifold]
id = "hyperbolic"
params = [2, 1.0]

[field]
components = ["0", "y^2"]

[domain]
lower = [-0.5, 0.75]
upper = [0.5, 1.75]
quadrature_points = 32

[variation]
components = ["1", "x*y"]

[ode]
id = "hyperbolic-harmonic"
n = 2
f = "x^1.618033988749895"
points = [0.5, 1.0, 2.0]
"#;

#[test]
fn nil3_job_reports_biharmonic() {
    let cfg = JobConfig::parse(NIL3).unwrap();
    let rep = run_job(&cfg, RunOptions::default()).unwrap();
    assert!(rep.all_passed(), "{}", rep.to_json());
    assert_eq!(rep.manifold, "nil3");
    let names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["classify", "energy"]);
    assert!(rep.checks[1].residuals["value"] > 0.0);
}

#[test]
fn json_and_toml_configs_agree() {
    let toml_cfg = JobConfig::parse(NIL3).unwrap();
    let json = serde_json::to_string_pretty(&toml_cfg).unwrap();
    let json_cfg = JobConfig::parse(&json).unwrap();
    assert_eq!(toml_cfg, json_cfg);
    let a = run_job(&toml_cfg, RunOptions::default()).unwrap().to_json();
    let b = run_job(&json_cfg, RunOptions::default()).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let cfg = JobConfig::parse(HALF_PLANE).unwrap();
    let a = run_job(&cfg, RunOptions::default()).unwrap().to_json();
    let b = run_job(&cfg, RunOptions::default()).unwrap().to_json();
    assert_eq!(a, b);
    assert!(!a.contains("\"runtime_ms\": 0") && a.contains("\"runtime_ms\": null"));
    let timed = run_job(&cfg, RunOptions { timing: true }).unwrap().to_json();
    assert!(!timed.contains("\"runtime_ms\": null"));
}

#[test]
fn variation_and_ode_checks() {
    let cfg = JobConfig::parse(HALF_PLANE).unwrap();
    let rep = run_job(&cfg, RunOptions::default()).unwrap();
    let fv = rep.checks.iter().find(|c| c.name == "first-variation").unwrap();
    assert_eq!(fv.status, Status::Pass, "{}", rep.to_json());
    assert!(fv.residuals["relative_gap"] < 1e-3);
    let ode = rep.checks.iter().find(|c| c.name == "profile").unwrap();
    assert_eq!(ode.status, Status::Pass);
    assert!(ode.residuals["max_abs_residual"] < 1e-12);
}

#[test]
fn wrong_expectation_fails_without_stopping_other_checks() {
    let text = NIL3.replace("biharmonic_vector_field", "parallel");
    let rep = run_job(&JobConfig::parse(&text).unwrap(), RunOptions::default()).unwrap();
    let classify = rep.checks.iter().find(|c| c.name == "classify").unwrap();
    assert_eq!(classify.status, Status::Fail);
    assert_eq!(classify.verdict.as_deref(), Some("biharmonic_vector_field"));
    assert!(rep.checks.iter().any(|c| c.name == "energy" && c.status == Status::Pass));
    assert!(!rep.all_passed());
}

#[test]
fn bad_configs_are_rejected() {
    assert!(JobConfig::parse("seed = ").is_err());
    assert!(JobConfig::parse(&NIL3.replace("seed = 7", "seed = 7\nbogus = 1")).is_err());
    let cfg = JobConfig::parse(&NIL3.replace("\"nil3-e1\"", "\"nil3-e9\"")).unwrap();
    assert!(run_job(&cfg, RunOptions::default()).is_err());
    let cfg = JobConfig::parse(&NIL3.replace("upper = [1.0, 1.0, 1.0]", "upper = [1.0, 1.0]")).unwrap();
    assert!(run_job(&cfg, RunOptions::default()).is_err());
    let dup = NIL3.replace("name = \"energy\"", "name = \"classify\"");
    assert!(run_job(&JobConfig::parse(&dup).unwrap(), RunOptions::default()).is_err());
}

#[test]
fn report_and_csv_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let csv = dir.path().join("grid.csv");
    let text = format!(
        "{NIL3}\n[output]\nreport = {:?}\ncsv = {:?}\ncsv_grid = [2, 3, 2]\n",
        report.display().to_string(),
        csv.display().to_string()
    );
    let cfg = load_via_file(&text);
    let rep = run_and_write(&cfg, RunOptions::default()).unwrap();
    assert_eq!(std::fs::read_to_string(&report).unwrap(), rep.to_json());
    let written = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = written.lines().collect();
    assert_eq!(lines.len(), 1 + 12);
    assert_eq!(
        lines[0],
        "x1,x2,x3,grad_norm,rough_laplacian_norm,s_norm,bitension_norm,bienergy_density,\
         rough_laplacian_1,rough_laplacian_2,rough_laplacian_3"
    );
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 11));
    let report_json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(report_json["schema_version"], 1);
    assert_eq!(report_json["config_digest"].as_str().unwrap().len(), 64);
}

/// Goes through a file so `load` is exercised too.
fn load_via_file(text: &str) -> JobConfig {
    let file = tempfile::NamedTempFile::with_suffix(".toml").unwrap();
    std::fs::write(file.path(), text).unwrap();
    JobConfig::load(file.path()).unwrap()
}
