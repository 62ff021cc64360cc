//! Acceptance run: one line per criterion, then a nonzero exit if any failed.
//! Runs without the libtest harness so the lines show up in `cargo test`.

use std::path::Path;
use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

const JOB: &str = r#"
seed = 2024
checks = [{ kind = "classify", expect = "harmonic_vector_field" }, "bienergy", "first-variation"]

[manifold]
id = "hyperbolic"
params = [2, 1.0]

[field]
family = "hyperbolic-fV"
params = [0.0, 1.0]

[domain]
lower = [-0.5, 0.75]
upper = [0.5, 1.75]
quadrature_points = 24
sample_points = 4
"#;

fn sasaki() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sasaki"))
}

fn report(config: &Path, out: &Path, seed: &str) -> Result<Vec<u8>, String> {
    let status = sasaki()
        .args(["check", "--config"])
        .arg(config)
        .args(["--seed", seed, "--out"])
        .arg(out)
        .stderr(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("check exited with {status}"));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

/// `selftest` exits 0 and two runs with one seed agree byte for byte.
fn determinism(selftest_ok: bool) -> (bool, String) {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return (false, e.to_string()),
    };
    let config = dir.path().join("job.toml");
    if let Err(e) = std::fs::write(&config, JOB) {
        return (false, e.to_string());
    }
    let runs = (
        report(&config, &dir.path().join("a.json"), "17"),
        report(&config, &dir.path().join("b.json"), "17"),
        report(&config, &dir.path().join("c.json"), "18"),
    );
    match runs {
        (Ok(a), Ok(b), Ok(c)) => {
            let same = a == b;
            let seed_matters = a != c;
            (
                selftest_ok && same && seed_matters,
                format!(
                    "selftest exit {}, same seed identical: {same}, other seed differs: {seed_matters}",
                    if selftest_ok { 0 } else { 1 }
                ),
            )
        }
        (a, b, c) => (false, format!("{:?}", [a.err(), b.err(), c.err()])),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let out = match sasaki().arg("selftest").output() {
        Ok(o) => o,
        Err(e) => {
            println!("acceptance: cannot run selftest: {e}");
            return ExitCode::FAILURE;
        }
    };
    let text = String::from_utf8_lossy(&out.stdout);
    let mut all = true;
    for id in 1..=7 {
        let prefix = format!("criterion {id} ");
        match text.lines().find(|l| l.starts_with(&prefix)) {
            Some(line) => {
                all &= line.contains(": PASS");
                println!("{line}");
            }
            None => {
                all = false;
                println!("criterion {id}: FAIL (missing from selftest output)");
            }
        }
    }
    let t8 = Instant::now();
    let (ok, detail) = determinism(out.status.success());
    all &= ok;
    println!(
        "criterion 8 [cli] determinism and selftest: {} ({detail}; {:.1} s)",
        if ok { "PASS" } else { "FAIL" },
        t8.elapsed().as_secs_f64()
    );
    println!("acceptance: {} in {:.1} s", if all { "all criteria pass" } else { "FAILED" }, start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
