use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cocycle-lab"));
    c.env_remove("COCYCLE_LAB_BUDGET");
    c
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg(cmd).arg("--config").arg(cfg).arg("--out").arg(out).args(extra).output().unwrap()
}

fn manifest(out: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(out.join("run.json")).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn free_spectrum_band() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("spectrum", &config("free.json"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("bands.csv"));
    assert_eq!(rows.len(), 1);
    let lo: f64 = rows[0][0].parse().unwrap();
    let hi: f64 = rows[0][1].parse().unwrap();
    assert!((lo + 2.0).abs() <= 0.05 && (hi - 2.0).abs() <= 0.05, "{lo} {hi}");
    let m = manifest(dir.path());
    assert_eq!(m["status"], "ok");
    assert_eq!(m["seed"], 0);
    assert_eq!(m["seed_source"], "default");
    assert!(m["outputs"].as_array().unwrap().iter().any(|f| f == "classification.csv"));
}

#[test]
fn factor_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("subshift", &config("fib.json"), dir.path(), &["--factors", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("factors.csv"));
    let words: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    // length-3 factors of the Fibonacci word
    assert_eq!(words, ["aab", "aba", "baa", "bab"]);
}

#[test]
fn missing_variant_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"subshift": {"word": "ab"}, "factors": 2}"#).unwrap();
    let o = run("subshift", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("variant"), "{err}");
    assert_eq!(manifest(&dir.path().join("out"))["status"], "config");
}

#[test]
fn unknown_flag_and_missing_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().args(["uh", "--frobnicate"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().arg("uh").arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("exponent", &config("exponent_family.json"), dir.path(), &["--budget", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(dir.path());
    assert_eq!(m["status"], "budget");
    assert_eq!(m["budget"], 10);
    assert_eq!(m["budget_source"], "flag");

    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("COCYCLE_LAB_BUDGET", "10")
        .arg("exponent")
        .arg("--config")
        .arg(config("exponent_diag.json"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(manifest(dir.path())["budget_source"], "env");
}

#[test]
fn every_example_config_runs() {
    let cases = [
        ("subshift", "fib.json", &["factors.csv", "frequencies.csv", "boshernitzan.csv", "prefix.json"][..]),
        ("spectrum", "fib_spectrum.json", &["approximants.csv", "approximant_bands.csv", "semicontinuity.json"]),
        ("exponent", "exponent_family.json", &["trace.csv", "report.json"]),
        ("exponent", "exponent_diag.json", &["trace.csv", "report.json"]),
        ("uh", "uh_schrodinger.json", &["certificate.json", "cones.csv", "splitting.csv"]),
        ("avalanche", "avalanche_diag.json", &["certificate.json", "openness.json"]),
        ("approximate", "rotation_approx.json", &["approximation.json", "family.json", "discretized.json"]),
        ("construct", "construct_free.json", &["construction.json", "schedule.csv", "stage_energies.csv"]),
    ];
    for (cmd, cfg, files) in cases {
        let dir = tempfile::tempdir().unwrap();
        let o = run(cmd, &config(cfg), dir.path(), &[]);
        assert_eq!(o.status.code(), Some(0), "{cfg}: {}", String::from_utf8_lossy(&o.stderr));
        for f in files {
            assert!(dir.path().join(f).exists(), "{cfg}: missing {f}");
        }
        let m = manifest(dir.path());
        assert_eq!(m["command"], cmd);
        assert!(m["soft_failures"].as_array().unwrap().is_empty(), "{cfg}: {m}");
        // numeric CSV cells are finite
        for entry in fs::read_dir(dir.path()).unwrap() {
            let p = entry.unwrap().path();
            if p.extension().is_some_and(|e| e == "csv") {
                for row in csv_rows(&p) {
                    for cell in row {
                        if let Ok(x) = cell.parse::<f64>() {
                            assert!(x.is_finite(), "{}", p.display());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn rerun_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (cmd, cfg) in [("spectrum", "fib_spectrum.json"), ("construct", "construct_free.json")] {
        assert_eq!(run(cmd, &config(cfg), a.path(), &["--threads", "1"]).status.code(), Some(0));
        assert_eq!(run(cmd, &config(cfg), b.path(), &["--threads", "3"]).status.code(), Some(0));
    }
    let m = manifest(a.path());
    assert_eq!(m["seed"], 3);
    assert_eq!(m["seed_source"], "config");
    let mut compared = 0;
    for entry in fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        if name == "run.json" {
            continue;
        }
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name:?}");
        compared += 1;
    }
    assert!(compared >= 5);
}

#[test]
fn seed_flag_overrides_config() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run("avalanche", &config("avalanche_diag.json"), a.path(), &[]);
    run("avalanche", &config("avalanche_diag.json"), b.path(), &["--seed", "99"]);
    assert_eq!(manifest(a.path())["seed"], 7);
    let m = manifest(b.path());
    assert_eq!(m["seed"], 99);
    assert_eq!(m["seed_source"], "flag");
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(b.path().join("openness.json")).unwrap()).unwrap();
    assert_eq!(rep["seed"], 99);
}
