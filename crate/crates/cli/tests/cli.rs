use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qoptics(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qoptics"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Every file in a run directory, by name.
fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

const SHORT_SPECTRA: &[&str] = &[
    "spectra",
    "--model",
    "white-fm",
    "--seconds",
    "0.5",
    "--ensemble",
    "2",
    "--lenient",
];

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for args in [
        SHORT_SPECTRA,
        &[
            "tomo",
            "--state",
            "coherent:1,1",
            "--angles",
            "8",
            "--shots",
            "1000",
            "--points",
            "41",
            "--lenient",
        ],
    ] {
        assert_eq!(status(&qoptics(args, &a)), 0);
        assert_eq!(status(&qoptics(args, &b)), 0);
        assert_eq!(files(&a), files(&b));
    }
}

#[test]
fn seed_changes_samples() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let args = ["tomo", "--angles", "8", "--shots", "1000", "--points", "41"];
    qoptics(&args, &a);
    qoptics(&[&args[..], &["--seed", "1"]].concat(), &b);
    assert_ne!(
        fs::read(a.join("samples.csv")).unwrap(),
        fs::read(b.join("samples.csv")).unwrap()
    );
}

#[test]
fn embedded_config_reproduces_run() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(
        status(&qoptics(&["epr", "--epsilon", "0.2", "--seed", "9"], &a)),
        0
    );
    let text = fs::read_to_string(a.join("epr.csv")).unwrap();
    let config = text
        .lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .expect("config line");
    let path = tmp.path().join("run.json");
    fs::write(&path, config).unwrap();
    assert_eq!(
        status(&qoptics(&["epr", "--config", path.to_str().unwrap()], &b)),
        0
    );
    assert_eq!(files(&a), files(&b));
}

#[test]
fn flags_override_config_file() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("run.json");
    fs::write(&path, r#"{"command": "epr", "epsilon": 0.5, "seed": 3}"#).unwrap();
    let out = tmp.path().join("o");
    assert_eq!(
        status(&qoptics(
            &[
                "epr",
                "--config",
                path.to_str().unwrap(),
                "--epsilon",
                "0.2"
            ],
            &out
        )),
        0
    );
    let text = fs::read_to_string(out.join("epr.csv")).unwrap();
    assert!(text.contains(r#""epsilon":0.2"#), "{text}");
    assert!(text.contains("# seed: 3"), "{text}");
}

#[test]
fn configuration_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(status(&qoptics(&["tomo", "--angles", "4"], &out)), 2);
    assert_eq!(status(&qoptics(&["tomo", "--shots", "10"], &out)), 2);
    assert_eq!(
        status(&qoptics(&["wigner", "--state", "nonsense"], &out)),
        2
    );
    assert_eq!(status(&qoptics(&["spectra", "--model", "pink"], &out)), 2);

    let unknown = tmp.path().join("unknown.json");
    fs::write(&unknown, r#"{"epsilon": 0.1, "shots": 5}"#).unwrap();
    let o = qoptics(&["epr", "--config", unknown.to_str().unwrap()], &out);
    assert_eq!(status(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key `shots`"));

    let wrong = tmp.path().join("wrong.json");
    fs::write(&wrong, r#"{"command": "tomo"}"#).unwrap();
    assert_eq!(
        status(&qoptics(
            &["epr", "--config", wrong.to_str().unwrap()],
            &out
        )),
        2
    );
}

#[test]
fn io_errors_exit_1() {
    let tmp = TempDir::new().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    assert_eq!(status(&qoptics(&["epr"], &blocker.join("sub"))), 1);
}

#[test]
fn failed_checks_exit_3_unless_lenient() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let o = qoptics(&["g2", "--state", "vacuum"], &out);
    assert_eq!(status(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL: g2_defined"));
    assert_eq!(
        status(&qoptics(&["g2", "--state", "vacuum", "--lenient"], &out)),
        0
    );
    let checks = fs::read_to_string(out.join("checks.csv")).unwrap();
    assert!(checks.contains("g2_defined"), "{checks}");
}

#[test]
fn g2_table_matches_photon_statistics() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let o = qoptics(
        &[
            "g2",
            "--state",
            "coherent:1",
            "--state",
            "thermal:1",
            "--state",
            "fock:2",
        ],
        &out,
    );
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("g2.csv")).unwrap();
    let g2: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    let expected = [1.0, 2.0, 0.5];
    assert_eq!(g2.len(), 3);
    for (g, e) in g2.iter().zip(expected) {
        assert!((g - e).abs() < 1e-9, "{g2:?}");
    }
}

#[test]
fn json_output_mirrors_tables() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(
        status(&qoptics(
            &["channels", "--format", "json", "--steps", "3"],
            &out
        )),
        0
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("channels.json")).unwrap()).unwrap();
    assert_eq!(v["metadata"]["command"], "channels");
    assert_eq!(v["metadata"]["config"]["steps"], 3);
    let columns = v["columns"].as_array().unwrap();
    assert!(v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r.as_array().unwrap().len() == columns.len()));
    assert!(out.join("checks.json").exists());
}

#[test]
fn tomography_report_within_tolerance() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let o = qoptics(&["tomo", "--state", "squeezed:0.25"], &out);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(report.lines().any(|l| l.starts_with("fit_var_x,")));
}

#[test]
fn wigner_checks_pass_for_cat_state() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let o = qoptics(&["wigner", "--state", "cat:2", "--points", "121"], &out);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    for name in ["wigner.csv", "husimi.csv", "distribution.csv", "report.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
}
