use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_iplus"));
    c.env_remove("IPLUS_OUT_DIR");
    c
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"))
}

fn validate(schema: &str, doc: &Value) {
    let s: Value = serde_json::from_str(&fs::read_to_string(schema_path(schema)).unwrap()).unwrap();
    let v = jsonschema::validator_for(&s).expect("schema compiles");
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{schema}: {errors:#?}");
}

fn report(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{name}.json"))).unwrap()).unwrap()
}

fn ok(out: &Output) {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn minmod_iterate_squares() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["minmod-iterate", "--f", "z^2", "--r", "2", "--n-max", "12"],
    );
    ok(&out);
    let csv = fs::read_to_string(dir.path().join("minmod-iterate.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["n", "m_n"]);
    for (k, want) in [2.0, 4.0, 16.0, 256.0].iter().enumerate() {
        let got: f64 = rows[k + 1][1].parse().unwrap();
        assert!((got - want).abs() <= 1e-12 * want);
    }
    assert!(csv.contains("\r\n"));
    let r = report(dir.path(), "minmod-iterate");
    assert_eq!(r["report"]["verdict"], "DIVERGES");
    let stdout: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stdout, r);
    validate("minmod-iterate", &r);
}

#[test]
fn expectation_mismatch_exits_one_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "minmod-iterate",
            "--f",
            "z^2",
            "--r",
            "2",
            "--expect",
            "UNDECIDED",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let r = report(dir.path(), "minmod-iterate");
    assert_eq!(r["passed"], false);
    validate("minmod-iterate", &r);
}

#[test]
fn usage_and_parse_errors_exit_two_without_files() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["parse-check", "--f", "1/z"][..],
        &["parse-check", "--f", "z+"],
        &["minmod", "--f", "z"],
        &["frobnicate"],
        &["render", "--f", "z^2", "--nx", "1"],
        &["surround-check", "--f", "z^2", "--domain", "disc:0,0,1"],
        &["orbit", "--f", "z", "--z", "1,2,3"],
        &["scenario", "nope"],
        &[
            "components",
            "--connectivity",
            "6",
            "--input",
            "missing.json",
        ],
    ] {
        let out = run_in(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn help_and_version_exit_zero() {
    let out = bin().arg("--help").output().unwrap();
    ok(&out);
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["parse-check", "minmod-iterate", "sw-probe", "scenario"] {
        assert!(text.contains(sub));
    }
    let out = bin().args(["render", "--help"]).output().unwrap();
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stdout).contains("[default: 200]"));
    ok(&bin().arg("--version").output().unwrap());
}

#[test]
fn parse_check_reports_canonical_forms() {
    let dir = tempfile::tempdir().unwrap();
    ok(&run_in(
        dir.path(),
        &["parse-check", "--f", "z^2 + 2*z", "--at", "-1,0.5"],
    ));
    let r = report(dir.path(), "parse-check");
    assert_eq!(r["canonical"], "((z^2)+((2.0)*z))");
    assert_eq!(r["derivative"], "(((2.0)*z)+(2.0))");
    validate("parse-check", &r);
}

#[test]
fn surround_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "surround-check",
            "--f",
            "sin(z)",
            "--domain",
            "disc:0,0,1",
            "--domain",
            "disc:0,0,2",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let r = report(dir.path(), "surround-check");
    assert_eq!(r["report"]["condition_a"], false);
    validate("surround-check", &r);
    assert!(dir.path().join("surround-check_images.csv").exists());
}

#[test]
fn disc_sequence_for_squaring() {
    let dir = tempfile::tempdir().unwrap();
    ok(&run_in(
        dir.path(),
        &["disc-seq", "--f", "z^2", "--r", "2", "--count", "3"],
    ));
    let r = report(dir.path(), "disc-seq");
    let radii: Vec<f64> = r["radii"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    for (got, want) in radii.iter().zip([2.0, 4.0, 16.0]) {
        assert!((got - want).abs() < 1e-12 * want);
    }
    assert_eq!(r["surround"]["condition_a"], true);
    validate("disc-seq", &r);
}

#[test]
fn scenario_family_commands_validate() {
    let dir = tempfile::tempdir().unwrap();
    ok(&run_in(
        dir.path(),
        &[
            "surround-check",
            "--f",
            "-10*z*exp(-z)-0.5*z",
            "--scenario",
            "ex51",
            "--range",
            "2..4",
        ],
    ));
    validate("surround-check", &report(dir.path(), "surround-check"));
    ok(&run_in(
        dir.path(),
        &["spl-check", "--f", "cos(z)+z", "--scenario", "ex52"],
    ));
    let r = report(dir.path(), "spl-check");
    assert_eq!(r["report"]["condition_iii_holds"], true);
    validate("spl-check", &r);
    ok(&run_in(
        dir.path(),
        &["orbit", "--f", "cos(z)+z", "--z", "1.4,0"],
    ));
    let r = report(dir.path(), "orbit");
    assert_eq!(r["class"], "BOUNDED_SUSPECT");
    validate("orbit", &r);
    let csv = fs::read_to_string(dir.path().join("orbit.csv")).unwrap();
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[1].parse::<f64>().unwrap(), 1.4);
    ok(&run_in(
        dir.path(),
        &[
            "fixed-points",
            "--f",
            "cos(z)+z",
            "--region",
            "rect:0,12.566370614359172,-1,1",
        ],
    ));
    let r = report(dir.path(), "fixed-points");
    assert_eq!(r["fixed_points"].as_array().unwrap().len(), 4);
    validate("fixed-points", &r);
    ok(&run_in(
        dir.path(),
        &["minmod", "--f", "exp(z)", "--r", "1,2", "--max"],
    ));
    validate("minmod", &report(dir.path(), "minmod"));
}

#[test]
fn render_components_probe_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&run_in(
        d,
        &[
            "render",
            "--f",
            "sin(z)",
            "--window",
            "-10,10,-5,5",
            "--nx",
            "200",
            "--ny",
            "100",
        ],
    ));
    let r = report(d, "render");
    validate("render", &r);
    let cls: Value =
        serde_json::from_str(&fs::read_to_string(d.join("classification.json")).unwrap()).unwrap();
    validate("classification", &cls);
    let ppm = fs::read(d.join("render.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n200 100\n255\n"));
    assert_eq!(ppm.len(), b"P6\n200 100\n255\n".len() + 3 * 200 * 100);

    let out = run_in(d, &["components", "--expect-min-edge", "2"]);
    ok(&out);
    let r = report(d, "components");
    assert!(r["component_count"].as_u64().unwrap() >= 2);
    validate("components", &r);

    ok(&run_in(d, &["sw-probe", "--radii", "1,2,3"]));
    let r = report(d, "sw-probe");
    assert_eq!(r["probe"]["consistent"], false);
    validate("sw-probe", &r);

    let out = run_in(d, &["sw-probe", "--radii", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(d, &["components", "--expect-min-edge", "1000"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cmds: [&[&str]; 3] = [
        &[
            "render",
            "--f",
            "cos(z)+z",
            "--window",
            "0,6.283185307179586,-1,1",
            "--nx",
            "64",
            "--ny",
            "32",
        ],
        &["scenario", "ex52"],
        &["minmod-iterate", "--f", "sin(z)", "--r", "1.5"],
    ];
    for args in cmds {
        ok(&run_in(a.path(), args));
        ok(&run_in(b.path(), args));
    }
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 8);
    for n in names {
        assert_eq!(
            fs::read(a.path().join(&n)).unwrap(),
            fs::read(b.path().join(&n)).unwrap(),
            "{n:?}"
        );
    }
}

#[test]
fn scenario_reports_validate() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["ex51", "ex52", "sinz"] {
        let out = run_in(dir.path(), &["scenario", name]);
        ok(&out);
        let r = report(dir.path(), &format!("scenario-{name}"));
        assert_eq!(r["passed"], true);
        validate("scenario", &r);
    }
    for f in [
        "ex51_boundaries.csv",
        "ex51_images.csv",
        "ex52_images.csv",
        "sinz.ppm",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    validate(
        "classification",
        &serde_json::from_str(
            &fs::read_to_string(dir.path().join("sinz_classification.json")).unwrap(),
        )
        .unwrap(),
    );
    // Four ex51 image curves, separated by three blank lines.
    let csv = fs::read_to_string(dir.path().join("ex51_images.csv")).unwrap();
    assert_eq!(csv.matches("\r\n\r\n").count(), 3);
}

#[test]
fn config_file_and_out_dir_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("run.cfg"),
        "# render defaults\nnx = 16\nny=8\nwindow=-1,1,-1,1\nout-dir=from_config\n",
    )
    .unwrap();
    ok(&run_in(
        d,
        &["--config", "run.cfg", "render", "--f", "z^2", "--ny", "10"],
    ));
    let r = report(&d.join("from_config"), "render");
    assert_eq!(r["grid"]["nx"], 16);
    assert_eq!(r["grid"]["ny"], 10);

    let env_dir = d.join("from_env");
    let out = bin()
        .current_dir(d)
        .env("IPLUS_OUT_DIR", &env_dir)
        .args(["parse-check", "--f", "z"])
        .output()
        .unwrap();
    ok(&out);
    assert!(env_dir.join("parse-check.json").exists());
    let flag_dir = d.join("from_flag");
    let out = bin()
        .current_dir(d)
        .env("IPLUS_OUT_DIR", &env_dir)
        .args(["parse-check", "--f", "z", "--out-dir"])
        .arg(&flag_dir)
        .output()
        .unwrap();
    ok(&out);
    assert!(flag_dir.join("parse-check.json").exists());
}
