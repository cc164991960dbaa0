//! End-to-end checks of the binary's contract: output schema, determinism
//! across runs and thread counts, seed override, and the exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qedbounds::rows::{parse_csv, CSV_HEADER, TOOL_VERSION};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qedbounds")
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("qedbounds-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.0.join(name);
        fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        fs::remove_dir_all(&self.0).ok();
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .env_remove("QEDBOUNDS_OUT_DIR")
        .args(args)
        .output()
        .unwrap()
}

fn run_to(config: &Path, task: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![task, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

/// Everything after the first line; the leading comment carries the
/// timestamp and is the only run-dependent part of the file.
fn body(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    let (first, rest) = text.split_once('\n').unwrap();
    assert!(first.starts_with(&format!("# qedbounds {TOOL_VERSION} ")), "comment line: {first}");
    rest.to_owned()
}

#[test]
fn identical_config_and_seed_give_byte_identical_bodies() {
    let s = Scratch::new("det");
    let cfg = s.file(
        "det.json",
        r#"{"task":"bounds","grid":{"alpha":[0.5,1.0,2.0],"lambda":[1.0,10.0],"n":[1,4]},"seed":99}"#,
    );
    let (a, b, c) = (s.path("a.csv"), s.path("b.csv"), s.path("c.csv"));
    assert!(run_to(&cfg, "bounds", &a, &["--threads", "1"]).status.success());
    assert!(run_to(&cfg, "bounds", &b, &["--threads", "7"]).status.success());
    assert!(run_to(&cfg, "bounds", &c, &["--seed", "100"]).status.success());
    assert_eq!(body(&a), body(&b));
    assert_ne!(body(&a), body(&c), "seed override must change the rows");
}

#[test]
fn output_schema_round_trips_and_carries_the_seed() {
    let s = Scratch::new("schema");
    let cfg = s.file(
        "rel.json",
        r#"{"task":"rel","grid":{"alpha":[0.001,0.01]},"seed":12}"#,
    );
    let out = s.path("rel.csv");
    assert!(run_to(&cfg, "rel", &out, &[]).status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), CSV_HEADER);
    let rows = parse_csv(&text).unwrap();
    assert!(rows.len() >= 5, "two grid points plus the kernel report");
    assert!(rows.iter().all(|r| r.is_ok()));
    assert!(rows.iter().all(|r| r.tool_version == TOOL_VERSION));
    // reserialize and compare field by field
    let again = parse_csv(&qedbounds::rows::csv_string("x", &rows)).unwrap();
    assert_eq!(rows.len(), again.len());
    for (r, s) in rows.iter().zip(&again) {
        assert!(r.same_as(s));
    }
}

#[test]
fn configuration_errors_exit_2_and_write_nothing() {
    let s = Scratch::new("conf");
    let out = s.path("never.csv");

    let empty = s.file("empty.json", r#"{"task":"bounds","grid":{"alpha":[]}}"#);
    let r = run_to(&empty, "bounds", &out, &[]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("empty grid"));

    let mangled = s.file("mangled.json", r#"{"task":"bounds","grid":{"#);
    assert_eq!(run_to(&mangled, "bounds", &out, &[]).status.code(), Some(2));

    let unknown = s.file("unknown.json", r#"{"task":"bounds","constants":{"c_mystery":1.0}}"#);
    assert_eq!(run_to(&unknown, "bounds", &out, &[]).status.code(), Some(2));

    let good = s.file("good.json", r#"{"task":"bounds"}"#);
    let r = run_to(&good, "a2", &out, &[]);
    assert_eq!(r.status.code(), Some(2), "task mismatch");
    assert!(String::from_utf8_lossy(&r.stderr).contains("does not match"));

    let r = run(&["frobnicate", "--config", good.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2), "unknown task name");

    assert!(!out.exists(), "configuration errors must not produce output");
}

#[test]
fn numerical_failure_exits_1_with_partial_rows() {
    let s = Scratch::new("partial");
    // a two-point cutoff axis starves the power-law fit, which needs three
    let cfg = s.file(
        "fit.json",
        r#"{"task":"fit","grid":{"alpha":[10000.0],"lambda":[100.0,1000.0]},"seed":4}"#,
    );
    let out = s.path("fit.csv");
    let r = run_to(&cfg, "fit", &out, &[]);
    assert_eq!(r.status.code(), Some(1));
    let rows = parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.iter().filter(|r| r.is_ok()).count(), 2, "grid rows still land");
    let bad: Vec<_> = rows.iter().filter(|r| !r.is_ok()).collect();
    assert_eq!(bad.len(), 1);
    assert!(bad[0].status.contains("insufficient"));
    assert!(bad[0].value.is_nan());
}

#[test]
fn out_dir_variable_redirects_relative_outputs() {
    let s = Scratch::new("outdir");
    let cfg = s.file("b.json", r#"{"task":"bounds","grid":{"alpha":[1.0]}}"#);
    let r = Command::new(bin())
        .env("QEDBOUNDS_OUT_DIR", &s.0)
        .args(["bounds", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(s.path("bounds.csv").exists(), "default name lands inside QEDBOUNDS_OUT_DIR");
}

#[test]
fn fit_task_emits_exponent_rows_on_a_real_sweep() {
    let s = Scratch::new("fit");
    let cfg = s.file(
        "fit.json",
        r#"{"task":"fit","grid":{"alpha":[10000.0],"lambda":[100.0,316.0,1000.0,3160.0,10000.0]},"seed":2}"#,
    );
    let out = s.path("fit.csv");
    assert!(run_to(&cfg, "fit", &out, &[]).status.success());
    let rows = parse_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    let fit: Vec<_> = rows.iter().filter(|r| r.side == "fit").collect();
    assert_eq!(fit.len(), 1);
    assert!((fit[0].value - 12.0 / 7.0).abs() < 0.05, "exponent {}", fit[0].value);
}
