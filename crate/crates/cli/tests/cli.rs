//! End-to-end checks of the `dmi` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dmi_core::driver::{read_front_csv, RunRecord};
use dmi_core::metrics::hypervolume_of;

fn dmi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmi")).args(args).output().expect("spawn dmi")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("config.json");
    fs::write(
        &path,
        r#"{"problem": "zdt31", "n": 3, "m": 2, "max_fes": 10, "seed": 4,
            "search": {"population": 20, "generations": 5},
            "hyper": {"starts": 1}, "pf_samples": 100,
            "interpolation": {"count_total": 20}}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_then_front_then_hv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("run");
    let o = dmi(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["record.json", "front.csv", "front.pf.csv", "summary.csv"] {
        assert!(out.join(f).exists(), "{f} missing");
    }

    let record = RunRecord::from_json(&fs::read_to_string(out.join("record.json")).unwrap()).unwrap();
    assert_eq!(record.true_fes, 32 + 10);
    let csv = dir.path().join("extracted.csv");
    let o = dmi(&["front", "--record", out.join("record.json").to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let points = read_front_csv(&csv).unwrap();
    assert!(!points.is_empty());
    assert!(points.iter().all(|p| p.len() == 2));

    let r = &record.reference;
    let o = dmi(&[
        "hv",
        "--front",
        csv.to_str().unwrap(),
        "--ref",
        &r[0].to_string(),
        "--ref",
        &r[1].to_string(),
    ]);
    assert!(o.status.success());
    let printed: f64 = String::from_utf8(o.stdout).unwrap().trim().parse().unwrap();
    assert!((printed - record.final_hv).abs() <= 1e-9 * record.final_hv.max(1.0));
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    assert!((hypervolume_of(&refs, r).unwrap() - record.final_hv).abs() <= 1e-9);
}

#[test]
fn seed_and_ablation_flags_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("run");
    let o = dmi(&["run", "--config", &cfg, "--seed", "9", "--no-interpolation", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let row = summary.lines().nth(1).unwrap();
    assert!(row.starts_with("zdt31,3,2,moead-ihv,9,ok,"), "{row}");
}

#[test]
fn stats_reports_a_paired_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    fs::write(&a, "final_hv\n5\n6\n7\n8\n9\n10\n").unwrap();
    fs::write(&b, "final_hv\n1\n2\n3\n4\n5\n6\n").unwrap();
    let o = dmi(&["stats", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("wilcoxon_p\t0.03125"), "{text}");
    assert!(text.contains("magnitude\tlarge"), "{text}");
}

#[test]
fn errors_exit_nonzero_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"problem": "nope", "n": 3, "m": 2}"#).unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["run".into(), "--config".into(), bad.to_str().unwrap().into(), "--out".into(), "x".into()],
        vec!["hv".into(), "--front".into(), "/nonexistent.csv".into(), "--ref".into(), "1".into()],
        vec!["front".into(), "--record".into(), "/nonexistent.json".into(), "--out".into(), "x.csv".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = dmi(&args);
        assert!(!o.status.success(), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.starts_with("dmi: error:"), "{err}");
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    }
}

#[test]
fn suite_writes_records_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    fs::write(
        &cfg,
        r#"{"problems": [{"problem": "zdt31", "n": 3, "m": 2}],
            "instances": ["dmi-moead-ihv", "lhs"], "seeds": [1, 2],
            "base": {"max_fes": 10, "search": {"population": 20, "generations": 5},
                     "hyper": {"starts": 1}, "pf_samples": 100}}"#,
    )
    .unwrap();
    let out = dir.path().join("suite");
    let o = Command::new(env!("CARGO_BIN_EXE_dmi"))
        .args(["suite", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .env("DMI_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
}
