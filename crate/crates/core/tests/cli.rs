use std::path::PathBuf;
use std::process::{Command, Output};

use pwl_cycles::report::AnalysisReport;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwl-cycles"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn canon_prints_the_seven_parameters() {
    let o = run(&["canon", data("center_pair.json").to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["T_L"], 2.0);
    assert_eq!(v["D_R"], 1.0);
    assert_eq!(v["b"], 0.0);
}

#[test]
fn analyze_emits_a_report_and_exit_code() {
    let o = run(&["analyze", data("three_cycles.toml").to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = AnalysisReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.cycles.len(), 3);

    let o = run(&["analyze", data("three_cycles.toml").to_str().unwrap(), "--csv"]);
    let csv = stdout(&o);
    assert!(csv.starts_with("y0_star,"));
    assert!(csv.contains("# continuum=false certified=true"));
}

#[test]
fn bad_inputs_have_distinct_exit_codes() {
    assert_eq!(run(&["analyze", data("no_crossing.toml").to_str().unwrap()]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.toml");
    std::fs::write(&junk, "[canonical]\nT_L = \"x\"\n").unwrap();
    assert_eq!(run(&["analyze", junk.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "/nonexistent.toml"]).status.code(), Some(1));
    assert!(!run(&["analyze", data("three_cycles.toml").to_str().unwrap(), "--grid", "8"]).status.success());
}

#[test]
fn sweep_is_reproducible() {
    let args = ["sweep", "--n", "36", "--seed", "4", "--threads", "1"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 37);
    assert!(text.contains("violations=0"));
}

#[test]
fn line_case_stratum_reports_four_plus_one() {
    let o = run(&["sweep", "--n", "12", "--seed", "9", "--strata", "tl_zero"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    for line in lines.filter(|l| !l.starts_with('#')) {
        let f: Vec<&str> = line.split(',').collect();
        if f[col("continuum")] == "true" {
            continue;
        }
        assert_eq!(f[col("stratum")], "tl_zero");
        assert_eq!(f[col("intersection_bound")], "4");
        assert_eq!(f[col("cycle_bound")], "5");
    }
}

#[test]
fn plot_writes_svg_and_skips_continua() {
    let dir = tempfile::tempdir().unwrap();
    for what in ["halfmaps", "delta", "contact"] {
        let out = dir.path().join(format!("{what}.svg"));
        let o = run(&[
            "plot",
            data("three_cycles.toml").to_str().unwrap(),
            "--what",
            what,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(std::fs::read_to_string(&out).unwrap().starts_with("<svg"));
    }
    let out = dir.path().join("center.svg");
    let o = run(&["plot", data("global_center.toml").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!out.exists());
}
