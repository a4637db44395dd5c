use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterlin")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).expect("valid JSON")
}

#[test]
fn count_examples() {
    assert_eq!(
        stdout(&["count", "--m", "3", "--a", "1", "--b", "2", "--n", "2", "--variant", "p", "--method", "exact"]),
        "3\n"
    );
    assert_eq!(stdout(&["count", "--m", "3", "--a", "1", "--b", "2", "--n", "2", "--method", "brute"]), "3\n");
    assert_eq!(stdout(&["count", "--m", "3", "--a", "1", "--b", "2", "--n", "2", "--variant", "q"]), "15\n");
}

#[test]
fn exact_and_brute_agree() {
    for (m, a, b, n) in [(4, 1, 3, 3), (5, 2, 4, 2), (4, 2, 3, 4), (6, 1, 6, 3)] {
        for variant in ["p", "q"] {
            let base = [
                "count",
                "--m",
                &m.to_string(),
                "--a",
                &a.to_string(),
                "--b",
                &b.to_string(),
                "--n",
                &n.to_string(),
                "--variant",
                variant,
            ]
            .map(String::from);
            let args: Vec<&str> = base.iter().map(String::as_str).collect();
            let exact = stdout(&[args.as_slice(), &["--method", "exact"]].concat());
            let brute = stdout(&[args.as_slice(), &["--method", "brute"]].concat());
            assert_eq!(exact, brute, "({m},{a},{b},{n}) {variant}");
        }
    }
}

#[test]
fn large_counts_print_in_full() {
    let out = stdout(&["count", "--m", "8", "--a", "3", "--b", "5", "--n", "60"]);
    let digits = out.trim();
    assert!(digits.len() > 100 && digits.chars().all(|c| c.is_ascii_digit()));
    let v = json(&["count", "--m", "8", "--a", "3", "--b", "5", "--n", "60"]);
    assert_eq!(v["summary"]["count"].as_str().unwrap(), digits);
}

#[test]
fn constant_example() {
    let out = stdout(&["constant", "--m", "4", "--a", "1", "--b", "3"]);
    assert!(out.starts_with("leading=1 c=0.098612288668"), "{out}");
    let v = json(&["constant", "--m", "4", "--a", "1", "--b", "3"]);
    assert_eq!(v["summary"]["leading"], 1);
    assert!((v["summary"]["c"].as_f64().unwrap() - (3f64.ln() - 1.0)).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", "--m", "3", "--a", "2", "--b", "2", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--m", "3", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--m", "3", "--a", "1", "--b", "2", "--n", "40", "--method", "brute"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["fit", "--m", "4", "--a", "1", "--b", "3", "--n-max", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let err = run(&["constant", "--m", "2", "--a", "2", "--b", "1"]);
    assert!(String::from_utf8_lossy(&err.stderr).starts_with("error:"));
    assert!(err.stdout.is_empty());
}

#[test]
fn fit_rows() {
    let csv = stdout(&["fit", "--m", "3", "--a", "1", "--b", "2", "--n-max", "30", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,estimate,residual,envelope"));
    assert_eq!(lines.count(), 30);
    let v = json(&["fit", "--m", "3", "--a", "1", "--b", "2", "--n-max", "30"]);
    let last = &v["rows"][29];
    assert_eq!(last["n"], 30);
    assert!(last["residual"].as_f64().unwrap().abs() < last["envelope"].as_f64().unwrap());
}

#[test]
fn compare_reports_crossover() {
    let v = json(&["compare", "--m", "6", "--a", "1", "--b", "3", "--a2", "2", "--b2", "4", "--n-max", "12"]);
    assert!(v["summary"]["constant_gap"].as_f64().unwrap() > 1e-9);
    assert_eq!(v["summary"]["n0"], 2);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    let d1 = json(&["compare", "--m", "4", "--a", "1", "--b", "2", "--a2", "2", "--b2", "3", "--n-max", "3"]);
    assert_eq!(d1["rows"][1]["left"], "10");
    assert_eq!(d1["rows"][1]["right"], "9");
    assert_eq!(d1["rows"][1]["ordering"], "Greater");
}

#[test]
fn profile_csv() {
    let csv = stdout(&["profile", "--m", "3", "--a", "1", "--b", "2", "--points", "4", "--format", "csv"]);
    assert_eq!(csv, "t,f,fprime\n0,0,0.5\n0.25,0.133974596216,0.57735026919\n0.5,0.292893218813,0.707106781187\n0.75,0.5,1\n1,1,inf\n");
    let v = json(&["profile", "--m", "8", "--a", "3", "--b", "5", "--points", "10"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    assert_eq!(v["rows"][0]["fprime"], "inf");
    assert_eq!(run(&["profile", "--m", "8", "--a", "3", "--b", "5", "--points", "0"]).status.code(), Some(2));
}

#[test]
fn sample_is_deterministic() {
    let args =
        ["sample", "--m", "4", "--a", "2", "--b", "3", "--n", "6", "--samples", "40", "--seed", "7", "--format", "csv"];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    assert!(first.starts_with("i,mean_height,reference_f,abs_deviation\n"));
    assert_eq!(first.lines().count(), 8);
    let v = json(&[
        "sample",
        "--m",
        "4",
        "--a",
        "2",
        "--b",
        "3",
        "--n",
        "6",
        "--samples",
        "40",
        "--burnin",
        "1000",
        "--thinning",
        "50",
    ]);
    assert_eq!(v["summary"]["burnin"], 1000);
    assert_eq!(v["summary"]["thinning"], 50);
    let heights: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["mean_height"].as_f64().unwrap()).collect();
    assert!(heights.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(run(&["sample", "--m", "4", "--a", "2", "--b", "3", "--samples", "0"]).status.code(), Some(2));
}

#[test]
fn classify_s3() {
    let v = json(&["classify", "--m", "3", "--n-max", "6"]);
    assert_eq!(v["summary"]["classes"], 2);
    assert_eq!(v["rows"][0]["members"], "123 321");
    let weak = json(&["classify", "--m", "4", "--n-max", "7", "--weak"]);
    let strong = json(&["classify", "--m", "4", "--n-max", "7"]);
    assert!(weak["summary"]["classes"].as_u64() <= strong["summary"]["classes"].as_u64());
}

#[test]
fn check_passes() {
    let out = stdout(&["check", "--format", "csv"]);
    assert!(out.starts_with("suite,status,detail\n"));
    assert!(out.lines().skip(1).all(|l| l.split(',').nth(1) == Some("PASS")), "{out}");
}

#[test]
fn svg_and_dot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let cases: [(&str, Vec<&str>); 4] = [
        ("profile.svg", vec!["profile", "--m", "8", "--a", "3", "--b", "5", "--points", "50"]),
        ("fit.svg", vec!["fit", "--m", "3", "--a", "1", "--b", "2", "--n-max", "10"]),
        ("sample.svg", vec!["sample", "--m", "3", "--a", "1", "--b", "2", "--n", "4", "--samples", "16"]),
        ("hasse.svg", vec!["poset", "--m", "8", "--a", "3", "--b", "5", "--n", "2", "--variant", "q"]),
    ];
    for (name, mut args) in cases {
        let p = path(name);
        args.extend(["--svg", p.as_str()]);
        stdout(&args);
        let svg = std::fs::read_to_string(&p).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"), "{name}");
    }
    let dot = stdout(&["poset", "--m", "8", "--a", "3", "--b", "5", "--n", "2", "--variant", "q"]);
    assert!(dot.starts_with("digraph \"Q_2^{8,3,5}\" {"));
    assert!(dot.contains("purple"));
    let bad = run(&["poset", "--m", "3", "--a", "1", "--b", "2", "--n", "1", "--svg", "/nonexistent/dir/x.svg"]);
    assert_eq!(bad.status.code(), Some(3));
}
