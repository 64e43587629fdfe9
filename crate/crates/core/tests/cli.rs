use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stderr: String,
}

fn pcakit(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pcakit"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn ok(args: &[&str]) {
    let run = pcakit(args);
    assert_eq!(run.code, 0, "pcakit {}: {}", args.join(" "), run.stderr);
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn write(&self, name: &str, contents: &str) -> String {
        std::fs::write(self.path(name), contents).unwrap();
        self.arg(name)
    }
}

/// Data rows of a samples-as-rows CSV.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn frobenius_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v) * (u - v)))
        .sum::<f64>()
        .sqrt()
}

fn centered_norm(rows: &[Vec<f64>]) -> f64 {
    let m = rows[0].len();
    let n = rows.len() as f64;
    let mean: Vec<f64> = (0..m)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect();
    rows.iter()
        .flat_map(|r| r.iter().zip(&mean).map(|(x, mu)| (x - mu) * (x - mu)))
        .sum::<f64>()
        .sqrt()
}

const COLLINEAR: &str = "a,b\n-2,-4\n-1,-2\n0,0\n1,2\n2,4\n";

#[test]
fn simulate_is_deterministic() {
    let dir = Dir::new();
    ok(&[
        "simulate",
        "spring",
        "--seed",
        "7",
        "--out",
        &dir.arg("a.csv"),
    ]);
    ok(&[
        "simulate",
        "spring",
        "--seed",
        "7",
        "--out",
        &dir.arg("b.csv"),
    ]);
    ok(&[
        "simulate",
        "spring",
        "--seed",
        "8",
        "--snr",
        "10",
        "--out",
        &dir.arg("c.csv"),
    ]);
    let a = std::fs::read(dir.path("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path("b.csv")).unwrap());
    assert_ne!(a, std::fs::read(dir.path("c.csv")).unwrap());
}

#[test]
fn spring_has_one_row_per_frame() {
    let dir = Dir::new();
    let run = pcakit(&[
        "simulate",
        "spring",
        "--duration",
        "600",
        "--rate",
        "120",
        "--seed",
        "1",
        "--out",
        &dir.arg("s.csv"),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stderr.contains("n = 72000"), "{}", run.stderr);
    assert!(run.stderr.contains("motion axis"), "{}", run.stderr);
    let (header, rows) = read_csv(&dir.path("s.csv"));
    assert_eq!(header, ["xA", "yA", "xB", "yB", "xC", "yC"]);
    assert_eq!(rows.len(), 72000);
}

#[test]
fn ferris_has_two_columns() {
    let dir = Dir::new();
    ok(&[
        "simulate",
        "ferris",
        "--n",
        "1000",
        "--seed",
        "3",
        "--out",
        &dir.arg("f.csv"),
    ]);
    let (header, rows) = read_csv(&dir.path("f.csv"));
    assert_eq!(header.len(), 2);
    assert_eq!(rows.len(), 1000);
    assert!(rows.iter().all(|r| r.len() == 2));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = Dir::new();
    let out = dir.arg("x.csv");
    assert_eq!(pcakit(&["simulate", "spring", "--out", &out]).code, 1);
    assert_eq!(
        pcakit(&["simulate", "spring", "--seed", "1", "--rho", "0.5", "--out", &out]).code,
        1
    );
    assert_eq!(
        pcakit(&["simulate", "pair", "--seed", "1", "--out", &out]).code,
        1
    );
    assert_eq!(
        pcakit(&[
            "simulate",
            "spring",
            "--seed",
            "1",
            "--snr",
            "3",
            "--noise-sigma",
            "1",
            "--out",
            &out
        ])
        .code,
        1
    );
    assert_eq!(
        pcakit(&["analyze", "--in", &out, "--route", "qr", "--out", &out]).code,
        1
    );
    assert_eq!(pcakit(&["frobnicate"]).code, 1);
    assert!(!dir.path("x.csv").exists());
    assert_eq!(pcakit(&["--help"]).code, 0);
}

#[test]
fn noiseless_spring_is_rank_one() {
    let dir = Dir::new();
    ok(&[
        "simulate",
        "spring",
        "--duration",
        "20",
        "--seed",
        "2",
        "--out",
        &dir.arg("s.csv"),
    ]);
    ok(&[
        "analyze",
        "--in",
        &dir.arg("s.csv"),
        "--out",
        &dir.arg("r.json"),
    ]);
    let report = read_json(&dir.path("r.json"));
    let ratio = report["explained_variance_ratio"][0].as_f64().unwrap();
    assert!((ratio - 1.0).abs() <= 1e-9, "{ratio}");
    assert_eq!(report["dataset"]["m"], 6);
    assert_eq!(report["dataset"]["n"], 2400);
    assert_eq!(report["model"]["components"].as_array().unwrap().len(), 6);
    assert!(report.get("timing_ms").is_none());

    ok(&[
        "project",
        "--in",
        &dir.arg("s.csv"),
        "--model",
        &dir.arg("r.json"),
        "--k",
        "1",
        "--reconstruct",
        "--out",
        &dir.arg("x1.csv"),
    ]);
    let (_, x) = read_csv(&dir.path("s.csv"));
    let (_, x1) = read_csv(&dir.path("x1.csv"));
    assert!(frobenius_diff(&x, &x1) <= 1e-9);
}

#[test]
fn both_routes_agree_on_random_data() {
    let dir = Dir::new();
    ok(&[
        "simulate",
        "spring",
        "--duration",
        "5",
        "--snr",
        "2",
        "--seed",
        "4",
        "--out",
        &dir.arg("s.csv"),
    ]);
    ok(&[
        "analyze",
        "--in",
        &dir.arg("s.csv"),
        "--route",
        "both",
        "--norm",
        "n-1",
        "--timing",
        "--out",
        &dir.arg("r.json"),
    ]);
    let report = read_json(&dir.path("r.json"));
    let agreement = &report["diagnostics"]["route_agreement"];
    assert!(agreement["max_component_delta"].as_f64().unwrap() <= 1e-8);
    assert!(agreement["max_variance_delta"].as_f64().unwrap() <= 1e-9);
    assert_eq!(report["model"]["route"], "eigen");
    assert_eq!(report["model"]["normalization"], "sample");
    assert_eq!(report["alternate_model"]["route"], "svd");
    assert!(report["timing_ms"].as_f64().is_some());
    let sum: f64 = report["explained_variance_ratio"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .sum();
    assert!((sum - 1.0).abs() <= 1e-9);
    assert!(
        report["diagnostics"]["relative_off_diagonal_cy"]
            .as_f64()
            .unwrap()
            <= 1e-10
    );
}

#[test]
fn empty_input_reports_no_samples() {
    let dir = Dir::new();
    for (name, contents) in [("empty.csv", ""), ("header.csv", "a,b\n")] {
        let path = dir.write(name, contents);
        let run = pcakit(&["analyze", "--in", &path, "--out", &dir.arg("r.json")]);
        assert_eq!(run.code, 2);
        assert!(run.stderr.contains("no samples"), "{}", run.stderr);
    }
}

#[test]
fn malformed_csv_names_the_line() {
    let dir = Dir::new();
    let bad_number = dir.write("bad.csv", "a,b\n1,2\n3,x\n4,5\n");
    let run = pcakit(&["analyze", "--in", &bad_number, "--out", &dir.arg("r.json")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 3"), "{}", run.stderr);

    let ragged = dir.write("ragged.csv", "a,b\n1,2\n3,4\n5\n");
    let run = pcakit(&["analyze", "--in", &ragged, "--out", &dir.arg("r.json")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 4"), "{}", run.stderr);

    let missing = pcakit(&[
        "analyze",
        "--in",
        &dir.arg("nope.csv"),
        "--out",
        &dir.arg("r.json"),
    ]);
    assert_eq!(missing.code, 2);
}

#[test]
fn constant_data_is_rejected() {
    let dir = Dir::new();
    let path = dir.write("c.csv", "a,b\n1,2\n1,2\n1,2\n");
    let run = pcakit(&["analyze", "--in", &path, "--out", &dir.arg("r.json")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("zero"), "{}", run.stderr);
}

#[test]
fn project_rejects_mismatched_model() {
    let dir = Dir::new();
    let two = dir.write("two.csv", COLLINEAR);
    let three = dir.write("three.csv", "a,b,c\n1,2,3\n4,5,7\n0,1,1\n");
    ok(&["analyze", "--in", &two, "--out", &dir.arg("r.json")]);
    let run = pcakit(&[
        "project",
        "--in",
        &three,
        "--model",
        &dir.arg("r.json"),
        "--out",
        &dir.arg("y.csv"),
    ]);
    assert_eq!(run.code, 2);
    assert!(
        run.stderr.contains('3') && run.stderr.contains('2'),
        "{}",
        run.stderr
    );

    let run = pcakit(&[
        "project",
        "--in",
        &two,
        "--model",
        &dir.arg("r.json"),
        "--k",
        "3",
        "--out",
        &dir.arg("y.csv"),
    ]);
    assert_eq!(run.code, 2);
}

#[test]
fn projection_of_the_collinear_fixture() {
    let dir = Dir::new();
    let data = dir.write("c.csv", COLLINEAR);
    ok(&[
        "analyze",
        "--in",
        &data,
        "--route",
        "svd",
        "--out",
        &dir.arg("r.json"),
    ]);
    ok(&[
        "project",
        "--in",
        &data,
        "--model",
        &dir.arg("r.json"),
        "--out",
        &dir.arg("y.csv"),
    ]);
    let (header, y) = read_csv(&dir.path("y.csv"));
    assert_eq!(header, ["pc1", "pc2"]);
    // Coordinates along (1,2)/√5 are t·√5; the second component is empty.
    for (row, t) in y.iter().zip([-2.0, -1.0, 0.0, 1.0, 2.0]) {
        assert!((row[0].abs() - (t * 5f64.sqrt()).abs()).abs() <= 1e-12);
        assert!(row[1].abs() <= 1e-12);
    }
    ok(&[
        "project",
        "--in",
        &data,
        "--model",
        &dir.arg("r.json"),
        "--k",
        "1",
        "--out",
        &dir.arg("y1.csv"),
    ]);
    let (header, _) = read_csv(&dir.path("y1.csv"));
    assert_eq!(header, ["pc1"]);
}

#[test]
fn ferris_needs_more_than_one_component() {
    let dir = Dir::new();
    ok(&[
        "simulate",
        "ferris",
        "--n",
        "5000",
        "--seed",
        "9",
        "--out",
        &dir.arg("f.csv"),
    ]);
    ok(&[
        "analyze",
        "--in",
        &dir.arg("f.csv"),
        "--out",
        &dir.arg("r.json"),
    ]);
    ok(&[
        "project",
        "--in",
        &dir.arg("f.csv"),
        "--model",
        &dir.arg("r.json"),
        "--k",
        "1",
        "--reconstruct",
        "--out",
        &dir.arg("x1.csv"),
    ]);
    let (_, x) = read_csv(&dir.path("f.csv"));
    let (_, x1) = read_csv(&dir.path("x1.csv"));
    assert!(frobenius_diff(&x, &x1) / centered_norm(&x) >= 0.4);
}

#[test]
fn identity_pipeline_for_other_scenarios() {
    let dir = Dir::new();
    for (scenario, extra) in [
        ("pair", vec!["--rho", "0.6"]),
        ("nonorth", vec![]),
        ("ferris", vec!["--radius", "3"]),
    ] {
        let mut args = vec!["simulate", scenario, "--seed", "5", "--n", "400", "--out"];
        let data = dir.arg(&format!("{scenario}.csv"));
        args.push(&data);
        args.extend(extra);
        ok(&args);
        let report = dir.arg(&format!("{scenario}.json"));
        let x_hat = dir.arg(&format!("{scenario}_hat.csv"));
        ok(&["analyze", "--in", &data, "--norm", "n-1", "--out", &report]);
        ok(&[
            "project",
            "--in",
            &data,
            "--model",
            &report,
            "--reconstruct",
            "--out",
            &x_hat,
        ]);
        let (_, x) = read_csv(Path::new(&data));
        let (_, y) = read_csv(Path::new(&x_hat));
        let scale = x.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        assert!(frobenius_diff(&x, &y) <= 1e-9 * scale, "{scenario}");
    }
}

#[test]
fn measurement_rows_layout() {
    let dir = Dir::new();
    let samples = dir.write("s.csv", COLLINEAR);
    let measurements = dir.write(
        "m.csv",
        "name,s1,s2,s3,s4,s5\na,-2,-1,0,1,2\nb,-4,-2,0,2,4\n",
    );
    ok(&["analyze", "--in", &samples, "--out", &dir.arg("r1.json")]);
    ok(&[
        "analyze",
        "--in",
        &measurements,
        "--rows",
        "measurements",
        "--out",
        &dir.arg("r2.json"),
    ]);
    let (r1, r2) = (
        read_json(&dir.path("r1.json")),
        read_json(&dir.path("r2.json")),
    );
    assert_eq!(r1["model"], r2["model"]);
    assert_eq!(r2["dataset"]["names"], serde_json::json!(["a", "b"]));
}

#[test]
fn plot_files() {
    let dir = Dir::new();
    let data = dir.write("c.csv", COLLINEAR);
    ok(&["analyze", "--in", &data, "--out", &dir.arg("r.json")]);
    ok(&[
        "plotdata",
        "--in",
        &data,
        "--model",
        &dir.arg("r.json"),
        "--out",
        &dir.arg("plot"),
    ]);

    let scree = std::fs::read_to_string(dir.path("plot.scree.tsv")).unwrap();
    let rows: Vec<Vec<&str>> = scree
        .lines()
        .skip(1)
        .map(|l| l.split('\t').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    let variances: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(variances.windows(2).all(|w| w[0] >= w[1]));
    // var(t) = 2 for t = -2..2, times |(1, 2)|² = 5.
    assert!((variances[0] - 10.0).abs() <= 1e-12);
    let cumulative: f64 = rows[1][3].parse().unwrap();
    assert!((cumulative - 1.0).abs() <= 1e-12);

    let overlay = std::fs::read_to_string(dir.path("plot.overlay.tsv")).unwrap();
    let pc1: Vec<&str> = overlay.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(pc1[0], "1");
    assert_eq!(pc1[1], "a/b");
    let (dx, dy): (f64, f64) = (pc1[4].parse().unwrap(), pc1[5].parse().unwrap());
    let s5 = 5f64.sqrt();
    assert!((dx.abs() - 1.0 / s5).abs() <= 1e-8 && (dy.abs() - 2.0 / s5).abs() <= 1e-8);
    assert!(dx * dy > 0.0);

    let scatter = std::fs::read_to_string(dir.path("plot.scatter1.tsv")).unwrap();
    assert_eq!(scatter.lines().count(), 6);
    assert_eq!(scatter.lines().next().unwrap(), "a\tb");
}

#[test]
fn spring_plot_has_one_scatter_per_camera() {
    let dir = Dir::new();
    ok(&[
        "simulate",
        "spring",
        "--duration",
        "2",
        "--seed",
        "1",
        "--snr",
        "50",
        "--out",
        &dir.arg("s.csv"),
    ]);
    ok(&[
        "analyze",
        "--in",
        &dir.arg("s.csv"),
        "--out",
        &dir.arg("r.json"),
    ]);
    ok(&[
        "plotdata",
        "--in",
        &dir.arg("s.csv"),
        "--model",
        &dir.arg("r.json"),
        "--out",
        &dir.arg("p"),
    ]);
    for (j, header) in ["xA\tyA", "xB\tyB", "xC\tyC"].iter().enumerate() {
        let text = std::fs::read_to_string(dir.path(&format!("p.scatter{}.tsv", j + 1))).unwrap();
        assert_eq!(text.lines().next().unwrap(), *header);
        assert_eq!(text.lines().count(), 241);
    }
    assert!(!dir.path("p.scatter4.tsv").exists());
    let scree = std::fs::read_to_string(dir.path("p.scree.tsv")).unwrap();
    assert_eq!(scree.lines().count(), 7);
}
