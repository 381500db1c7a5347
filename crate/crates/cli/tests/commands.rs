use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn iris() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/iris.csv")
}

fn coreset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coreset"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rows(p: &Path) -> usize {
    std::fs::read_to_string(p).unwrap().lines().count() - 1
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn construct_fixed_size_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = coreset(&[
        "construct",
        path(&iris()),
        "--algo",
        "rcc-fixed",
        "--size",
        "20",
        "--z",
        "1",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&out), 20);
    let side = json(&out.with_extension("json"));
    assert_eq!(side["size"], 20);
    assert!((side["total_weight"].as_f64().unwrap() - 150.0).abs() < 1e-9);
    assert!(side["certificate"]["eps_maxdist"].as_f64().unwrap() > 0.0);
}

#[test]
fn construct_rcc_meets_requested_eps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = coreset(&[
        "construct",
        path(&iris()),
        "--algo",
        "rcc",
        "--eps",
        "0.3",
        "--rho",
        "1",
        "--z",
        "2",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let side = json(&out.with_extension("json"));
    assert!(side["eps_bound"].as_f64().unwrap() <= 0.3);
    assert_eq!(side["certificate"]["z"], 2);
}

#[test]
fn construct_farthest_and_samplers() {
    let dir = tempfile::tempdir().unwrap();
    for (algo, size) in [("farthest", 8), ("uniform", 12), ("sensitivity", 12)] {
        let out = dir.path().join(format!("{algo}.csv"));
        let o = coreset(&[
            "construct",
            path(&iris()),
            "--algo",
            algo,
            "--size",
            &size.to_string(),
            "--out",
            path(&out),
        ]);
        assert!(
            o.status.success(),
            "{algo}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(rows(&out) <= size && rows(&out) > 0);
        if algo == "farthest" {
            assert_eq!(rows(&out), 8);
        }
    }
}

#[test]
fn construct_is_deterministic_given_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = coreset(&[
            "construct",
            path(&iris()),
            "--algo",
            "uniform",
            "--size",
            "15",
            "--seed",
            seed,
            "--out",
            path(&out),
        ]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.csv", "4"), run("b.csv", "4"));
    assert_ne!(run("c.csv", "4"), run("d.csv", "5"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let missing_size = coreset(&[
        "construct",
        path(&iris()),
        "--algo",
        "uniform",
        "--out",
        path(&out),
    ]);
    assert_eq!(missing_size.status.code(), Some(2));
    let bad_flag = coreset(&[
        "construct",
        path(&iris()),
        "--algo",
        "nope",
        "--size",
        "3",
        "--out",
        path(&out),
    ]);
    assert_eq!(bad_flag.status.code(), Some(2));
    let too_big = coreset(&[
        "construct",
        path(&iris()),
        "--algo",
        "rcc-fixed",
        "--size",
        "151",
        "--out",
        path(&out),
    ]);
    assert_eq!(too_big.status.code(), Some(2));
    let missing_file = coreset(&[
        "construct",
        "/no/such/file.csv",
        "--algo",
        "uniform",
        "--size",
        "3",
        "--out",
        path(&out),
    ]);
    assert_eq!(missing_file.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing_file.stderr).contains("error"));
}

#[test]
fn distributed_writes_trace_and_overhead() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    let o = coreset(&[
        "distributed",
        path(&iris()),
        "--scheme",
        "specialized",
        "--nodes",
        "3",
        "--N",
        "30",
        "--K",
        "4",
        "--algo",
        "drcc",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let overhead = json(&out.join("overhead.json"));
    assert_eq!(overhead["overhead_scalars"], 4 * 3 + 3 * 3);
    let trace = json(&out.join("trace.json"));
    assert_eq!(trace["nodes"], 3);
    assert!(
        (json(&out.join("coreset.json"))["total_weight"]
            .as_f64()
            .unwrap()
            - 150.0)
            .abs()
            < 1e-9
    );
    assert!(rows(&out.join("coreset.csv")) <= 30);
}

#[test]
fn cdcc_hybrid_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h");
    let o = coreset(&[
        "distributed",
        path(&iris()),
        "--scheme",
        "hybrid",
        "--nodes",
        "6",
        "--n0",
        "2",
        "--N",
        "60",
        "--K",
        "2",
        "--algo",
        "cdcc",
        "--seed",
        "3",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let overhead = json(&out.join("overhead.json"));
    let nodes = overhead["nodes"].as_u64().unwrap();
    assert_eq!(
        overhead["overhead_scalars"].as_u64().unwrap(),
        2 * nodes + 3 * nodes
    );
}

#[test]
fn evaluate_three_problems() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.csv");
    assert!(coreset(&[
        "construct",
        path(&iris()),
        "--algo",
        "rcc-fixed",
        "--size",
        "30",
        "--out",
        path(&c)
    ])
    .status
    .success());
    for args in [
        vec!["--problem", "meb"],
        vec!["--problem", "kmeans", "--k", "3"],
        vec!["--problem", "svm", "--positive-label", "setosa"],
    ] {
        let out = dir.path().join("e.json");
        let data = iris();
        let mut full = vec![
            "evaluate",
            path(&data),
            path(&c),
            "--runs",
            "2",
            "--out",
            path(&out),
        ];
        full.extend(args.iter());
        let o = coreset(&full);
        assert!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let report = json(&out);
        let runs = report["runs"].as_array().unwrap();
        assert_eq!(runs.len(), 2);
        assert!(runs.iter().all(|r| r["error"].is_null()));
        let value = runs[0]["value"].as_f64().unwrap();
        if args[1] == "svm" {
            assert!(value >= 0.9, "accuracy {value}");
        } else {
            assert!(value >= 1.0 - 1e-9, "normalized cost {value}");
        }
    }
    let unknown = coreset(&[
        "evaluate",
        path(&iris()),
        path(&c),
        "--problem",
        "svm",
        "--positive-label",
        "rose",
    ]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn benchmark_writes_outputs_and_rejects_empty_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bench.json");
    std::fs::write(
        &cfg,
        serde_json::json!({
            "seed": 1,
            "runs": 3,
            "datasets": [{"name": "cube", "source": "uniform", "n": 400, "dim": 3, "low": 1.0, "high": 50.0}],
            "problems": [{"problem": "meb"}, {"problem": "kmeans", "k": 2}],
            "algorithms": ["rcc-kmeans", "uniform", "farthest"],
            "sizes": [8],
            "distributed": [{"algorithm": "drcc", "scheme": "uniform", "nodes": 3, "budgets": [20], "K": 3}]
        })
        .to_string(),
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = coreset(&["benchmark", path(&cfg), "--out-dir", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["runs.csv", "summary.json", "cdf.csv", "timings.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert_eq!(rows(&out.join("runs.csv")), 2 * 4 * 3);

    let empty = dir.path().join("empty.json");
    std::fs::write(
        &empty,
        r#"{"runs": 1, "datasets": [], "problems": [], "algorithms": [], "sizes": []}"#,
    )
    .unwrap();
    assert_eq!(
        coreset(&["benchmark", path(&empty), "--out-dir", path(&out)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_documents_every_subcommand() {
    let o = coreset(&["--help"]);
    let text = String::from_utf8_lossy(&o.stdout);
    for cmd in ["construct", "distributed", "evaluate", "benchmark"] {
        assert!(text.contains(cmd));
    }
    let o = coreset(&["distributed", "--help"]);
    let text = String::from_utf8_lossy(&o.stdout);
    for flag in [
        "--scheme", "--nodes", "--n0", "--N", "--K", "--z", "--algo", "--seed", "--out",
    ] {
        assert!(text.contains(flag), "{flag}");
    }
}
