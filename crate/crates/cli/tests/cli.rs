//! End-to-end tests against the compiled binary: known gaps, the serial
//! reduction law, exit codes, and JSON determinism.

use std::io::Write;
use std::process::{Command, Output};

use sgl_cli::report::Report;

fn sgl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgl"))
        .args(args)
        .env_remove("SGL_MAX_N")
        .output()
        .expect("binary runs")
}

fn sgl_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgl"))
        .args(args)
        .env_remove("SGL_MAX_N")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn write_graph(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(text.as_bytes()).expect("write");
    f
}

fn parse_report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn metric_of(r: &Report, name: &str) -> f64 {
    r.checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
        .metric
}

const K4: &str = "1 2 1.0\n1 3 1.0\n1 4 1.0\n2 3 1.0\n2 4 1.0\n3 4 1.0\n";

#[test]
fn gap_of_complete_graph_walk() {
    let g = write_graph(K4);
    let out = sgl(&[
        "gap",
        "--graph",
        g.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report = parse_report(&out);
    let gap = metric_of(&report, "spectral-gap");
    assert!((gap - 4.0).abs() < 1e-12, "K4 walk gap {gap}");
}

#[test]
fn gap_of_complete_graph_cycle_chain() {
    let g = write_graph(K4);
    let out = sgl(&[
        "gap",
        "--graph",
        g.path().to_str().unwrap(),
        "--chain",
        "cycle",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let gap = metric_of(&parse_report(&out), "spectral-gap");
    assert!((gap - 6.0).abs() < 1e-12, "K4 cycle gap {gap}");
}

#[test]
fn gap_of_single_edge_interchange_is_twice_the_rate() {
    let g = write_graph("1 2 0.7\n");
    let out = sgl(&[
        "gap",
        "--graph",
        g.path().to_str().unwrap(),
        "--chain",
        "ip",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let gap = metric_of(&parse_report(&out), "spectral-gap");
    assert!((gap - 1.4).abs() < 1e-12, "single edge gap {gap}");
}

#[test]
fn spectrum_flag_adds_cluster_row() {
    let g = write_graph(K4);
    let out = sgl(&[
        "gap",
        "--graph",
        g.path().to_str().unwrap(),
        "--chain",
        "ep:2",
        "--spectrum",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report = parse_report(&out);
    // exclusion with 2 particles on K4: eigenvalues {0, 4 x3, 6 x2}
    assert_eq!(metric_of(&report, "spectrum"), 3.0);
    assert_eq!(metric_of(&report, "spectral-gap"), 4.0);
}

#[test]
fn reduce_series_combines_resistances() {
    // a path 1 - 2 - 3 with conductances a, b; removing the middle vertex
    // leaves the series conductance ab / (a + b)
    let g = write_graph("1 2 2.0\n2 3 3.0\n");
    let dir = tempfile::tempdir().expect("temp dir");
    let reduced_path = dir.path().join("reduced.txt");
    let out = sgl(&[
        "reduce",
        "--graph",
        g.path().to_str().unwrap(),
        "--at",
        "2",
        "--output",
        reduced_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&reduced_path).expect("reduced file written");
    let reduced = sgl_core::graph::parse_graph(&text).expect("reduced file parses");
    assert_eq!(reduced.n(), 2);
    assert!((reduced.weight(0, 1) - 1.2).abs() < 1e-15, "series law");
}

#[test]
fn reduce_reports_monotone_gap() {
    let g = write_graph("1 2 1.0\n1 3 1.0\n2 3 1.0\n");
    let out = sgl(&[
        "reduce",
        "--graph",
        g.path().to_str().unwrap(),
        "--at",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report = parse_report(&out);
    // K3 reduced at any vertex: the surviving edge gains 1/2, gap 2 * 1.5 = 3
    assert!((metric_of(&report, "reduced-graph") - 3.0).abs() < 1e-12);
    assert_eq!(metric_of(&report, "gap-monotonicity"), 0.0);
    assert_eq!(report.summary.failed, 0);
}

#[test]
fn missing_file_exits_two() {
    let out = sgl(&["gap", "--graph", "/no/such/file"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn unknown_chain_exits_two() {
    let g = write_graph(K4);
    let out = sgl(&[
        "gap",
        "--graph",
        g.path().to_str().unwrap(),
        "--chain",
        "teleport",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_of_range_vertex_exits_two() {
    let g = write_graph(K4);
    let out = sgl(&["reduce", "--graph", g.path().to_str().unwrap(), "--at", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_state_space_exits_two_without_override() {
    let out = sgl(&["gap", "--random", "7", "--chain", "ip"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limited to 6"));
}

#[test]
fn forced_claim_failure_exits_one() {
    let out = sgl(&[
        "verify",
        "structure",
        "--random",
        "5",
        "--seed",
        "11",
        "--match-rel",
        "1e-17",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = parse_report(&out);
    assert!(report.summary.failed > 0);
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let args = [
        "verify",
        "octopus",
        "--n",
        "5",
        "--trials",
        "2",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    let first = sgl(&args);
    let second = sgl(&args);
    assert!(first.status.success() && second.status.success());

    let mut a = parse_report(&first);
    let mut b = parse_report(&second);
    a.wall_time_ms = 0;
    b.wall_time_ms = 0;
    // identical inputs, identical bytes, up to the timer
    assert_eq!(a.to_json(), b.to_json());

    // a parsed report serializes back to what the binary printed
    let reprinted = {
        let mut c = parse_report(&first);
        c.wall_time_ms = a.wall_time_ms;
        c
    };
    assert_eq!(a.to_json(), reprinted.to_json());
    assert_eq!(a.summary.passed, a.checks.len());
}

#[test]
fn env_override_unlocks_larger_interchange() {
    // unit K7: walk gap is 7, and the interchange gap must match it; this
    // exercises the matrix-free solver on 5040 states
    let mut text = String::new();
    for u in 1..=7u32 {
        for v in u + 1..=7 {
            text.push_str(&format!("{u} {v} 1.0\n"));
        }
    }
    let g = write_graph(&text);
    let out = sgl_env(
        &[
            "gap",
            "--graph",
            g.path().to_str().unwrap(),
            "--chain",
            "ip",
            "--format",
            "json",
        ],
        "SGL_MAX_N",
        "7",
    );
    assert!(out.status.success());
    let gap = metric_of(&parse_report(&out), "spectral-gap");
    assert!((gap - 7.0).abs() < 1e-4, "K7 interchange gap {gap}");
}

#[test]
fn aldous_verification_passes_on_random_sweep() {
    let out = sgl(&[
        "verify",
        "aldous",
        "--random",
        "4",
        "--trials",
        "3",
        "--density",
        "0.8",
        "--seed",
        "21",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report = parse_report(&out);
    assert_eq!(report.summary.failed, 0);
    assert!(report.checks.iter().any(|c| c.name == "gap-equality[2]"));
}

#[test]
fn matrices_verification_covers_both_sizes() {
    for n in [4, 5] {
        let out = sgl(&["verify", "matrices", "--n", &n.to_string(), "--format", "json"]);
        assert!(out.status.success(), "n = {n}");
        let report = parse_report(&out);
        assert!(report.summary.passed >= 3, "n = {n}");
        assert_eq!(report.summary.failed, 0, "n = {n}");
    }
}
