use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn infostore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infostore"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ok(args: &[&str]) -> String {
    let out = infostore(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

#[test]
fn pentagon_storability_line() {
    let out = ok(&["is", "catalog:polygon:5"]);
    assert_eq!(out.lines().next(), Some("2.23606798"));
    let doc: serde_json::Value = serde_json::from_str(out.split_once('\n').unwrap().1).unwrap();
    assert_eq!(doc["d"], 2);
    assert_eq!(doc["m"], 3);
    assert_eq!(doc["n_star"], 3);
}

#[test]
fn is_n_level() {
    let out = ok(&["is", "catalog:polygon:5", "--n", "2"]);
    assert_eq!(out.lines().next(), Some("2"));
}

#[test]
fn four_state_example() {
    let out = ok(&[
        "discriminate",
        "catalog:classical:4",
        &fixture("s4_example.json"),
    ]);
    assert_eq!(out.lines().next(), Some("2"));
    let out = ok(&[
        "degradable",
        "catalog:classical:4",
        &fixture("s4_example.json"),
    ]);
    assert_eq!(out.lines().next(), Some("nondegradable"));
}

#[test]
fn mixtures_are_accepted() {
    let out = ok(&[
        "degradable",
        "catalog:polygon:4",
        &fixture("square_mixtures.json"),
    ]);
    assert_eq!(out.lines().next(), Some("degradable"));
}

#[test]
fn emitted_documents_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let space_path: PathBuf = dir.path().join("space.json");
    let space = ok(&["catalog", "dsum:polygon:3,classical:2"]);
    std::fs::write(&space_path, &space).unwrap();
    let by_file = ok(&["is", space_path.to_str().unwrap()]);
    let by_name = ok(&["is", "catalog:dsum:polygon:3,classical:2"]);
    assert_eq!(by_file, by_name);

    let out = ok(&[
        "discriminate",
        "catalog:classical:4",
        &fixture("s4_example.json"),
    ]);
    let m_path = dir.path().join("m.json");
    std::fs::write(&m_path, out.split_once('\n').unwrap().1).unwrap();
    let verdict = ok(&[
        "degradable-measurement",
        "catalog:classical:4",
        m_path.to_str().unwrap(),
    ]);
    assert!(verdict.starts_with("nondegradable") || verdict.starts_with("degradable"));
}

#[test]
fn direct_sum_sweep_uses_five_states() {
    let out = ok(&[
        "sweep",
        "catalog:dsum:polygon:5,polygon:7",
        "--w-min",
        "-3",
        "--w-max",
        "0",
        "--steps",
        "300",
    ]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("w,optimal_n,E_w"));
    let ns: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(ns.len(), 300);
    assert!(ns.contains(&"5"));
}

#[test]
fn sweep_files() {
    let dir = tempfile::tempdir().unwrap();
    let (long, svg, out) = (
        dir.path().join("l.csv"),
        dir.path().join("c.svg"),
        dir.path().join("s.csv"),
    );
    let printed = ok(&[
        "sweep",
        "catalog:polygon:5",
        "--w-min",
        "-2",
        "--w-max",
        "0",
        "--steps",
        "5",
        "--long",
        long.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(printed.is_empty());
    let long = std::fs::read_to_string(long).unwrap();
    assert!(long.starts_with("w,n,E_w_n\n-2,2,2\n-2,3,"));
    assert_eq!(long.lines().count(), 1 + 5 * 2);
    assert!(std::fs::read_to_string(svg).unwrap().contains("<polyline"));
    assert_eq!(std::fs::read_to_string(out).unwrap().lines().count(), 6);
}

#[test]
fn output_is_reproducible() {
    let args = ["game", "catalog:ctensor:polygon:5,2", "--w", "-1.2"];
    assert_eq!(ok(&args), ok(&args));
    let args = [
        "properties",
        "catalog:polygon:6",
        "--cases",
        "50",
        "--seed",
        "9",
    ];
    assert_eq!(ok(&args), "cases 50\nviolations 0\n");
}

#[test]
fn game_reports_strategy() {
    let out = ok(&["game", "catalog:polygon:5", "--w", "-2"]);
    assert_eq!(out.lines().next(), Some("2 2"));
    let doc: serde_json::Value = serde_json::from_str(out.split_once('\n').unwrap().1).unwrap();
    assert_eq!(doc["strategy_class"], "PerfectDiscrimination");
}

#[test]
fn qubit_fixtures_pass() {
    for name in ["trine", "pentagon", "antipodal", "bases"] {
        assert!(ok(&["qubit-fixture", name]).starts_with("pass"), "{name}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(infostore(&["catalog", "polygon:2"]).status.code(), Some(1));
    assert_eq!(
        infostore(&["game", "catalog:polygon:5", "--w", "0.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        infostore(&["is", "/nonexistent/space.json"]).status.code(),
        Some(1)
    );
    assert_eq!(infostore(&["nonsense"]).status.code(), Some(1));
    assert_eq!(
        infostore(&["is", "catalog:polygon:5", "--bogus"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        infostore(&["--tolerance-cmp", "0", "is", "catalog:polygon:5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        infostore(&["is", "catalog:classical:9"]).status.code(),
        Some(2)
    );
    assert_eq!(
        infostore(&["--max-dim", "2", "is", "catalog:polygon:5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(infostore(&["--help"]).status.code(), Some(0));
}
