use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["rank2spec"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = rank2spec::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn groups_list_has_thirteen_rows() {
    let (code, out, _) = run(&["groups", "list"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 14);
    assert!(out.lines().nth(1).unwrap().starts_with("Z0"));
    let (_, json, _) = run(&["groups", "list", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);
    assert_eq!(run(&["groups", "verify"]).0, 0);
}

#[test]
fn squared_catalan_moment_table() {
    let (code, out, _) = run(&["moments", "--family", "G", "--group", "D4_2", "--rho", "1,0", "--upto", "8"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().last().unwrap(), "1, 0, 1, 0, 4, 0, 25, 0, 196");
    let (_, json, _) = run(&["moments", "--group", "D4_2", "--upto", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["moments"], serde_json::json!(["1", "0", "1", "0", "4"]));
}

#[test]
fn verify_subcommands() {
    let (code, out, _) = run(&["verify", "oeis", "--n", "12"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().last().unwrap(), "PASS");
    let (code, out, _) = run(&["verify", "mz", "--n", "12"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().last().unwrap(), "PASS");
    let (code, json, _) = run(&["verify", "measures", "--max-order", "4", "--id", "D4_2-rho1-G", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["entries"][0].get("seconds").is_none());
}

#[test]
fn characters_and_graphs() {
    let (code, out, _) = run(&["character", "show", "--group", "D4_1", "--weight", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(-1,0): 1\n(1,0): 1\n");
    let (_, out, _) = run(&["character", "fuse", "--group", "Z2_3", "--a", "1,0", "--b", "1,0"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    let (code, out, _) = run(&["graph", "build", "--group", "Z2_3", "--radius", "2", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    let (code, out, _) = run(&["graph", "moments", "--family", "H", "--group", "D6_1", "--rho", "rho2", "--m", "2", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("paths"));
}

#[test]
fn density_and_domain_output() {
    let (code, out, _) = run(&["density", "eval", "--id", "D4_1-rho1-H", "--at", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "0.159154943091895");
    let (code, csv, _) = run(&["density", "sample", "--id", "D6_1-rho2-H", "--n", "20", "--csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "y1,y2,weight");
    assert_eq!(lines.len(), 21);
    for l in &lines[1..] {
        let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 3);
        assert!(cols[2] >= 0.0);
    }
    let (code, csv, _) = run(&["domain", "sample", "--group", "D4_1", "--n", "10", "--csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.contains("boundary,"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = run(&["--seed", "5", "density", "sample", "--id", "D4_2-joint-H", "--n", "50"]).1;
    let b = run(&["--seed", "5", "density", "sample", "--id", "D4_2-joint-H", "--n", "50"]).1;
    let c = run(&["--seed", "6", "density", "sample", "--id", "D4_2-joint-H", "--n", "50"]).1;
    assert_eq!(a, b);
    assert_ne!(a, c);
    let j1 = run(&["jacobian", "check", "--group", "D6_1", "--samples", "50"]).1;
    let j2 = run(&["jacobian", "check", "--group", "D6_1", "--samples", "50"]).1;
    assert_eq!(j1, j2);
    assert_eq!(j1.lines().last().unwrap(), "PASS");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["groups", "bogus"]).0, 2);
    assert_eq!(run(&[]).0, 2);
    let (code, _, err) = run(&["moments", "--group", "Nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown subgroup"));
    assert_eq!(run(&["character", "show", "--group", "D4_1", "--weight", "1"]).0, 2);
    assert_eq!(run(&["density", "eval", "--id", "D4_1-rho1-H", "--at", "1,2"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_rank2spec");
    let ok = Command::new(bin).args(["verify", "oeis", "--n", "6"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).trim_end().ends_with("PASS"));
    let bad = Command::new(bin).args(["graph", "build"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let threads = Command::new(bin)
        .env(rank2spec::cli::THREADS_ENV, "2")
        .args(["verify", "measures", "--max-order", "2", "--id", "Z2_3-rho1-G"])
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(0));
}
