use std::path::PathBuf;
use std::process::{Command, Output};

use listcal::objective::{seq_objective, sequence_from_ids};
use listcal::repro::{generate_instances, GeneratorParams};
use listcal::{instance_to_json, parse_instance, OverlapMeasure};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn listcal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_listcal")).args(args).output().expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("one JSON record per line")).collect()
}

fn solve_machine(extra: &[&str]) -> Value {
    let file = data("orderings.json");
    let mut args = vec!["--machine", "solve", file.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = listcal(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    json_lines(&out).remove(0)
}

#[test]
fn exhaustive_finds_exact_match() {
    let r = solve_machine(&["-a", "exhaustive"]);
    assert_eq!(r["sequence"], serde_json::json!(["i1", "i3", "i4"]));
    assert!((r["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["seed"], 42);
}

#[test]
fn power_half_equals_hellinger() {
    let a = solve_machine(&["-a", "greedy", "-m", "hellinger"]);
    let b = solve_machine(&["-a", "greedy", "-m", "power:0.5"]);
    assert_eq!(a["sequence"], b["sequence"]);
    assert!((a["value"].as_f64().unwrap() - b["value"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn reported_values_revalidate() {
    let inst = parse_instance(&std::fs::read_to_string(data("orderings.json")).unwrap()).unwrap();
    for (alg, measure) in [
        ("greedy", "hellinger"),
        ("exhaustive", "power:0.25"),
        ("distributional", "concave:log1p"),
        ("with-repeats", "hellinger"),
    ] {
        let r = solve_machine(&["-a", alg, "-m", measure]);
        let ids: Vec<String> = serde_json::from_value(r["sequence"].clone()).unwrap();
        let seq = sequence_from_ids(&ids, &inst).unwrap();
        let g = OverlapMeasure::parse(measure).unwrap();
        let v = seq_objective(&g, &seq, &inst).unwrap();
        assert!((v - r["value"].as_f64().unwrap()).abs() <= 1e-12, "{alg}/{measure}");
        let gains: Vec<f64> = serde_json::from_value(r["gains"].clone()).unwrap();
        assert_eq!(gains.len(), ids.len());
    }
}

#[test]
fn machine_output_is_byte_identical() {
    let file = data("orderings.json");
    let args = ["--machine", "solve", file.to_str().unwrap(), "-a", "distributional", "--seed", "7"];
    assert_eq!(listcal(&args).stdout, listcal(&args).stdout);
    let args = ["--machine", "verify", "mdr", "--trials", "200"];
    assert_eq!(listcal(&args).stdout, listcal(&args).stdout);
}

#[test]
fn best_length_and_k_override() {
    let r = solve_machine(&["-a", "exhaustive", "--best-length"]);
    assert!(r["length"].as_u64().unwrap() >= 1);
    let r = solve_machine(&["-a", "greedy", "--k", "1"]);
    assert_eq!(r["length"], 1);
}

#[test]
fn mode_mismatch_exits_one() {
    let file = data("orderings.json");
    let out = listcal(&["solve", file.to_str().unwrap(), "-a", "discrete-greedy"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("mode mismatch"));
    assert_eq!(err.trim().lines().count(), 1);
}

#[test]
fn bad_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"genres": ["a"], "surprise": 1}"#).unwrap();
    assert_eq!(listcal(&["solve", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(listcal(&["solve", "/nonexistent.json"]).status.code(), Some(1));
    let file = data("orderings.json");
    assert_eq!(listcal(&["solve", file.to_str().unwrap(), "-m", "power:1.5"]).status.code(), Some(1));
    assert_eq!(listcal(&["solve", file.to_str().unwrap(), "-a", "nope"]).status.code(), Some(1));
    assert_eq!(listcal(&["repro", "appendix-z"]).status.code(), Some(1));
    assert_eq!(listcal(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn repro_statuses() {
    let out = listcal(&["--machine", "repro", "appendix-c"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[4]["pass"], true);

    // One published row and the first-pick claim do not reproduce.
    let out = listcal(&["--machine", "repro", "appendix-b"]);
    assert_eq!(out.status.code(), Some(2));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 8);
    let failing: Vec<f64> =
        lines[..7].iter().filter(|r| r["values_match"] == false).map(|r| r["w1"].as_f64().unwrap()).collect();
    assert_eq!(failing, vec![3.5]);
}

#[test]
fn verify_suites() {
    assert_eq!(listcal(&["verify", "mdr", "-m", "hellinger", "--trials", "300"]).status.code(), Some(0));
    assert_eq!(listcal(&["verify", "prop41", "--trials", "200"]).status.code(), Some(0));
    assert_eq!(listcal(&["verify", "ordered-submodular", "--trials", "200"]).status.code(), Some(0));
    let out = listcal(&["--machine", "verify", "ratios", "-a", "discrete-greedy", "-n", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_lines(&out)[0];
    assert!(r["report"]["min_ratio"].as_f64().unwrap() >= 2.0 / 3.0 - 1e-9);
}

#[test]
fn failing_axioms_write_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cx.json");
    let out = listcal(&["verify", "axioms", "-m", "kl-mmr-demo", "--trials", "100", "--counterexample-out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let cx: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cx["property"], "nonnegative");
}

#[test]
fn failing_mdr_writes_replayable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cx.json");
    let out = listcal(&["verify", "mdr", "-m", "fdiv:hellinger:1", "--trials", "200", "--counterexample-out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let inst = parse_instance(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let replay = listcal(&["--machine", "solve", path.to_str().unwrap(), "-a", "greedy"]);
    assert_eq!(replay.status.code(), Some(0));
    assert!(inst.k() >= 1);
}

#[test]
fn generated_instances_round_trip() {
    for mode in [GeneratorParams::discrete(5, 6), GeneratorParams::distributional(5, 12, 5)] {
        for inst in generate_instances(&mode, 3, 50).unwrap() {
            assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
        }
    }
}
