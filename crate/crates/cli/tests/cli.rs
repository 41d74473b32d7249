use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qsal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsal"))
        .args(args)
        .env_remove("QWNN_QUBIT_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sal_learns_xor_on_single_neuron() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("run.json");
    let o = qsal(&[
        "sal",
        "--arch",
        "single2",
        "--dataset",
        "xor",
        "--theta",
        "4",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("selectors 0110"));
    let v = read_json(&json);
    assert_eq!(v["outcome"]["status"], "found");
    assert_eq!(v["outcome"]["selectors"], "0110");
    assert_eq!(v["outcome"]["verified_performance"], 4);
    assert_eq!(v["config"]["l_order"], "01");
    assert_eq!(v["counters"]["pattern_presentations"], 16);
}

#[test]
fn theta_above_dataset_size_is_a_usage_error() {
    let o = qsal(&["sal", "--arch", "single2", "--dataset", "xor", "--theta", "5"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn contradictory_dataset_reports_no_solution() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clash.txt");
    std::fs::write(&path, "00 0\n00 1\n01 1\n10 1\n11 0\n").unwrap();
    let o = qsal(&[
        "sal",
        "--arch",
        "single2",
        "--dataset",
        path.to_str().unwrap(),
        "--theta",
        "5",
    ]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("status no_solution"));
}

#[test]
fn arch_select_picks_the_solvable_network() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("sel.json");
    let o = qsal(&[
        "arch-select",
        "--archs",
        "n0",
        "n1",
        "--dataset",
        "table1",
        "--theta",
        "16",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = read_json(&json);
    assert_eq!(v["outcome"]["arch_name"], "n1");
    assert_eq!(v["outcome"]["arch_index"], 1);
    let found = v["outcome"]["selectors_grouped"].as_str().unwrap().to_string();
    let allowed = [
        "01010111 01 1101",
        "01010111 10 1110",
        "10101000 01 0111",
        "10101000 10 1011",
    ];
    assert!(allowed.contains(&found.as_str()), "{found}");
}

#[test]
fn arch_select_without_solvable_candidate() {
    let o = qsal(&["arch-select", "--archs", "n0", "--dataset", "table1", "--theta", "16"]);
    assert_eq!(code(&o), 3);
    let o = qsal(&["arch-select", "--archs", "n0", "--dataset", "table1", "--theta", "0"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn oracle_lists_every_hit() {
    let o = qsal(&["oracle", "--archs", "single2", "--dataset", "xor", "--theta", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("count 1"));

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("oracle.json");
    let o = qsal(&[
        "oracle",
        "--archs",
        "n1",
        "--dataset",
        "table1",
        "--theta",
        "16",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = read_json(&json);
    assert_eq!(v["count"], 4);
    assert_eq!(v["hits"].as_array().unwrap().len(), 4);
    assert_eq!(v["hits"][0]["selectors_grouped"], "01010111 01 1101");

    let o = qsal(&["oracle", "--archs", "n0", "--dataset", "table1", "--theta", "16"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("count 0"));
}

#[test]
fn eval_scores_fixed_selectors() {
    let o = qsal(&[
        "eval",
        "--arch",
        "pyramid4",
        "--selectors",
        "0110 0110 0110",
        "--dataset",
        "parity4",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("performance 16/16"));
    let o = qsal(&["eval", "--arch", "single2", "--selectors", "0110", "--dataset", "xor"]);
    assert!(stdout(&o).contains("performance 4/4"));
    let o = qsal(&["eval", "--arch", "single2", "--selectors", "0000", "--dataset", "xor"]);
    assert!(stdout(&o).contains("performance 2/4"));
    let o = qsal(&["eval", "--arch", "single2", "--selectors", "011", "--dataset", "xor"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn arch_and_dataset_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let arch = dir.path().join("tiny.arch");
    std::fs::write(&arch, "inputs 2\nneuron in:0 in:1\noutput 0\n").unwrap();
    let data = dir.path().join("and.txt");
    std::fs::write(&data, "# and\n00 0\n01 0\n10 0\n11 1\n").unwrap();
    let o = qsal(&[
        "sal",
        "--arch",
        arch.to_str().unwrap(),
        "--dataset",
        data.to_str().unwrap(),
        "--theta",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("selectors 0001"));
}

#[test]
fn qubit_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qsal"))
        .args(["sal", "--arch", "n1", "--dataset", "table1", "--theta", "16"])
        .env("QWNN_QUBIT_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_qsal"))
        .args(["sal", "--arch", "single2", "--dataset", "xor", "--theta", "4"])
        .env("QWNN_QUBIT_CAP", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&qsal(&["sal", "--arch", "single2"])), 1);
    assert_eq!(
        code(&qsal(&[
            "sal",
            "--arch",
            "single2",
            "--dataset",
            "xor",
            "--theta",
            "4",
            "--l-order",
            "2"
        ])),
        1
    );
    assert_eq!(
        code(&qsal(&["sal", "--arch", "nosuch", "--dataset", "xor", "--theta", "4"])),
        1
    );
    assert_eq!(code(&qsal(&["--help"])), 0);
    assert_eq!(code(&qsal(&["--version"])), 0);
}

#[test]
fn json_report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = Command::new(env!("CARGO_BIN_EXE_qsal"))
            .args([
                "arch-select",
                "--archs",
                "n0",
                "n1",
                "--dataset",
                "table1",
                "--theta",
                "16",
                "--seed",
                "7",
                "--l-order",
                "10",
                "--json",
                "report.json",
            ])
            .current_dir(dir.path())
            .env_remove("QWNN_QUBIT_CAP")
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        std::fs::rename(dir.path().join("report.json"), p).unwrap();
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
