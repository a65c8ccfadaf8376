// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::path::Path;
use std::process::{Command, Output};

use sabre_core::circuit::CircuitJson;

fn sabre_route(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sabre-route"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn conforming_circuit_needs_no_swaps() {
    let dir = tempfile::tempdir().unwrap();
    let qasm = write(
        dir.path(),
        "tiny.qasm",
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n",
    );
    let stats = path(dir.path(), "stats.json");
    let out = sabre_route(&[
        "route",
        "--circuit",
        &qasm,
        "--graph",
        "line:2",
        "--stats",
        &stats,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(stats["swaps_added"], 0);
    assert!(stats["trials"].as_array().unwrap().len() > 20);
}

#[test]
fn route_then_check_and_mutations() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let qasm = path(d, "qft.qasm");
    assert_eq!(
        code(&sabre_route(&[
            "gen",
            "--circuit",
            "qft:8",
            "--output",
            &qasm
        ])),
        0
    );
    let routed = path(d, "routed.json");
    let qasm_out = path(d, "routed.qasm");
    let out = sabre_route(&[
        "route",
        "--circuit",
        &qasm,
        "--graph",
        "grid:3x3",
        "--seed",
        "7",
        "--layout-trials",
        "4",
        "--swap-trials",
        "4",
        "--output",
        &routed,
        "--qasm",
        &qasm_out,
        "--stats",
        &path(d, "stats.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&qasm_out)
        .unwrap()
        .contains("swap q["));
    let check = |routed: &str| {
        sabre_route(&[
            "check",
            "--original",
            &qasm,
            "--routed",
            routed,
            "--graph",
            "grid:3x3",
        ])
    };
    assert_eq!(code(&check(&routed)), 0);

    let json: CircuitJson =
        serde_json::from_str(&std::fs::read_to_string(&routed).unwrap()).unwrap();
    let first_swap = json
        .ops
        .iter()
        .position(|o| o.inserted)
        .expect("qft on a grid needs swaps");

    // Dropping a swap leaves later gates on the wrong qubits.
    let mut dropped = json.clone();
    dropped.ops.remove(first_swap);
    let file = write(d, "dropped.json", &serde_json::to_string(&dropped).unwrap());
    let out = check(&file);
    assert_eq!(code(&out), 4);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(
        msg.contains("mapping") || msg.contains("coupling") || msg.contains("order"),
        "{msg}"
    );

    // Two dependent gates in the wrong order.
    let gates: Vec<usize> = (0..json.ops.len())
        .filter(|&i| !json.ops[i].inserted)
        .collect();
    let (i, j) = gates
        .windows(2)
        .map(|w| (w[0], w[1]))
        .find(|&(i, j)| {
            json.ops[i]
                .qubits
                .iter()
                .any(|q| json.ops[j].qubits.contains(q))
                && j == i + 1
        })
        .expect("adjacent dependent gates");
    let mut swapped = json.clone();
    swapped.ops.swap(i, j);
    let file = write(d, "swapped.json", &serde_json::to_string(&swapped).unwrap());
    let out = check(&file);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("order"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let bad = write(
        d,
        "bad.qasm",
        "OPENQASM 2.0;\nqreg q[2];\nfoo q[0],q[1],q[0];\n",
    );
    assert_eq!(
        code(&sabre_route(&[
            "route",
            "--circuit",
            &bad,
            "--graph",
            "line:2"
        ])),
        1
    );
    assert_eq!(code(&sabre_route(&["route", "--bogus"])), 1);
    assert_eq!(code(&sabre_route(&["gen", "--circuit", "ghz:4"])), 1);
    let qasm = path(d, "qft.qasm");
    sabre_route(&["gen", "--circuit", "qft:5", "--output", &qasm]);
    assert_eq!(
        code(&sabre_route(&[
            "route",
            "--circuit",
            &qasm,
            "--graph",
            "line:4"
        ])),
        2
    );
    assert_eq!(
        code(&sabre_route(&[
            "route",
            "--circuit",
            &qasm,
            "--graph",
            "line:3+line:3"
        ])),
        2
    );
    assert_eq!(
        code(&sabre_route(&[
            "route",
            "--circuit",
            &qasm,
            "--graph",
            "line:5",
            "--alpha",
            "2",
            "--heuristic",
            "critical-path"
        ])),
        1
    );
}

#[test]
fn gen_outputs() {
    let out = sabre_route(&["gen", "--graph", "heavy_hex:27"]);
    let graph: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(graph["num_qubits"], 27);
    assert_eq!(graph["edges"].as_array().unwrap().len(), 28);
    let out = sabre_route(&["gen", "--circuit", "bv:11"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("cx ")).count(), 10);
    let a = sabre_route(&["gen", "--circuit", "qv:10:10", "--seed", "3"]);
    let b = sabre_route(&["gen", "--circuit", "qv:10:10", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_writes_records_and_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let suite = write(
        d,
        "suite.json",
        r#"{"circuits":[{"gen":"qft","n":6},{"gen":"bv","n":6}],"graphs":["grid:3x3"],
            "configs":[{"name":"default","layout_trials":3,"swap_trials":3},
                       {"name":"sabre","preset":"sabre_compatible"}],
            "runs":3,
            "trends":[{"kind":"swap_ratio","config":"default","baseline":"sabre","max":10.0}]}"#,
    );
    let records = path(d, "records.csv");
    let aggregates = path(d, "aggregates.json");
    let out = sabre_route(&[
        "bench",
        "--suite",
        &suite,
        "--records",
        &records,
        "--aggregates",
        &aggregates,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(records).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 3);
    let agg: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(aggregates).unwrap()).unwrap();
    assert_eq!(agg["aggregates"].as_array().unwrap().len(), 4);
    assert_eq!(agg["trends"][0]["pass"], true);
    // Means recompute from the records.
    let swaps: Vec<f64> = csv
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("qft_6,") && l.contains(",default,"))
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    let mean = swaps.iter().sum::<f64>() / swaps.len() as f64;
    let reported = agg["aggregates"][0]["swaps_added"]["mean"]
        .as_f64()
        .unwrap();
    assert!((mean - reported).abs() < 1e-9);
}
