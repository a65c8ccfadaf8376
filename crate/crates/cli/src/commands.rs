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

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use sabre_core::bench::{gen_circuit, records_csv, run_benchmark, BenchOptions, SuiteSpec};
use sabre_core::check::{check_routed, CheckOptions};
use sabre_core::circuit::{
    dag_to_json, dag_to_qasm2, parse_circuit_json, parse_qasm2_subset, CircuitDag, CircuitJson,
};
use sabre_core::layout::{run_trials, TrialConfig, TrialRecord};
use sabre_core::router::{routed_to_dag, routed_to_json, BlockAlignment, HeuristicConfig};
use sabre_core::topology::{parse_graph_spec, CouplingGraph, RoutingTarget};
use sabre_core::SabreError;
use serde::Serialize;

use crate::{exit, Alignment, BenchArgs, CheckArgs, GenArgs, RouteArgs};

struct Failure {
    code: u8,
    message: String,
}

type Outcome<T = ()> = Result<T, Failure>;

impl From<SabreError> for Failure {
    fn from(e: SabreError) -> Self {
        let code = match e {
            SabreError::Parse { .. }
            | SabreError::InvalidCircuit(_)
            | SabreError::InvalidGraph(_)
            | SabreError::InvalidConfig(_)
            | SabreError::InvalidLayout(_) => exit::USAGE,
            SabreError::Infeasible(_) | SabreError::Unreachable(..) => exit::INFEASIBLE,
            _ => exit::INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: exit::USAGE,
        message: message.into(),
    }
}

fn finish(outcome: Outcome) -> u8 {
    match outcome {
        Ok(()) => exit::OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or(path: Option<&Path>, text: &str, stdout: bool) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: exit::INTERNAL,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None if stdout => {
            print!("{text}");
            std::io::stdout().flush().ok();
            Ok(())
        }
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

/// QASM by extension, JSON by extension, otherwise JSON if the text starts with `{`.
fn load_circuit(path: &Path) -> Outcome<CircuitDag> {
    let text = read(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let json = match ext {
        "qasm" => false,
        "json" => true,
        _ => text.trim_start().starts_with('{'),
    };
    Ok(if json {
        parse_circuit_json(&text)?
    } else {
        parse_qasm2_subset(&text)?
    })
}

fn load_graph(spec: &str) -> Outcome<CouplingGraph> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        return Ok(CouplingGraph::parse_json(&read(path)?)?);
    }
    Ok(parse_graph_spec(spec)?)
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct RouteStats<'a> {
    swaps_added: usize,
    depth_2q: usize,
    runtime_ms: Option<f64>,
    seed: u64,
    initial_layout: Vec<u32>,
    final_layout: Vec<u32>,
    release_valve_fires: usize,
    selected_layout_trial: &'a [usize],
    selected_swap_trial: usize,
    trials: Vec<&'a TrialRecord>,
}

#[derive(Serialize)]
struct ReproBundle<'a> {
    error: &'a str,
    graph: &'a str,
    seed: u64,
    heuristic: String,
    trials: String,
    circuit: CircuitJson,
}

pub fn route(args: RouteArgs) -> u8 {
    finish(route_inner(&args))
}

fn route_inner(args: &RouteArgs) -> Outcome {
    let dag = load_circuit(&args.circuit)?;
    let graph = load_graph(&args.graph)?;
    let heuristic = HeuristicConfig::preset(args.heuristic.into())
        .with_lookahead_weight(args.k)
        .with_extended_set_size(args.extended_set_cap)
        .with_depth_weight(args.depth_weight)
        .with_alpha(args.alpha)
        .with_release_valve_threshold(args.release_valve_threshold)
        .with_block_alignment(match args.block_alignment {
            Alignment::Entry => BlockAlignment::EntryLayout,
            Alignment::FirstBranch => BlockAlignment::FirstBranch,
        });
    heuristic.validate()?;
    let seed_layouts = match &args.seed_layouts {
        Some(p) => serde_json::from_str::<Vec<Vec<u32>>>(&read(p)?)
            .map_err(|e| usage(format!("seed layouts: {e}")))?,
        None => Vec::new(),
    };
    let trials = TrialConfig {
        layout_trials: args.layout_trials,
        swap_trials: args.swap_trials,
        max_iterations: args.max_iterations,
        objective: args.objective.into(),
        seed: args.seed,
        seed_layouts,
        dense_layout_trial: !args.no_dense_layout,
        ..TrialConfig::default()
    };
    if args.qasm.is_some() && !dag.is_flat() {
        return Err(usage("--qasm needs a circuit without control flow"));
    }
    let target = RoutingTarget::new(graph);
    let start = Instant::now();
    let run = match run_trials(&dag, &target, &heuristic, &trials) {
        Ok(run) => run,
        Err(e) => {
            let failure = Failure::from(e);
            if failure.code == exit::INTERNAL {
                let bundle = ReproBundle {
                    error: &failure.message,
                    graph: &args.graph,
                    seed: args.seed,
                    heuristic: format!("{heuristic:?}"),
                    trials: format!("{trials:?}"),
                    circuit: dag_to_json(&dag),
                };
                let path = args
                    .repro_dir
                    .join(format!("sabre-route-repro-{}.json", args.seed));
                if fs::write(&path, pretty(&bundle)).is_ok() {
                    eprintln!("repro bundle written to {}", path.display());
                }
            }
            return Err(failure);
        }
    };
    let elapsed = start.elapsed();
    let result = &run.result;
    let routed = routed_to_json(&dag, result);
    if let Some(path) = &args.qasm {
        let qasm = dag_to_qasm2(&routed_to_dag(&dag, result)?)?;
        write_or(Some(path), &qasm, true)?;
    }
    write_or(args.output.as_deref(), &pretty(&routed), true)?;
    let stats = RouteStats {
        swaps_added: result.swaps_added,
        depth_2q: result.depth_2q,
        runtime_ms: (!args.no_timing).then_some(elapsed.as_secs_f64() * 1e3),
        seed: args.seed,
        initial_layout: result.initial_layout.v2p_indices()[..dag.num_qubits()].to_vec(),
        final_layout: result.final_layout.v2p_indices()[..dag.num_qubits()].to_vec(),
        release_valve_fires: result.release_valve_fires,
        selected_layout_trial: &run.selected_layout_trial,
        selected_swap_trial: run.selected_swap_trial,
        trials: run.records().collect(),
    };
    write_or(args.stats.as_deref(), &pretty(&stats), false)
}

pub fn check(args: CheckArgs) -> u8 {
    match check_inner(&args) {
        Ok(()) => exit::OK,
        Err(f) => {
            eprintln!("{}", f.message);
            f.code
        }
    }
}

fn check_inner(args: &CheckArgs) -> Outcome {
    let original = dag_to_json(&load_circuit(&args.original)?);
    let routed: CircuitJson = serde_json::from_str(&read(&args.routed)?)
        .map_err(|e| usage(format!("routed circuit: {e}")))?;
    let graph = load_graph(&args.graph)?;
    let options = CheckOptions {
        allow_common_branch_layout: args.allow_common_branch_layout,
    };
    match check_routed(&original, &routed, &graph, options) {
        Ok(summary) => {
            println!(
                "ok: {} ops matched, {} swaps",
                summary.ops_matched, summary.swaps
            );
            Ok(())
        }
        Err(v) => Err(Failure {
            code: exit::CHECK_FAILED,
            message: v.to_string(),
        }),
    }
}

pub fn bench(args: BenchArgs) -> u8 {
    finish(bench_inner(&args))
}

#[derive(Serialize)]
struct AggregateFile<'a> {
    aggregates: &'a [sabre_core::bench::Aggregate],
    trends: &'a [sabre_core::bench::TrendResult],
}

fn bench_inner(args: &BenchArgs) -> Outcome {
    let spec = SuiteSpec::parse(&read(&args.suite)?)?;
    let options = BenchOptions {
        timing: !args.no_timing,
        ..BenchOptions::default()
    };
    let report = match run_benchmark(&spec, options) {
        Ok(r) => r,
        Err(failure) => {
            let _ = fs::write(&args.failure, pretty(&*failure));
            return Err(Failure {
                code: exit::INTERNAL,
                message: format!("{failure} (case written to {})", args.failure.display()),
            });
        }
    };
    write_or(args.records.as_deref(), &records_csv(&report.records), true)?;
    let aggregates = AggregateFile {
        aggregates: &report.aggregates,
        trends: &report.trends,
    };
    write_or(args.aggregates.as_deref(), &pretty(&aggregates), false)
}

pub fn gen(args: GenArgs) -> u8 {
    finish(gen_inner(&args))
}

fn gen_inner(args: &GenArgs) -> Outcome {
    let text = if let Some(spec) = &args.graph {
        pretty(&parse_graph_spec(spec)?.to_json())
    } else {
        let spec = args
            .circuit
            .as_deref()
            .expect("clap requires one of the two");
        let dag = gen_circuit(spec, args.seed)?;
        if args.json {
            pretty(&dag_to_json(&dag))
        } else {
            dag_to_qasm2(&dag)?
        }
    };
    write_or(args.output.as_deref(), &text, true)
}
