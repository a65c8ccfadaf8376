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

//! `sabre-route`: route circuits onto coupling graphs, check routed output, run benchmark
//! suites and generate inputs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sabre_core::layout::Objective;
use sabre_core::router::HeuristicMode;

/// Exit codes are part of the command-line contract.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const INFEASIBLE: u8 = 2;
    pub const INTERNAL: u8 = 3;
    pub const CHECK_FAILED: u8 = 4;
}

#[derive(Parser, Debug)]
#[command(
    name = "sabre-route",
    version,
    about = "Heuristic qubit layout and swap routing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pick a layout and insert swaps so every two-qubit gate runs on a coupled pair.
    Route(RouteArgs),
    /// Verify a routed circuit against its original.
    Check(CheckArgs),
    /// Run a benchmark suite.
    Bench(BenchArgs),
    /// Write a generated coupling graph or circuit.
    Gen(GenArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Heuristic {
    Basic,
    Lookahead,
    Decay,
    Depth,
    CriticalPath,
}

impl From<Heuristic> for HeuristicMode {
    fn from(h: Heuristic) -> Self {
        match h {
            Heuristic::Basic => HeuristicMode::Basic,
            Heuristic::Lookahead => HeuristicMode::Lookahead,
            Heuristic::Decay => HeuristicMode::Decay,
            Heuristic::Depth => HeuristicMode::Depth,
            Heuristic::CriticalPath => HeuristicMode::CriticalPath,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ObjectiveArg {
    Swaps,
    Depth,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Swaps => Objective::Swaps,
            ObjectiveArg::Depth => Objective::Depth,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Alignment {
    /// Every branch ends in the layout it started from.
    Entry,
    /// Every branch ends in the first branch's final layout.
    FirstBranch,
}

#[derive(Args, Debug)]
struct RouteArgs {
    /// Input circuit: OpenQASM 2 (`.qasm`) or circuit JSON (`.json`).
    #[arg(long)]
    circuit: PathBuf,
    /// Graph spec such as `heavy_hex:127`, `grid:5x5`, `line:4+line:4`, or a coupling JSON file.
    #[arg(long)]
    graph: String,
    #[arg(long, value_enum, default_value = "decay")]
    heuristic: Heuristic,
    /// Lookahead weight.
    #[arg(long, default_value_t = 0.5)]
    k: f64,
    /// Maximum number of gates in the extended set.
    #[arg(long, default_value_t = 20)]
    extended_set_cap: usize,
    #[arg(long, default_value_t = 1.0)]
    depth_weight: f64,
    /// Critical-path discount base, in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 20)]
    layout_trials: usize,
    #[arg(long, default_value_t = 20)]
    swap_trials: usize,
    /// Forward-backward refinement rounds per layout trial.
    #[arg(long, default_value_t = 4)]
    max_iterations: usize,
    #[arg(long, value_enum, default_value = "swaps")]
    objective: ObjectiveArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON file holding a list of starting layouts, each listing the physical qubit of
    /// every circuit qubit.
    #[arg(long)]
    seed_layouts: Option<PathBuf>,
    /// Skip the densest-subgraph starting layout.
    #[arg(long)]
    no_dense_layout: bool,
    /// Swaps without progress before forcing a gate; defaults to 10 × device size.
    #[arg(long)]
    release_valve_threshold: Option<usize>,
    #[arg(long, value_enum, default_value = "entry")]
    block_alignment: Alignment,
    /// Routed circuit JSON; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Routed circuit as OpenQASM 2, for circuits without control flow.
    #[arg(long)]
    qasm: Option<PathBuf>,
    /// Stats JSON; stderr when omitted.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Write `runtime_ms: null` so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Directory for the repro bundle written on internal errors.
    #[arg(long, default_value = ".")]
    repro_dir: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Original circuit (`.qasm` or `.json`).
    #[arg(long)]
    original: PathBuf,
    /// Routed circuit JSON as written by `route`.
    #[arg(long)]
    routed: PathBuf,
    #[arg(long)]
    graph: String,
    /// Accept branches that agree on a common final layout other than the entry layout.
    #[arg(long)]
    allow_common_branch_layout: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Suite spec JSON.
    #[arg(long)]
    suite: PathBuf,
    /// Per-run records CSV; stdout when omitted.
    #[arg(long)]
    records: Option<PathBuf>,
    /// Aggregates and trend results JSON; stderr when omitted.
    #[arg(long)]
    aggregates: Option<PathBuf>,
    /// Leave runtimes out so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Where a failing case is written for replay.
    #[arg(long, default_value = "bench-failure.json")]
    failure: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["graph", "circuit"])))]
struct GenArgs {
    /// Graph spec to write as coupling JSON.
    #[arg(long)]
    graph: Option<String>,
    /// Circuit generator: `qft:N`, `bv:N`, `qv:N[:DEPTH]` or `random:N:GATES`.
    #[arg(long)]
    circuit: Option<String>,
    /// Write circuits as JSON instead of OpenQASM 2.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Route(args) => commands::route(args),
        Command::Check(args) => commands::check(args),
        Command::Bench(args) => commands::bench(args),
        Command::Gen(args) => commands::gen(args),
    };
    ExitCode::from(code)
}
