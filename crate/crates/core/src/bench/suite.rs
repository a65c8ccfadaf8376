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

//! Benchmark suites: circuits × graphs × configurations × seeds.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::generators::{gen_bv, gen_qft, gen_qv, gen_random};
use crate::check::{check_routed, CheckOptions};
use crate::circuit::{dag_to_json, CircuitDag};
use crate::error::{Result, SabreError};
use crate::layout::{run_trials, Objective, TrialConfig};
use crate::parallel::{map_indexed, Parallelism};
use crate::router::{routed_to_json, HeuristicConfig, HeuristicMode};
use crate::topology::{parse_graph_spec, RoutingTarget};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    pub gen: String,
    pub n: usize,
    /// QV layers, defaults to `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Gate count for random circuits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gates: Option<usize>,
    /// Generator seed for QV and random circuits.
    #[serde(default)]
    pub seed: u64,
}

impl CircuitSpec {
    pub fn name(&self) -> String {
        match self.gen.as_str() {
            "qv" => format!("qv_{}x{}", self.n, self.depth.unwrap_or(self.n)),
            "random" => format!("random_{}x{}", self.n, self.gates.unwrap_or(0)),
            g => format!("{g}_{}", self.n),
        }
    }

    pub fn build(&self) -> Result<CircuitDag> {
        match self.gen.as_str() {
            "qft" => gen_qft(self.n),
            "bv" => gen_bv(self.n),
            "qv" => gen_qv(self.n, self.depth.unwrap_or(self.n), self.seed),
            "random" => gen_random(self.n, self.gates.unwrap_or(4 * self.n), self.seed),
            other => Err(SabreError::InvalidConfig(format!(
                "unknown generator '{other}'"
            ))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialPreset {
    #[default]
    Default,
    SabreCompatible,
}

/// One routing configuration. Unset fields keep the preset's values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub name: String,
    #[serde(default)]
    pub preset: TrialPreset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heuristic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout_trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap_trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<Objective>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dense_layout_trial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extended_set_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl ConfigSpec {
    pub fn heuristic(&self) -> Result<HeuristicConfig> {
        let mode: HeuristicMode = match &self.heuristic {
            Some(h) => h.parse()?,
            None => HeuristicMode::Decay,
        };
        let mut h = HeuristicConfig::preset(mode);
        if let Some(k) = self.k {
            h = h.with_lookahead_weight(k);
        }
        if let Some(size) = self.extended_set_cap {
            h = h.with_extended_set_size(size);
        }
        if let Some(w) = self.depth_weight {
            h = h.with_depth_weight(w);
        }
        if let Some(a) = self.alpha {
            h = h.with_alpha(a);
        }
        h.validate()?;
        Ok(h)
    }

    pub fn trials(&self, seed: u64) -> TrialConfig {
        let mut t = match self.preset {
            TrialPreset::Default => TrialConfig::default(),
            TrialPreset::SabreCompatible => TrialConfig::sabre_compatible(),
        };
        t.seed = seed;
        t.layout_trials = self.layout_trials.unwrap_or(t.layout_trials);
        t.swap_trials = self.swap_trials.unwrap_or(t.swap_trials);
        t.max_iterations = self.max_iterations.unwrap_or(t.max_iterations);
        t.objective = self.objective.unwrap_or(t.objective);
        t.dense_layout_trial = self.dense_layout_trial.unwrap_or(t.dense_layout_trial);
        t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrendSpec {
    /// mean swaps of `config` ≤ `max` × mean swaps of `baseline`, for every circuit and graph.
    SwapRatio {
        config: String,
        baseline: String,
        max: f64,
    },
    /// Same with two-qubit depth.
    DepthRatio {
        config: String,
        baseline: String,
        max: f64,
    },
    /// Log-log slope of mean runtime against circuit width is below `max`, per graph.
    RuntimeExponent { config: String, max: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub circuits: Vec<CircuitSpec>,
    pub graphs: Vec<String>,
    pub configs: Vec<ConfigSpec>,
    /// Explicit seeds; when empty, `runs` seeds counting up from `seed`.
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default = "one")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub trends: Vec<TrendSpec>,
}

fn one() -> usize {
    1
}

impl SuiteSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| SabreError::InvalidConfig(format!("suite spec: {e}")))
    }

    pub fn seed_list(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            (0..self.runs as u64)
                .map(|i| self.seed.wrapping_add(i))
                .collect()
        } else {
            self.seeds.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub circuit_name: String,
    pub num_qubits: usize,
    pub graph: String,
    pub config: String,
    pub seed: u64,
    pub swaps_added: usize,
    pub depth_2q: usize,
    /// Wall-clock milliseconds; `None` when timing is disabled.
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Stat {
        if values.is_empty() {
            return Stat {
                mean: 0.0,
                std: 0.0,
            };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Stat {
            mean,
            std: var.sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub circuit_name: String,
    pub num_qubits: usize,
    pub graph: String,
    pub config: String,
    pub runs: usize,
    pub swaps_added: Stat,
    /// `swaps_added` × 3, the CNOT count a swap decomposition would add.
    pub cnots_added: Stat,
    pub depth_2q: Stat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<Stat>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendResult {
    #[serde(flatten)]
    pub spec: TrendSpec,
    /// Worst observed ratio or fitted exponent; `None` when there was nothing to measure.
    pub value: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub aggregates: Vec<Aggregate>,
    pub trends: Vec<TrendResult>,
}

/// A failed cell, serialisable for replay.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchFailure {
    pub circuit: CircuitSpec,
    pub graph: String,
    pub config: ConfigSpec,
    pub seed: u64,
    pub error: String,
}

impl std::fmt::Display for BenchFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} on {} with config '{}' seed {}: {}",
            self.circuit.name(),
            self.graph,
            self.config.name,
            self.seed,
            self.error
        )
    }
}

impl std::error::Error for BenchFailure {}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BenchOptions {
    pub timing: bool,
    /// Parallelism across cells; trials inside a cell run sequentially.
    pub parallelism: Parallelism,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            timing: true,
            parallelism: Parallelism::FromEnv,
        }
    }
}

/// Run every cell of the suite, checking each routed output.
pub fn run_benchmark(
    spec: &SuiteSpec,
    options: BenchOptions,
) -> std::result::Result<BenchReport, Box<BenchFailure>> {
    let seeds = spec.seed_list();
    let cells: Vec<(usize, usize, usize, u64)> = (0..spec.circuits.len())
        .flat_map(|c| {
            let seeds = &seeds;
            (0..spec.graphs.len()).flat_map(move |g| {
                (0..spec.configs.len()).flat_map(move |k| seeds.iter().map(move |&s| (c, g, k, s)))
            })
        })
        .collect();
    let fail = |c: usize, g: usize, k: usize, seed: u64, error: String| {
        Box::new(BenchFailure {
            circuit: spec.circuits[c].clone(),
            graph: spec.graphs[g].clone(),
            config: spec.configs[k].clone(),
            seed,
            error,
        })
    };
    // Setup errors are reported against the first cell that would have used the input.
    let mut circuits = Vec::with_capacity(spec.circuits.len());
    for (c, cs) in spec.circuits.iter().enumerate() {
        circuits.push(cs.build().map_err(|e| fail(c, 0, 0, 0, e.to_string()))?);
    }
    let mut targets = Vec::with_capacity(spec.graphs.len());
    for (g, gs) in spec.graphs.iter().enumerate() {
        let graph = parse_graph_spec(gs).map_err(|e| fail(0, g, 0, 0, e.to_string()))?;
        targets.push(RoutingTarget::new(graph));
    }
    let mut heuristics = Vec::with_capacity(spec.configs.len());
    for (k, cfg) in spec.configs.iter().enumerate() {
        heuristics.push(
            cfg.heuristic()
                .map_err(|e| fail(0, 0, k, 0, e.to_string()))?,
        );
    }
    let originals: Vec<_> = circuits.iter().map(dag_to_json).collect();

    let outcomes = map_indexed(cells.len(), options.parallelism, |i| {
        let (c, g, k, seed) = cells[i];
        let mut trials = spec.configs[k].trials(seed);
        trials.parallelism = Parallelism::Sequential;
        let start = Instant::now();
        let run = run_trials(&circuits[c], &targets[g], &heuristics[k], &trials)
            .map_err(|e| fail(c, g, k, seed, e.to_string()))?;
        let elapsed = start.elapsed();
        let routed = routed_to_json(&circuits[c], &run.result);
        check_routed(
            &originals[c],
            &routed,
            &targets[g].graph,
            CheckOptions::default(),
        )
        .map_err(|v| {
            fail(
                c,
                g,
                k,
                seed,
                format!("routed output failed the check: {v}"),
            )
        })?;
        Ok::<_, Box<BenchFailure>>(BenchRecord {
            circuit_name: spec.circuits[c].name(),
            num_qubits: circuits[c].num_qubits(),
            graph: spec.graphs[g].clone(),
            config: spec.configs[k].name.clone(),
            seed,
            swaps_added: run.result.swaps_added,
            depth_2q: run.result.depth_2q,
            // Clamp so a recorded runtime is always positive.
            runtime_ms: options
                .timing
                .then(|| (elapsed.as_secs_f64() * 1e3).max(1e-6)),
        })
    });
    let records = outcomes
        .into_iter()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let aggregates = aggregate(&records);
    let trends = spec
        .trends
        .iter()
        .map(|t| evaluate_trend(t, &aggregates))
        .collect();
    Ok(BenchReport {
        records,
        aggregates,
        trends,
    })
}

/// Group records by (circuit, graph, config), keeping first-seen order.
pub fn aggregate(records: &[BenchRecord]) -> Vec<Aggregate> {
    let mut groups: indexmap::IndexMap<(&str, &str, &str), Vec<&BenchRecord>> =
        indexmap::IndexMap::new();
    for r in records {
        groups
            .entry((&r.circuit_name, &r.graph, &r.config))
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .map(|rs| {
            let swaps: Vec<f64> = rs.iter().map(|r| r.swaps_added as f64).collect();
            let cnots: Vec<f64> = swaps.iter().map(|s| 3.0 * s).collect();
            let depth: Vec<f64> = rs.iter().map(|r| r.depth_2q as f64).collect();
            let runtime: Option<Vec<f64>> = rs.iter().map(|r| r.runtime_ms).collect();
            Aggregate {
                circuit_name: rs[0].circuit_name.clone(),
                num_qubits: rs[0].num_qubits,
                graph: rs[0].graph.clone(),
                config: rs[0].config.clone(),
                runs: rs.len(),
                swaps_added: Stat::of(&swaps),
                cnots_added: Stat::of(&cnots),
                depth_2q: Stat::of(&depth),
                runtime_ms: runtime.map(|r| Stat::of(&r)),
            }
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn evaluate_trend(spec: &TrendSpec, aggregates: &[Aggregate]) -> TrendResult {
    let ratio = |config: &str, baseline: &str, metric: fn(&Aggregate) -> f64| {
        let mut worst: Option<f64> = None;
        for a in aggregates.iter().filter(|a| a.config == config) {
            let base = aggregates.iter().find(|b| {
                b.config == baseline && b.circuit_name == a.circuit_name && b.graph == a.graph
            });
            if let Some(b) = base {
                let r = if metric(b) == 0.0 {
                    if metric(a) == 0.0 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    metric(a) / metric(b)
                };
                worst = Some(worst.map_or(r, |w: f64| w.max(r)));
            }
        }
        worst
    };
    let (value, max) = match spec {
        TrendSpec::SwapRatio {
            config,
            baseline,
            max,
        } => (ratio(config, baseline, |a| a.swaps_added.mean), *max),
        TrendSpec::DepthRatio {
            config,
            baseline,
            max,
        } => (ratio(config, baseline, |a| a.depth_2q.mean), *max),
        TrendSpec::RuntimeExponent { config, max } => {
            let mut graphs: Vec<&str> = aggregates.iter().map(|a| a.graph.as_str()).collect();
            graphs.dedup();
            let mut worst: Option<f64> = None;
            for g in graphs {
                let points: Vec<(f64, f64)> = aggregates
                    .iter()
                    .filter(|a| a.config == *config && a.graph == g)
                    .filter_map(|a| a.runtime_ms.as_ref().map(|r| (a.num_qubits as f64, r.mean)))
                    .collect();
                if let Some(s) = log_log_slope(&points) {
                    worst = Some(worst.map_or(s, |w: f64| w.max(s)));
                }
            }
            (worst, *max)
        }
    };
    TrendResult {
        spec: spec.clone(),
        value,
        pass: value.is_some_and(|v| v <= max),
    }
}

/// Records as CSV, one line per run.
pub fn records_csv(records: &[BenchRecord]) -> String {
    let mut out =
        String::from("circuit,num_qubits,graph,config,seed,swaps_added,depth_2q,runtime_ms\n");
    for r in records {
        let runtime = r.runtime_ms.map(|t| format!("{t:.3}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.circuit_name,
            r.num_qubits,
            r.graph,
            r.config,
            r.seed,
            r.swaps_added,
            r.depth_2q,
            runtime
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn suite(runs: usize) -> SuiteSpec {
        SuiteSpec::parse(&format!(
            r#"{{"circuits":[{{"gen":"qft","n":5}}],"graphs":["line:5"],
                "configs":[{{"name":"quick","layout_trials":2,"swap_trials":2,"max_iterations":1}}],
                "runs":{runs}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn single_cell() {
        let report = run_benchmark(&suite(1), BenchOptions::default()).unwrap();
        assert_eq!(report.records.len(), 1);
        let a = &report.aggregates[0];
        assert_eq!(a.swaps_added.mean, report.records[0].swaps_added as f64);
        assert_eq!(a.swaps_added.std, 0.0);
        assert!(report.records[0].runtime_ms.unwrap() > 0.0);
    }

    #[test]
    fn reproducible_without_timing() {
        let options = BenchOptions {
            timing: false,
            parallelism: Parallelism::Threads(2),
        };
        let a = run_benchmark(&suite(4), options).unwrap();
        let b = run_benchmark(
            &suite(4),
            BenchOptions {
                parallelism: Parallelism::Sequential,
                ..options
            },
        )
        .unwrap();
        assert_eq!(records_csv(&a.records), records_csv(&b.records));
        assert_eq!(
            serde_json::to_string(&a.aggregates).unwrap(),
            serde_json::to_string(&b.aggregates).unwrap()
        );
    }

    #[test]
    fn stats_and_slope() {
        let s = Stat::of(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!((s.mean, s.std), (5.0, 2.0));
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(1.5)))
            .collect();
        assert!((log_log_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn failures_name_the_cell() {
        let mut spec = suite(1);
        spec.graphs = vec!["line:3".into()];
        let err = run_benchmark(&spec, BenchOptions::default()).unwrap_err();
        assert_eq!(err.graph, "line:3");
        assert!(serde_json::to_string(&*err).unwrap().contains("\"qft\""));
    }
}
