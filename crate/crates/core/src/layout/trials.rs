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

use std::str::FromStr;

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use super::disjoint::{decompose_disjoint, ComponentAssignment};
use super::sabre::{dense_layout, sabre_layout};
use crate::circuit::CircuitDag;
use crate::error::{Result, SabreError};
use crate::parallel::{map_indexed, Parallelism};
use crate::router::{derive_seed, route, HeuristicConfig, Layout, RoutingProblem, RoutingResult};
use crate::topology::{connected_components, RoutingTarget};

/// What the trials minimise.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Swaps,
    Depth,
}

impl FromStr for Objective {
    type Err = SabreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swaps" => Ok(Objective::Swaps),
            "depth" => Ok(Objective::Depth),
            other => Err(SabreError::InvalidConfig(format!(
                "unknown objective '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub layout_trials: usize,
    pub swap_trials: usize,
    /// Forward-and-backward rounds per layout trial.
    pub max_iterations: usize,
    pub objective: Objective,
    pub seed: u64,
    /// Extra starting layouts; `layouts[i][v]` is the physical qubit of virtual `v`.
    pub seed_layouts: Vec<Vec<u32>>,
    /// Add one trial starting from [`dense_layout`].
    pub dense_layout_trial: bool,
    pub parallelism: Parallelism,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            layout_trials: 20,
            swap_trials: 20,
            max_iterations: 4,
            objective: Objective::Swaps,
            seed: 0,
            seed_layouts: Vec::new(),
            dense_layout_trial: true,
            parallelism: Parallelism::FromEnv,
        }
    }
}

impl TrialConfig {
    /// Single-trial behaviour of the original algorithm: five random layouts refined over
    /// three rounds, one routing, no extra starting layouts.
    pub fn sabre_compatible() -> Self {
        TrialConfig {
            layout_trials: 5,
            swap_trials: 1,
            max_iterations: 3,
            dense_layout_trial: false,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.swap_trials == 0 {
            return Err(SabreError::InvalidConfig(
                "swap_trials must be at least 1".into(),
            ));
        }
        if self.layout_trials == 0 && !self.dense_layout_trial && self.seed_layouts.is_empty() {
            return Err(SabreError::InvalidConfig(
                "at least one layout trial or seed layout is required".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStage {
    Layout,
    Swap,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    Random,
    Dense,
    Seeded,
    /// Swap trials start from the selected layout.
    Selected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub stage: TrialStage,
    pub index: usize,
    pub seed: u64,
    pub start: StartKind,
    /// Device component the trial ran on, for devices with several components.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    pub swaps: usize,
    pub depth_2q: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRun {
    pub result: RoutingResult,
    /// Layout trials in index order, per device component.
    pub layout_trials: Vec<TrialRecord>,
    pub swap_trials: Vec<TrialRecord>,
    pub selected_layout_trial: Vec<usize>,
    pub selected_swap_trial: usize,
}

impl TrialRun {
    pub fn records(&self) -> impl Iterator<Item = &TrialRecord> {
        self.layout_trials.iter().chain(&self.swap_trials)
    }
}

fn key(objective: Objective, swaps: usize, depth: usize) -> (usize, usize) {
    match objective {
        Objective::Swaps => (swaps, depth),
        Objective::Depth => (depth, swaps),
    }
}

struct LayoutStage {
    layout: Layout,
    records: Vec<TrialRecord>,
    selected: usize,
}

/// Layout search on one connected problem; `starts` are the non-random starting layouts.
fn layout_stage(
    problem: RoutingProblem<'_>,
    cfg: &TrialConfig,
    base_seed: u64,
    starts: &[(StartKind, Layout)],
    component: Option<usize>,
) -> Result<LayoutStage> {
    let n = problem.target.num_qubits();
    let reversed = problem.dag.reversed();
    let total = cfg.layout_trials + starts.len();
    let outcomes = map_indexed(
        total,
        cfg.parallelism,
        |i| -> Result<(Layout, TrialRecord)> {
            let seed = base_seed.wrapping_add(i as u64);
            let mut rng = Pcg64Mcg::seed_from_u64(seed);
            let (kind, start) = if i < cfg.layout_trials {
                (StartKind::Random, Layout::random(n, &mut rng))
            } else {
                starts[i - cfg.layout_trials].clone()
            };
            let layout = sabre_layout(problem, &reversed, start, cfg.max_iterations, &mut rng)?;
            let scored = route(problem, layout.clone(), rand::Rng::random(&mut rng))?;
            let record = TrialRecord {
                stage: TrialStage::Layout,
                index: i,
                seed,
                start: kind,
                component,
                swaps: scored.swaps_added,
                depth_2q: scored.depth_2q,
            };
            Ok((layout, record))
        },
    );
    let mut best: Option<(usize, Layout)> = None;
    let mut records = Vec::with_capacity(total);
    for outcome in outcomes {
        let (layout, record) = outcome?;
        let better = match &best {
            None => true,
            Some((b, _)) => {
                let current: &TrialRecord = &records[*b];
                // Layouts are always ranked by swap count; the objective applies to the
                // swap trials only.
                (record.swaps, record.depth_2q) < (current.swaps, current.depth_2q)
            }
        };
        if better {
            best = Some((records.len(), layout));
        }
        records.push(record);
    }
    let (selected, layout) = best.expect("at least one layout trial");
    Ok(LayoutStage {
        layout,
        records,
        selected,
    })
}

fn check_seed_layout(seed: &[u32], num_virtual: usize, num_physical: usize) -> Result<()> {
    if seed.len() != num_virtual {
        return Err(SabreError::InvalidLayout(format!(
            "seed layout places {} qubits but the circuit has {num_virtual}",
            seed.len()
        )));
    }
    Layout::from_partial(num_physical, seed).map(|_| ())
}

/// Search layouts and routings for `dag` and return the best routing with every trial's
/// outcome.
pub fn run_trials(
    dag: &CircuitDag,
    target: &RoutingTarget,
    heuristic: &HeuristicConfig,
    cfg: &TrialConfig,
) -> Result<TrialRun> {
    cfg.validate()?;
    heuristic.validate()?;
    let n = target.num_qubits();
    if dag.num_qubits() > n {
        return Err(SabreError::Infeasible(format!(
            "circuit has {} qubits but the device has {n}",
            dag.num_qubits()
        )));
    }
    for seed in &cfg.seed_layouts {
        check_seed_layout(seed, dag.num_qubits(), n)?;
    }
    let problem = RoutingProblem {
        dag,
        target,
        heuristic,
    };
    let layout_trials_total =
        cfg.layout_trials + usize::from(cfg.dense_layout_trial) + cfg.seed_layouts.len();

    let (layout, layout_records, selected_layout) =
        if connected_components(&target.graph).len() <= 1 {
            let mut starts = Vec::new();
            if cfg.dense_layout_trial {
                starts.push((StartKind::Dense, dense_layout(dag, &target.graph)?));
            }
            for seed in &cfg.seed_layouts {
                starts.push((StartKind::Seeded, Layout::from_partial(n, seed)?));
            }
            let stage = layout_stage(problem, cfg, cfg.seed, &starts, None)?;
            (stage.layout, stage.records, vec![stage.selected])
        } else {
            let parts = decompose_disjoint(dag, &target.graph)?;
            let mut partial = vec![0u32; dag.num_qubits()];
            let mut records = Vec::new();
            let mut selected = Vec::new();
            for (c, part) in parts.iter().enumerate() {
                let stage = component_stage(dag, target, heuristic, cfg, part, c)?;
                for (local, v) in part.virtuals.iter().enumerate() {
                    let p = stage
                        .layout
                        .phys(crate::circuit::VirtualQubit(local as u32));
                    partial[v.index()] = part.physical[p.index()].0;
                }
                records.extend(stage.records);
                selected.push(stage.selected);
            }
            (Layout::from_partial(n, &partial)?, records, selected)
        };

    let swap_base = cfg.seed.wrapping_add(layout_trials_total as u64);
    let outcomes = map_indexed(cfg.swap_trials, cfg.parallelism, |j| {
        route(problem, layout.clone(), swap_base.wrapping_add(j as u64))
    });
    let mut best: Option<RoutingResult> = None;
    let mut selected_swap = 0;
    let mut swap_records = Vec::with_capacity(cfg.swap_trials);
    for (j, outcome) in outcomes.into_iter().enumerate() {
        let result = outcome?;
        swap_records.push(TrialRecord {
            stage: TrialStage::Swap,
            index: j,
            seed: result.seed,
            start: StartKind::Selected,
            component: None,
            swaps: result.swaps_added,
            depth_2q: result.depth_2q,
        });
        let better = best.as_ref().is_none_or(|b| {
            key(cfg.objective, result.swaps_added, result.depth_2q)
                < key(cfg.objective, b.swaps_added, b.depth_2q)
        });
        if better {
            selected_swap = j;
            best = Some(result);
        }
    }
    Ok(TrialRun {
        result: best.expect("at least one swap trial"),
        layout_trials: layout_records,
        swap_trials: swap_records,
        selected_layout_trial: selected_layout,
        selected_swap_trial: selected_swap,
    })
}

fn component_stage(
    dag: &CircuitDag,
    target: &RoutingTarget,
    heuristic: &HeuristicConfig,
    cfg: &TrialConfig,
    part: &ComponentAssignment,
    index: usize,
) -> Result<LayoutStage> {
    let sub_dag = part.sub_circuit(dag);
    let sub_target = RoutingTarget::new(target.graph.subgraph(&part.physical));
    let m = part.physical.len();
    let mut starts = Vec::new();
    if cfg.dense_layout_trial {
        starts.push((StartKind::Dense, dense_layout(&sub_dag, &sub_target.graph)?));
    }
    let mut local_of = vec![u32::MAX; target.num_qubits()];
    for (i, p) in part.physical.iter().enumerate() {
        local_of[p.index()] = i as u32;
    }
    for seed in &cfg.seed_layouts {
        let local: Option<Vec<u32>> = part
            .virtuals
            .iter()
            .map(|v| {
                let l = local_of[seed[v.index()] as usize];
                (l != u32::MAX).then_some(l)
            })
            .collect();
        // Seeds that place this component elsewhere are skipped for it.
        if let Some(local) = local {
            starts.push((StartKind::Seeded, Layout::from_partial(m, &local)?));
        }
    }
    let base = if index == 0 {
        cfg.seed
    } else {
        derive_seed(cfg.seed, index as u64, 0)
    };
    let problem = RoutingProblem {
        dag: &sub_dag,
        target: &sub_target,
        heuristic,
    };
    layout_stage(problem, cfg, base, &starts, Some(index))
}
