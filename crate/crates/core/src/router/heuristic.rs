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

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitDag, OpKind};
use crate::error::{Result, SabreError};

/// How a score component is normalised by the size of the gate set it sums over.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetScaling {
    Constant,
    Size,
}

/// Sum of front-layer distances.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicHeuristic {
    pub weight: f64,
    pub scale: SetScaling,
}

/// Sum of extended-set distances, over at most `size` upcoming two-qubit gates.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LookaheadHeuristic {
    pub weight: f64,
    pub size: usize,
    pub scale: SetScaling,
}

/// Multiplicative penalty on recently swapped qubits.
///
/// Every selected swap raises its endpoints' registers by `increment`. All registers return to
/// 1 after `reset` selections and whenever a gate is routed.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayHeuristic {
    pub increment: f64,
    pub reset: usize,
}

/// Penalty for growth of the routed circuit's depth, in units of one swap (three CNOTs).
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthHeuristic {
    pub weight: f64,
    pub scale: SetScaling,
}

/// Bonus `weight * alpha^rank` for swaps that bring a front gate of the given critical-path
/// rank closer together.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPathHeuristic {
    pub alpha: f64,
    pub weight: f64,
}

/// Choice among swaps whose score is within `best_epsilon` of the minimum.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Uniformly random from the seeded trial RNG.
    RandomTieBreak,
    /// The first candidate in generation order.
    FirstMin,
}

/// Which layout each branch of a control-flow node must end in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockAlignment {
    /// Every branch restores the layout it started from.
    EntryLayout,
    /// Later branches end in the first branch's final layout, which the outer circuit adopts.
    FirstBranch,
}

/// Named presets. `Basic` scores the front layer only; every other preset adds the lookahead
/// term, and `Decay`, `Depth` and `CriticalPath` each add one more component on top.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeuristicMode {
    Basic,
    Lookahead,
    Decay,
    Depth,
    CriticalPath,
}

impl FromStr for HeuristicMode {
    type Err = SabreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(HeuristicMode::Basic),
            "lookahead" => Ok(HeuristicMode::Lookahead),
            "decay" => Ok(HeuristicMode::Decay),
            "depth" => Ok(HeuristicMode::Depth),
            "critical-path" | "critical_path" => Ok(HeuristicMode::CriticalPath),
            other => Err(SabreError::InvalidConfig(format!(
                "unknown heuristic '{other}'"
            ))),
        }
    }
}

impl fmt::Display for HeuristicMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicMode::Basic => "basic",
            HeuristicMode::Lookahead => "lookahead",
            HeuristicMode::Decay => "decay",
            HeuristicMode::Depth => "depth",
            HeuristicMode::CriticalPath => "critical-path",
        })
    }
}

pub const DEFAULT_LOOKAHEAD_WEIGHT: f64 = 0.5;
pub const DEFAULT_EXTENDED_SET_SIZE: usize = 20;
pub const DEFAULT_DECAY_INCREMENT: f64 = 0.001;
pub const DEFAULT_DECAY_RESET: usize = 5;
pub const DEFAULT_DEPTH_WEIGHT: f64 = 1.0;
pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_BEST_EPSILON: f64 = 1e-10;

/// The swap-scoring function: any combination of components, plus selection and
/// release-valve settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicConfig {
    pub basic: Option<BasicHeuristic>,
    pub lookahead: Option<LookaheadHeuristic>,
    pub decay: Option<DecayHeuristic>,
    pub depth: Option<DepthHeuristic>,
    pub critical_path: Option<CriticalPathHeuristic>,
    pub best_epsilon: f64,
    pub selection: Selection,
    /// Swaps without routing progress before the release valve fires; `None` means ten times
    /// the number of physical qubits.
    pub release_valve_threshold: Option<usize>,
    pub block_alignment: BlockAlignment,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self::preset(HeuristicMode::Decay)
    }
}

impl HeuristicConfig {
    /// A configuration with no components enabled.
    pub fn empty() -> Self {
        HeuristicConfig {
            basic: None,
            lookahead: None,
            decay: None,
            depth: None,
            critical_path: None,
            best_epsilon: DEFAULT_BEST_EPSILON,
            selection: Selection::RandomTieBreak,
            release_valve_threshold: None,
            block_alignment: BlockAlignment::EntryLayout,
        }
    }

    pub fn preset(mode: HeuristicMode) -> Self {
        let basic = Some(BasicHeuristic {
            weight: 1.0,
            scale: SetScaling::Size,
        });
        let lookahead = Some(LookaheadHeuristic {
            weight: DEFAULT_LOOKAHEAD_WEIGHT,
            size: DEFAULT_EXTENDED_SET_SIZE,
            scale: SetScaling::Size,
        });
        let mut cfg = HeuristicConfig {
            basic,
            ..Self::empty()
        };
        match mode {
            HeuristicMode::Basic => {}
            HeuristicMode::Lookahead => cfg.lookahead = lookahead,
            HeuristicMode::Decay => {
                cfg.lookahead = lookahead;
                cfg.decay = Some(DecayHeuristic {
                    increment: DEFAULT_DECAY_INCREMENT,
                    reset: DEFAULT_DECAY_RESET,
                });
            }
            HeuristicMode::Depth => {
                cfg.lookahead = lookahead;
                cfg.depth = Some(DepthHeuristic {
                    weight: DEFAULT_DEPTH_WEIGHT,
                    scale: SetScaling::Size,
                });
            }
            HeuristicMode::CriticalPath => {
                cfg.lookahead = lookahead;
                cfg.critical_path = Some(CriticalPathHeuristic {
                    alpha: DEFAULT_ALPHA,
                    weight: 1.0,
                });
            }
        }
        cfg
    }

    pub fn with_lookahead_weight(mut self, k: f64) -> Self {
        if let Some(l) = &mut self.lookahead {
            l.weight = k;
        }
        self
    }

    pub fn with_extended_set_size(mut self, size: usize) -> Self {
        if let Some(l) = &mut self.lookahead {
            l.size = size;
        }
        self
    }

    pub fn with_depth_weight(mut self, weight: f64) -> Self {
        if let Some(d) = &mut self.depth {
            d.weight = weight;
        }
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        if let Some(c) = &mut self.critical_path {
            c.alpha = alpha;
        }
        self
    }

    pub fn with_release_valve_threshold(mut self, threshold: Option<usize>) -> Self {
        self.release_valve_threshold = threshold;
        self
    }

    pub fn with_selection(mut self, selection: Selection) -> Self {
        self.selection = selection;
        self
    }

    pub fn with_block_alignment(mut self, alignment: BlockAlignment) -> Self {
        self.block_alignment = alignment;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(SabreError::InvalidConfig(what.to_string()));
        let finite_non_negative = |x: f64| x.is_finite() && x >= 0.0;
        if let Some(b) = &self.basic {
            if !finite_non_negative(b.weight) {
                return bad("basic weight must be finite and non-negative");
            }
        }
        if let Some(l) = &self.lookahead {
            if !finite_non_negative(l.weight) {
                return bad("lookahead weight k must be finite and non-negative");
            }
        }
        if let Some(d) = &self.decay {
            if !finite_non_negative(d.increment) {
                return bad("decay increment must be finite and non-negative");
            }
            if d.reset == 0 {
                return bad("decay reset interval must be at least 1");
            }
        }
        if let Some(d) = &self.depth {
            if !finite_non_negative(d.weight) {
                return bad("depth weight must be finite and non-negative");
            }
        }
        if let Some(c) = &self.critical_path {
            if !(c.alpha > 0.0 && c.alpha < 1.0) {
                return bad("alpha must lie strictly between 0 and 1");
            }
            if !finite_non_negative(c.weight) {
                return bad("critical-path weight must be finite and non-negative");
            }
        }
        if !finite_non_negative(self.best_epsilon) {
            return bad("best_epsilon must be finite and non-negative");
        }
        if self.basic.is_none()
            && self.lookahead.is_none()
            && self.depth.is_none()
            && self.critical_path.is_none()
        {
            return bad("at least one additive score component must be enabled");
        }
        Ok(())
    }
}

/// `alpha^rank`, the critical-path bonus for a gate of the given rank.
#[inline]
pub fn critical_component(alpha: f64, rank: u32) -> f64 {
    alpha.powi(rank as i32)
}

/// Critical-path rank of every two-qubit node (0 for other nodes).
///
/// A node's length is the largest number of two-qubit nodes on a dependency path starting at
/// it, itself included. Distinct lengths are dense-ranked from longest, so the gates heading
/// the longest remaining chains get rank 1.
pub fn critical_path_ranks(dag: &CircuitDag) -> Vec<u32> {
    let n = dag.num_nodes();
    let mut length = vec![0u32; n];
    for node in dag.nodes().iter().rev() {
        let own = u32::from(node.kind == OpKind::TwoQubit);
        let tail = dag
            .successors(node.id)
            .iter()
            .map(|s| length[s.index()])
            .max()
            .unwrap_or(0);
        length[node.id.index()] = own + tail;
    }
    let mut distinct: Vec<u32> = dag
        .nodes()
        .iter()
        .filter(|n| n.is_two_qubit())
        .map(|n| length[n.id.index()])
        .collect();
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.dedup();
    dag.nodes()
        .iter()
        .map(|node| {
            if node.is_two_qubit() {
                let pos = distinct
                    .binary_search_by(|x| length[node.id.index()].cmp(x))
                    .expect("length is present");
                pos as u32 + 1
            } else {
                0
            }
        })
        .collect()
}
