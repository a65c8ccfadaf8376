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

//! Swap insertion: front layer, extended set, swap scoring and the routing loop.

mod extended;
mod front;
mod heuristic;
mod layout;
mod result;
mod state;

pub use extended::ExtendedSet;
pub use front::FrontLayer;
pub use heuristic::{
    critical_component, critical_path_ranks, BasicHeuristic, BlockAlignment, CriticalPathHeuristic,
    DecayHeuristic, DepthHeuristic, HeuristicConfig, HeuristicMode, LookaheadHeuristic, Selection,
    SetScaling, DEFAULT_ALPHA, DEFAULT_BEST_EPSILON, DEFAULT_DECAY_INCREMENT, DEFAULT_DECAY_RESET,
    DEFAULT_DEPTH_WEIGHT, DEFAULT_EXTENDED_SET_SIZE, DEFAULT_LOOKAHEAD_WEIGHT,
};
pub use layout::Layout;
pub use result::{
    routed_to_dag, routed_to_json, RoutedBlock, RoutedOp, RoutingResult, RoutingSummary,
};
pub use state::{route, RouterState, RoutingProblem, SWAP_DEPTH};

pub(crate) use state::derive_seed;
