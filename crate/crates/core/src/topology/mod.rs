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

//! Device connectivity: coupling graphs, all-pairs distances, shortest paths, dense seeds and
//! built-in device generators.

mod coupling;
mod dense;
mod distance;
mod generators;
mod paths;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use coupling::{CouplingGraph, CouplingJson};
pub use dense::densest_subgraph_seed;
pub use distance::{DistanceMatrix, EAGER_DISTANCE_LIMIT, UNREACHABLE};
pub use generators::{
    eagle_127, falcon_27, grid, heavy_hex, heavy_hex_code, heavy_hex_code_size, line,
    parse_graph_spec, ring,
};
pub use paths::{connected_components, shortest_path, shortest_path_weighted};

/// Device qubit index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhysicalQubit(pub u32);

impl PhysicalQubit {
    #[inline]
    pub fn new(index: u32) -> Self {
        PhysicalQubit(index)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PhysicalQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// A coupling graph bundled with its distance matrix, shared read-only by routing trials.
#[derive(Debug)]
pub struct RoutingTarget {
    pub graph: CouplingGraph,
    pub distance: DistanceMatrix,
}

impl RoutingTarget {
    pub fn new(graph: CouplingGraph) -> Self {
        let distance = DistanceMatrix::new(&graph);
        RoutingTarget { graph, distance }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.graph.num_qubits()
    }
}
