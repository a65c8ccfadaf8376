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

use rand::Rng;

use crate::circuit::CircuitDag;
use crate::error::Result;
use crate::router::{route, Layout, RoutingProblem};
use crate::topology::{densest_subgraph_seed, PhysicalQubit};

/// Improve `start` by `iterations` rounds of routing forward then backward, each pass
/// starting from the previous pass's final layout.
///
/// `reversed` must be `problem.dag.reversed()`; callers running many trials build it once.
pub fn sabre_layout<R: Rng + ?Sized>(
    problem: RoutingProblem<'_>,
    reversed: &CircuitDag,
    start: Layout,
    iterations: usize,
    rng: &mut R,
) -> Result<Layout> {
    let backward = RoutingProblem {
        dag: reversed,
        ..problem
    };
    let mut layout = start;
    for _ in 0..iterations {
        layout = route(problem, layout, rng.random())?.final_layout;
        layout = route(backward, layout, rng.random())?.final_layout;
    }
    Ok(layout)
}

/// Place the most interactive virtual qubits on the best-connected qubits of a dense region.
pub fn dense_layout(dag: &CircuitDag, graph: &crate::topology::CouplingGraph) -> Result<Layout> {
    let m = dag.num_qubits();
    let seed = densest_subgraph_seed(graph, m)?;
    let mut weight = vec![0usize; m];
    for node in dag.nodes() {
        if node.is_two_qubit() {
            for q in &node.qubits {
                weight[q.index()] += 1;
            }
        }
    }
    let mut virtuals: Vec<usize> = (0..m).collect();
    virtuals.sort_by_key(|&v| (std::cmp::Reverse(weight[v]), v));
    let mut member = vec![false; graph.num_qubits()];
    for q in &seed {
        member[q.index()] = true;
    }
    let in_set_degree = |q: PhysicalQubit| {
        graph
            .neighbors(q)
            .iter()
            .filter(|n| member[n.index()])
            .count()
    };
    let mut physical = seed.clone();
    physical.sort_by_key(|&q| (std::cmp::Reverse(in_set_degree(q)), q));
    let mut partial = vec![0u32; m];
    for (v, p) in virtuals.into_iter().zip(physical) {
        partial[v] = p.0;
    }
    Layout::from_partial(graph.num_qubits(), &partial)
}
