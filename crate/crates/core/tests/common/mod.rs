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

#![allow(dead_code)]

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::Rng;
use sabre_core::check::{check_routed, CheckOptions};
use sabre_core::circuit::{dag_to_json, BlockJson, CircuitDag, CircuitJson, OpJson};
use sabre_core::router::routed_to_json;
use sabre_core::router::RoutingResult;
use sabre_core::topology::{CouplingGraph, PhysicalQubit};

pub fn empty_circuit(num_qubits: usize, num_clbits: usize) -> CircuitJson {
    CircuitJson {
        num_qubits,
        num_clbits,
        ops: Vec::new(),
        initial_layout: None,
        final_layout: None,
    }
}

/// Up to `max - 1` random h and cx gates.
fn random_gates<R: Rng>(rng: &mut R, ops: &mut Vec<OpJson>, n: usize, max: usize) {
    let count = rng.random_range(0..max);
    for _ in 0..count {
        let a = rng.random_range(0..n as u32);
        if n < 2 || rng.random_bool(0.3) {
            ops.push(OpJson::gate("h", vec![a]));
        } else {
            let pair = sample(rng, n, 2);
            ops.push(OpJson::gate(
                "cx",
                vec![pair.index(0) as u32, pair.index(1) as u32],
            ));
        }
    }
}

fn random_if_else<R: Rng>(rng: &mut R, n: usize, clbit: u32, nesting: usize) -> OpJson {
    let mut blocks = Vec::new();
    for _ in 0..2 {
        let width = rng.random_range(1..=n);
        let mut qubit_map: Vec<u32> = sample(rng, n, width)
            .into_iter()
            .map(|q| q as u32)
            .collect();
        qubit_map.sort_unstable();
        let mut body = empty_circuit(width, 1);
        random_gates(rng, &mut body.ops, width, 8);
        if nesting > 0 && width >= 2 && rng.random_bool(0.5) {
            body.ops.push(random_if_else(rng, width, 0, nesting - 1));
            random_gates(rng, &mut body.ops, width, 3);
        }
        blocks.push(BlockJson {
            qubit_map,
            clbit_map: vec![clbit],
            circuit: body,
        });
    }
    OpJson {
        name: "if_else".into(),
        qubits: Vec::new(),
        clbits: vec![clbit],
        blocks,
        inserted: false,
    }
}

/// Random circuit with `count` if-else nodes, each conditioned on a fresh measurement and
/// nested up to `nesting` levels deep.
pub fn random_control_flow<R: Rng>(
    rng: &mut R,
    n: usize,
    count: usize,
    nesting: usize,
) -> CircuitJson {
    let mut c = empty_circuit(n, count);
    for i in 0..count {
        random_gates(rng, &mut c.ops, n, 10);
        let q = rng.random_range(0..n as u32);
        c.ops.push(OpJson {
            clbits: vec![i as u32],
            ..OpJson::gate("measure", vec![q])
        });
        c.ops.push(random_if_else(rng, n, i as u32, nesting));
    }
    random_gates(rng, &mut c.ops, n, 10);
    c
}

/// Run the independent checker on a routing result.
pub fn assert_valid(dag: &CircuitDag, graph: &CouplingGraph, result: &RoutingResult) {
    let routed = routed_to_json(dag, result);
    if let Err(v) = check_routed(&dag_to_json(dag), &routed, graph, CheckOptions::default()) {
        panic!("{v}");
    }
}

/// Unweighted single-source distances by breadth-first search.
pub fn bfs(graph: &CouplingGraph, source: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; graph.num_qubits()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for v in graph.neighbors(PhysicalQubit(u as u32)) {
            if dist[v.index()] == u32::MAX {
                dist[v.index()] = dist[u] + 1;
                queue.push_back(v.index());
            }
        }
    }
    dist
}

/// Fewest edge swaps turning the identity placement into `perm`, by breadth-first search
/// over placements. `perm[p]` is where the token starting at `p` must end.
pub fn optimal_swaps(graph: &CouplingGraph, perm: &[u32]) -> usize {
    let n = perm.len();
    // State: position -> token. Goal: token t sits at perm[t].
    let mut goal = vec![0u8; n];
    for (t, &p) in perm.iter().enumerate() {
        goal[p as usize] = t as u8;
    }
    let start: Vec<u8> = (0..n as u8).collect();
    if start == goal {
        return 0;
    }
    let mut seen = std::collections::HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((state, d)) = queue.pop_front() {
        for [a, b] in graph.edges() {
            let mut next = state.clone();
            next.swap(a.index(), b.index());
            if next == goal {
                return d + 1;
            }
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    unreachable!("connected graph")
}

/// Apply swaps to the identity placement and report where each token ends.
pub fn replay_swaps(n: usize, swaps: &[[PhysicalQubit; 2]]) -> Vec<u32> {
    let mut token_at: Vec<u32> = (0..n as u32).collect();
    for [a, b] in swaps {
        token_at.swap(a.index(), b.index());
    }
    let mut position = vec![0u32; n];
    for (p, &t) in token_at.iter().enumerate() {
        position[t as usize] = p as u32;
    }
    position
}
