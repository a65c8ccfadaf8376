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

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use super::{CouplingGraph, PhysicalQubit};
use crate::error::{Result, SabreError};

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components(graph: &CouplingGraph) -> Vec<Vec<PhysicalQubit>> {
    let n = graph.num_qubits();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut component = vec![PhysicalQubit(start as u32)];
        let mut queue = VecDeque::from([PhysicalQubit(start as u32)]);
        while let Some(u) = queue.pop_front() {
            for &v in graph.neighbors(u) {
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    component.push(v);
                    queue.push_back(v);
                }
            }
        }
        component.sort_unstable();
        out.push(component);
    }
    out
}

/// Shortest path in hops from `a` to `b`, both endpoints included.
///
/// Among equally short paths the walk from `a` always steps to the smallest-index neighbor,
/// so the result is deterministic.
pub fn shortest_path(
    graph: &CouplingGraph,
    a: PhysicalQubit,
    b: PhysicalQubit,
) -> Result<Vec<PhysicalQubit>> {
    shortest_path_weighted(graph, a, b, |_, _| 1.0)
}

#[derive(PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Reversed so the max-heap pops the smallest distance first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Dijkstra shortest path under a positive edge weight.
pub fn shortest_path_weighted(
    graph: &CouplingGraph,
    a: PhysicalQubit,
    b: PhysicalQubit,
    weight: impl Fn(PhysicalQubit, PhysicalQubit) -> f64,
) -> Result<Vec<PhysicalQubit>> {
    let n = graph.num_qubits();
    if a.index() >= n || b.index() >= n {
        return Err(SabreError::InvalidGraph(format!(
            "path endpoints ({}, {}) out of range",
            a.0, b.0
        )));
    }
    // Distances to `b`, so the forward walk from `a` can pick its next hop locally.
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[b.index()] = 0.0;
    heap.push(Entry(0.0, b.0));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        if u == a.0 {
            break;
        }
        let u = PhysicalQubit(u);
        for &v in graph.neighbors(u) {
            let w = weight(v, u);
            if !(w > 0.0 && w.is_finite()) {
                return Err(SabreError::InvalidGraph(format!(
                    "non-positive or undefined weight on edge ({}, {})",
                    v.0, u.0
                )));
            }
            let nd = d + w;
            if nd < dist[v.index()] {
                dist[v.index()] = nd;
                heap.push(Entry(nd, v.0));
            }
        }
    }
    if !dist[a.index()].is_finite() {
        return Err(SabreError::Unreachable(a.0, b.0));
    }
    let mut path = vec![a];
    let mut u = a;
    while u != b {
        let du = dist[u.index()];
        let tolerance = 1e-9 * du.max(1.0);
        let next = graph
            .neighbors(u)
            .iter()
            .copied()
            .find(|&v| {
                (dist[v.index()] + weight(u, v) - du).abs() <= tolerance && dist[v.index()] < du
            })
            .expect("a settled vertex has a neighbor on a shortest path");
        path.push(next);
        u = next;
    }
    Ok(path)
}
