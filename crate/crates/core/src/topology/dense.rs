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

use std::collections::BTreeSet;

use super::{connected_components, CouplingGraph, PhysicalQubit};
use crate::error::{Result, SabreError};

/// A connected set of `k` physical qubits with many internal edges, sorted by index.
///
/// Each component large enough is peeled by repeatedly removing a minimum-degree vertex; the
/// densest intermediate set of at least `k` vertices becomes a core. A connected `k`-set is then
/// grown from the core's highest-degree vertex, always adding the neighbor with the most edges
/// into the set, preferring core vertices. The component whose grown set has the most internal
/// edges wins.
pub fn densest_subgraph_seed(graph: &CouplingGraph, k: usize) -> Result<Vec<PhysicalQubit>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut best: Option<(usize, Vec<PhysicalQubit>)> = None;
    for component in connected_components(graph) {
        if component.len() < k {
            continue;
        }
        let core = peel(graph, &component, k);
        let chosen = grow(graph, &component, &core, k);
        let edges = internal_edges(graph, &chosen);
        if best.as_ref().is_none_or(|(e, _)| edges > *e) {
            best = Some((edges, chosen));
        }
    }
    let (_, mut chosen) = best
        .ok_or_else(|| SabreError::Infeasible(format!("no connected component has {k} qubits")))?;
    chosen.sort_unstable();
    Ok(chosen)
}

fn internal_edges(graph: &CouplingGraph, set: &[PhysicalQubit]) -> usize {
    let mut member = vec![false; graph.num_qubits()];
    for q in set {
        member[q.index()] = true;
    }
    set.iter()
        .map(|q| {
            graph
                .neighbors(*q)
                .iter()
                .filter(|v| member[v.index()])
                .count()
        })
        .sum::<usize>()
        / 2
}

fn peel(graph: &CouplingGraph, component: &[PhysicalQubit], k: usize) -> Vec<bool> {
    let n = graph.num_qubits();
    let mut alive = vec![false; n];
    let mut degree = vec![0usize; n];
    for q in component {
        alive[q.index()] = true;
    }
    let mut queue = BTreeSet::new();
    let mut edges = 0;
    for q in component {
        degree[q.index()] = graph.neighbors(*q).len();
        edges += degree[q.index()];
        queue.insert((degree[q.index()], q.0));
    }
    edges /= 2;
    let mut size = component.len();
    let mut removal = Vec::with_capacity(size);
    let mut best_density = edges as f64 / size as f64;
    let mut best_removed = 0;
    while size > k {
        let (_, u) = queue.pop_first().expect("non-empty");
        let u = PhysicalQubit(u);
        alive[u.index()] = false;
        removal.push(u);
        edges -= degree[u.index()];
        for v in graph.neighbors(u) {
            if alive[v.index()] {
                queue.remove(&(degree[v.index()], v.0));
                degree[v.index()] -= 1;
                queue.insert((degree[v.index()], v.0));
            }
        }
        size -= 1;
        let density = edges as f64 / size as f64;
        if density > best_density {
            best_density = density;
            best_removed = removal.len();
        }
    }
    let mut core = vec![false; n];
    for q in component {
        core[q.index()] = true;
    }
    for q in &removal[..best_removed] {
        core[q.index()] = false;
    }
    core
}

fn grow(
    graph: &CouplingGraph,
    component: &[PhysicalQubit],
    core: &[bool],
    k: usize,
) -> Vec<PhysicalQubit> {
    let n = graph.num_qubits();
    let core_degree = |q: PhysicalQubit| {
        graph
            .neighbors(q)
            .iter()
            .filter(|v| core[v.index()])
            .count()
    };
    let start = component
        .iter()
        .copied()
        .filter(|q| core[q.index()])
        .max_by_key(|&q| (core_degree(q), std::cmp::Reverse(q.0)))
        .expect("core is non-empty");
    let mut member = vec![false; n];
    // Edges from each non-member into the current set.
    let mut links = vec![0usize; n];
    let mut frontier: BTreeSet<u32> = BTreeSet::new();
    let mut chosen = Vec::with_capacity(k);
    let add = |q: PhysicalQubit,
               member: &mut Vec<bool>,
               links: &mut Vec<usize>,
               frontier: &mut BTreeSet<u32>,
               chosen: &mut Vec<PhysicalQubit>| {
        member[q.index()] = true;
        frontier.remove(&q.0);
        chosen.push(q);
        for v in graph.neighbors(q) {
            if !member[v.index()] {
                links[v.index()] += 1;
                frontier.insert(v.0);
            }
        }
    };
    add(start, &mut member, &mut links, &mut frontier, &mut chosen);
    while chosen.len() < k {
        let key = |q: &u32| {
            let q = PhysicalQubit(*q);
            (
                core[q.index()],
                links[q.index()],
                core_degree(q),
                std::cmp::Reverse(q.0),
            )
        };
        let next = frontier
            .iter()
            .max_by_key(|q| key(q))
            .copied()
            .expect("component is connected");
        add(
            PhysicalQubit(next),
            &mut member,
            &mut links,
            &mut frontier,
            &mut chosen,
        );
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{grid, line};

    fn p(i: u32) -> PhysicalQubit {
        PhysicalQubit(i)
    }

    #[test]
    fn whole_graph_when_k_is_size() {
        let g = grid(3, 3);
        assert_eq!(densest_subgraph_seed(&g, 9).unwrap().len(), 9);
    }

    #[test]
    fn star_picks_center_and_a_leaf() {
        let g = CouplingGraph::new(5, [(2, 0), (2, 1), (2, 3), (2, 4)]).unwrap();
        assert_eq!(densest_subgraph_seed(&g, 2).unwrap(), vec![p(0), p(2)]);
    }

    #[test]
    fn grid_square_is_found() {
        // A 2x2 block is the only 4-set with four edges.
        let g = grid(4, 4);
        let seed = densest_subgraph_seed(&g, 4).unwrap();
        assert_eq!(internal_edges(&g, &seed), 4);
    }

    #[test]
    fn prefers_the_denser_component() {
        let g = CouplingGraph::disjoint_union(&[line(6), grid(2, 3)]);
        let seed = densest_subgraph_seed(&g, 4).unwrap();
        assert!(seed.iter().all(|q| q.0 >= 6));
        assert_eq!(internal_edges(&g, &seed), 4);
    }

    #[test]
    fn too_large_is_infeasible() {
        let g = CouplingGraph::disjoint_union(&[line(3), line(3)]);
        assert!(matches!(
            densest_subgraph_seed(&g, 4),
            Err(SabreError::Infeasible(_))
        ));
    }
}
