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

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Result, SabreError};
use crate::topology::{CouplingGraph, DistanceMatrix, PhysicalQubit, UNREACHABLE};

/// Where the state on each physical qubit has to end up: `mapping[p]` is the destination of the
/// token currently on `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<u32>,
}

impl Permutation {
    pub fn new(mapping: Vec<u32>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &d in &mapping {
            if d as usize >= n || std::mem::replace(&mut seen[d as usize], true) {
                return Err(SabreError::ControlFlow(format!(
                    "mapping is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n as u32).collect(),
        }
    }

    pub fn mapping(&self) -> &[u32] {
        &self.mapping
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(p, &d)| p as u32 == d)
    }
}

struct Tokens<'a> {
    graph: &'a CouplingGraph,
    dist: &'a DistanceMatrix,
    dest: Vec<PhysicalQubit>,
    unhappy: BTreeSet<PhysicalQubit>,
    swaps: Vec<[PhysicalQubit; 2]>,
}

impl Tokens<'_> {
    #[inline]
    fn d(&self, from: PhysicalQubit, token_at: PhysicalQubit) -> u32 {
        self.dist.raw(from, self.dest[token_at.index()])
    }

    /// Change in total token distance if the tokens on `u` and `v` traded places.
    fn gain(&self, u: PhysicalQubit, v: PhysicalQubit) -> i64 {
        (self.d(v, u) as i64 - self.d(u, u) as i64) + (self.d(u, v) as i64 - self.d(v, v) as i64)
    }

    fn desires(&self, u: PhysicalQubit, v: PhysicalQubit) -> bool {
        self.d(v, u) < self.d(u, u)
    }

    fn swap(&mut self, u: PhysicalQubit, v: PhysicalQubit) {
        self.dest.swap(u.index(), v.index());
        for q in [u, v] {
            if self.dest[q.index()] == q {
                self.unhappy.remove(&q);
            } else {
                self.unhappy.insert(q);
            }
        }
        self.swaps.push([u, v]);
    }

    /// First edge at an unhappy qubit, in ascending order, whose swap changes the total
    /// distance by exactly `want`, with the partner never moving away when `want` is -1.
    fn find_swap(&self, want: i64) -> Option<(PhysicalQubit, PhysicalQubit)> {
        for &u in &self.unhappy {
            for &v in self.graph.neighbors(u) {
                if !self.desires(u, v) {
                    continue;
                }
                let g = self.gain(u, v);
                if g == want && (want == -2 || self.d(u, v) <= self.d(v, v)) {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Follow desire edges from the smallest unhappy qubit. A cycle is rotated; reaching a
    /// satisfied qubit trades with it.
    fn walk(&mut self) {
        let start = *self.unhappy.iter().next().expect("an unhappy qubit");
        let mut path = vec![start];
        let mut position = vec![usize::MAX; self.dest.len()];
        position[start.index()] = 0;
        loop {
            let u = *path.last().expect("non-empty path");
            let v = *self
                .graph
                .neighbors(u)
                .iter()
                .find(|&&v| self.desires(u, v))
                .expect("an unhappy token has a closer neighbor");
            if position[v.index()] != usize::MAX {
                let cycle = path[position[v.index()]..].to_vec();
                for i in (0..cycle.len() - 1).rev() {
                    self.swap(cycle[i], cycle[i + 1]);
                }
                return;
            }
            if self.dest[v.index()] == v {
                self.swap(u, v);
                return;
            }
            position[v.index()] = path.len();
            path.push(v);
        }
    }

    /// Guaranteed fallback: fill the leaves of a BFS spanning tree one at a time.
    fn tree_fill(&mut self) {
        let n = self.dest.len();
        let mut removed = vec![false; n];
        let mut done_component = vec![false; n];
        for root in 0..n {
            if done_component[root] {
                continue;
            }
            let root = PhysicalQubit(root as u32);
            let mut parent = vec![None; n];
            let mut order = vec![root];
            let mut queue = VecDeque::from([root]);
            done_component[root.index()] = true;
            while let Some(u) = queue.pop_front() {
                for &v in self.graph.neighbors(u) {
                    if !done_component[v.index()] {
                        done_component[v.index()] = true;
                        parent[v.index()] = Some(u);
                        order.push(v);
                        queue.push_back(v);
                    }
                }
            }
            // Deepest-first BFS order removes leaves before their parents.
            for &leaf in order.iter().rev() {
                let holder = (0..n)
                    .map(|p| PhysicalQubit(p as u32))
                    .find(|p| !removed[p.index()] && self.dest[p.index()] == leaf)
                    .expect("token for leaf is still in the tree");
                let path = tree_path(&parent, holder, leaf);
                for w in path.windows(2) {
                    self.swap(w[0], w[1]);
                }
                removed[leaf.index()] = true;
            }
        }
    }
}

fn tree_path(
    parent: &[Option<PhysicalQubit>],
    from: PhysicalQubit,
    to: PhysicalQubit,
) -> Vec<PhysicalQubit> {
    let ancestors = |mut q: PhysicalQubit| {
        let mut out = vec![q];
        while let Some(p) = parent[q.index()] {
            out.push(p);
            q = p;
        }
        out
    };
    let up = ancestors(from);
    let down = ancestors(to);
    let common = *up.iter().find(|q| down.contains(q)).expect("same tree");
    let mut path: Vec<PhysicalQubit> = up.iter().copied().take_while(|q| *q != common).collect();
    path.push(common);
    let tail: Vec<PhysicalQubit> = down.iter().copied().take_while(|q| *q != common).collect();
    path.extend(tail.into_iter().rev());
    path
}

/// Swaps over coupling edges that move every token to its destination.
///
/// Greedy token swapping: take a swap that moves two tokens closer if one exists, then one
/// that moves a single token closer without moving the other away, otherwise follow the
/// tokens' desired moves to rotate a cycle or trade with a satisfied token. A spanning-tree
/// construction takes over if the greedy phase runs unusually long.
pub fn realize_permutation(
    graph: &CouplingGraph,
    dist: &DistanceMatrix,
    perm: &Permutation,
) -> Result<Vec<[PhysicalQubit; 2]>> {
    let n = graph.num_qubits();
    if perm.len() != n {
        return Err(SabreError::ControlFlow(format!(
            "permutation over {} qubits on a {n}-qubit device",
            perm.len()
        )));
    }
    let dest: Vec<PhysicalQubit> = perm.mapping().iter().map(|&d| PhysicalQubit(d)).collect();
    for (p, d) in dest.iter().enumerate() {
        if dist.raw(PhysicalQubit(p as u32), *d) == UNREACHABLE {
            return Err(SabreError::ControlFlow(format!(
                "displaced qubits span components: {p} must reach {}",
                d.0
            )));
        }
    }
    let unhappy = (0..n as u32)
        .map(PhysicalQubit)
        .filter(|p| dest[p.index()] != *p)
        .collect();
    let mut tokens = Tokens {
        graph,
        dist,
        dest,
        unhappy,
        swaps: Vec::new(),
    };
    let limit = 4 * n * n + 16;
    while !tokens.unhappy.is_empty() {
        if tokens.swaps.len() > limit {
            tokens.tree_fill();
            break;
        }
        if let Some((u, v)) = tokens.find_swap(-2).or_else(|| tokens.find_swap(-1)) {
            tokens.swap(u, v);
        } else {
            tokens.walk();
        }
    }
    Ok(tokens.swaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{grid, line, ring};

    fn apply(n: usize, mapping: &[u32], swaps: &[[PhysicalQubit; 2]]) -> bool {
        // token at p is named mapping[p]; after the swaps every position must hold its own name
        let mut at: Vec<u32> = mapping.to_vec();
        for [a, b] in swaps {
            at.swap(a.index(), b.index());
        }
        (0..n as u32).all(|p| at[p as usize] == p)
    }

    fn run(graph: &CouplingGraph, mapping: Vec<u32>) -> Vec<[PhysicalQubit; 2]> {
        let dist = DistanceMatrix::new(graph);
        let swaps =
            realize_permutation(graph, &dist, &Permutation::new(mapping.clone()).unwrap()).unwrap();
        assert!(apply(graph.num_qubits(), &mapping, &swaps));
        for [a, b] in &swaps {
            assert!(graph.contains_edge(*a, *b));
        }
        swaps
    }

    #[test]
    fn identity_needs_nothing() {
        assert!(run(&ring(6), (0..6).collect()).is_empty());
    }

    #[test]
    fn adjacent_transposition_is_one_swap() {
        assert_eq!(run(&line(4), vec![0, 2, 1, 3]).len(), 1);
    }

    #[test]
    fn three_cycle_on_a_triangle_path() {
        // 0 -> 1 -> 2 -> 0 on a line needs two swaps.
        assert_eq!(run(&line(3), vec![1, 2, 0]).len(), 2);
    }

    #[test]
    fn reversal_on_a_line() {
        let swaps = run(&line(6), vec![5, 4, 3, 2, 1, 0]);
        assert!(swaps.len() <= 4 * 15);
    }

    #[test]
    fn tree_fill_realizes_anything() {
        let g = grid(3, 3);
        let dist = DistanceMatrix::new(&g);
        let mapping = vec![8, 7, 6, 5, 4, 3, 2, 1, 0];
        let mut tokens = Tokens {
            graph: &g,
            dist: &dist,
            dest: mapping.iter().map(|&d| PhysicalQubit(d)).collect(),
            unhappy: (0..9).filter(|&p| p != 4).map(PhysicalQubit).collect(),
            swaps: Vec::new(),
        };
        tokens.tree_fill();
        assert!(tokens.unhappy.is_empty());
        assert!(apply(9, &mapping, &tokens.swaps));
    }

    #[test]
    fn rejects_cross_component_moves() {
        let g = CouplingGraph::disjoint_union(&[line(2), line(2)]);
        let dist = DistanceMatrix::new(&g);
        let perm = Permutation::new(vec![2, 1, 0, 3]).unwrap();
        assert!(matches!(
            realize_permutation(&g, &dist, &perm),
            Err(SabreError::ControlFlow(_))
        ));
        assert!(Permutation::new(vec![0, 0]).is_err());
    }
}
