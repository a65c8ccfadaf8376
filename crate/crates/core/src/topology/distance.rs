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

use std::collections::VecDeque;
use std::sync::OnceLock;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{CouplingGraph, PhysicalQubit};

/// Marker distance between qubits in different connected components.
pub const UNREACHABLE: u32 = u32::MAX;

/// Devices up to this many qubits get every row computed at construction.
pub const EAGER_DISTANCE_LIMIT: usize = 1000;

/// All-pairs hop distances, one BFS row per source.
///
/// Small devices are filled eagerly; larger ones compute a row the first time it is read.
/// Rows are write-once, so concurrent readers always see identical values.
#[derive(Debug)]
pub struct DistanceMatrix {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    rows: Vec<OnceLock<Box<[u32]>>>,
}

impl DistanceMatrix {
    pub fn new(graph: &CouplingGraph) -> Self {
        Self::with_eager_limit(graph, EAGER_DISTANCE_LIMIT)
    }

    pub fn with_eager_limit(graph: &CouplingGraph, eager_limit: usize) -> Self {
        let n = graph.num_qubits();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * graph.num_edges());
        offsets.push(0);
        for q in 0..n {
            targets.extend(graph.neighbors(PhysicalQubit(q as u32)).iter().map(|p| p.0));
            offsets.push(targets.len());
        }
        let matrix = DistanceMatrix {
            offsets,
            targets,
            rows: (0..n).map(|_| OnceLock::new()).collect(),
        };
        if n <= eager_limit {
            #[cfg(feature = "parallel")]
            let filled: Vec<Box<[u32]>> = (0..n).into_par_iter().map(|s| matrix.bfs(s)).collect();
            #[cfg(not(feature = "parallel"))]
            let filled: Vec<Box<[u32]>> = (0..n).map(|s| matrix.bfs(s)).collect();
            for (row, values) in matrix.rows.iter().zip(filled) {
                let _ = row.set(values);
            }
        }
        matrix
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.rows.len()
    }

    fn bfs(&self, source: usize) -> Box<[u32]> {
        let mut dist = vec![UNREACHABLE; self.rows.len()].into_boxed_slice();
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source as u32);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            let u = u as usize;
            for &v in &self.targets[self.offsets[u]..self.offsets[u + 1]] {
                if dist[v as usize] == UNREACHABLE {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Distances from `source` to every qubit.
    #[inline]
    pub fn row(&self, source: PhysicalQubit) -> &[u32] {
        self.rows[source.index()].get_or_init(|| self.bfs(source.index()))
    }

    /// Hop distance, or [`UNREACHABLE`].
    #[inline]
    pub fn raw(&self, a: PhysicalQubit, b: PhysicalQubit) -> u32 {
        self.row(a)[b.index()]
    }

    #[inline]
    pub fn get(&self, a: PhysicalQubit, b: PhysicalQubit) -> Option<u32> {
        let d = self.raw(a, b);
        (d != UNREACHABLE).then_some(d)
    }

    /// Distance as a score term. Callers only ask for pairs in one component.
    #[inline]
    pub fn score(&self, a: PhysicalQubit, b: PhysicalQubit) -> f64 {
        self.raw(a, b) as f64
    }

    /// Number of rows computed so far.
    pub fn rows_computed(&self) -> usize {
        self.rows.iter().filter(|r| r.get().is_some()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{grid, line};

    fn p(i: u32) -> PhysicalQubit {
        PhysicalQubit(i)
    }

    #[test]
    fn line_distances() {
        let d = DistanceMatrix::new(&line(4));
        assert_eq!(d.get(p(0), p(3)), Some(3));
        assert_eq!(d.get(p(2), p(2)), Some(0));
    }

    #[test]
    fn disconnected_pairs_are_unreachable() {
        let g = CouplingGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        let d = DistanceMatrix::new(&g);
        assert_eq!(d.get(p(0), p(2)), None);
        assert_eq!(d.raw(p(1), p(3)), UNREACHABLE);
    }

    #[test]
    fn lazy_rows_match_eager() {
        let g = grid(5, 7);
        let eager = DistanceMatrix::new(&g);
        let lazy = DistanceMatrix::with_eager_limit(&g, 0);
        assert_eq!(lazy.rows_computed(), 0);
        for a in 0..35 {
            for b in 0..35 {
                assert_eq!(eager.raw(p(a), p(b)), lazy.raw(p(a), p(b)));
            }
        }
        assert_eq!(lazy.rows_computed(), 35);
    }
}
