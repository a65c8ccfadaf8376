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

use serde::{Deserialize, Serialize};

use super::PhysicalQubit;
use crate::error::{Result, SabreError};

/// Undirected device connectivity.
///
/// Adjacency lists are sorted, and the canonical edge list holds each edge once as `[a, b]` with
/// `a < b`, sorted. Directed input edges are kept for reporting only; routing treats every
/// coupling as symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingGraph {
    adjacency: Vec<Vec<PhysicalQubit>>,
    edges: Vec<[PhysicalQubit; 2]>,
    directed: Option<Vec<[PhysicalQubit; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingJson {
    pub num_qubits: usize,
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub directed: bool,
}

impl CouplingGraph {
    pub fn new(num_qubits: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); num_qubits];
        let mut canonical = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(SabreError::InvalidGraph(format!("self-loop on qubit {a}")));
            }
            if a as usize >= num_qubits || b as usize >= num_qubits {
                return Err(SabreError::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {num_qubits} qubits"
                )));
            }
            canonical.push([PhysicalQubit(a.min(b)), PhysicalQubit(a.max(b))]);
        }
        canonical.sort_unstable();
        canonical.dedup();
        for [a, b] in &canonical {
            adjacency[a.index()].push(*b);
            adjacency[b.index()].push(*a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(CouplingGraph {
            adjacency,
            edges: canonical,
            directed: None,
        })
    }

    /// Build from directed couplings; the directions are remembered but routing is symmetric.
    pub fn from_directed(num_qubits: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut graph = Self::new(num_qubits, edges.iter().copied())?;
        graph.directed = Some(
            edges
                .iter()
                .map(|&(a, b)| [PhysicalQubit(a), PhysicalQubit(b)])
                .collect(),
        );
        Ok(graph)
    }

    pub fn from_json(json: &CouplingJson) -> Result<Self> {
        let edges: Vec<(u32, u32)> = json.edges.iter().map(|[a, b]| (*a, *b)).collect();
        if json.directed {
            Self::from_directed(json.num_qubits, &edges)
        } else {
            Self::new(json.num_qubits, edges)
        }
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let json: CouplingJson = serde_json::from_str(text)
            .map_err(|e| SabreError::InvalidGraph(format!("schema violation: {e}")))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> CouplingJson {
        match &self.directed {
            Some(directed) => CouplingJson {
                num_qubits: self.num_qubits(),
                edges: directed.iter().map(|[a, b]| [a.0, b.0]).collect(),
                directed: true,
            },
            None => CouplingJson {
                num_qubits: self.num_qubits(),
                edges: self.edges.iter().map(|[a, b]| [a.0, b.0]).collect(),
                directed: false,
            },
        }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, qubit: PhysicalQubit) -> &[PhysicalQubit] {
        &self.adjacency[qubit.index()]
    }

    #[inline]
    pub fn degree(&self, qubit: PhysicalQubit) -> usize {
        self.adjacency[qubit.index()].len()
    }

    #[inline]
    pub fn contains_edge(&self, a: PhysicalQubit, b: PhysicalQubit) -> bool {
        a.index() < self.adjacency.len() && self.adjacency[a.index()].binary_search(&b).is_ok()
    }

    #[inline]
    pub fn edges(&self) -> &[[PhysicalQubit; 2]] {
        &self.edges
    }

    pub fn directed_edges(&self) -> Option<&[[PhysicalQubit; 2]]> {
        self.directed.as_deref()
    }

    /// The subgraph induced by `qubits`, relabelled so that `qubits[i]` becomes qubit `i`.
    pub fn subgraph(&self, qubits: &[PhysicalQubit]) -> CouplingGraph {
        let mut local = vec![u32::MAX; self.num_qubits()];
        for (i, q) in qubits.iter().enumerate() {
            local[q.index()] = i as u32;
        }
        let edges = self.edges.iter().filter_map(|[a, b]| {
            let (la, lb) = (local[a.index()], local[b.index()]);
            (la != u32::MAX && lb != u32::MAX).then_some((la, lb))
        });
        CouplingGraph::new(qubits.len(), edges).expect("induced subgraph is valid")
    }

    /// Place graphs side by side, offsetting the qubit indices of each later graph.
    pub fn disjoint_union(graphs: &[CouplingGraph]) -> CouplingGraph {
        let mut offset = 0u32;
        let mut edges = Vec::new();
        for g in graphs {
            edges.extend(g.edges.iter().map(|[a, b]| (a.0 + offset, b.0 + offset)));
            offset += g.num_qubits() as u32;
        }
        CouplingGraph::new(offset as usize, edges).expect("union of valid graphs is valid")
    }
}
