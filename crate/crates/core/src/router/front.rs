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

use indexmap::IndexMap;

use crate::circuit::NodeId;
use crate::topology::{DistanceMatrix, PhysicalQubit};

/// Two-qubit gates whose predecessors have all been routed but which are not yet adjacent.
///
/// Each physical qubit belongs to at most one front gate, which is what makes the relative
/// score of a swap an O(1) lookup. Iteration follows insertion order.
#[derive(Clone, Debug, Default)]
pub struct FrontLayer {
    nodes: IndexMap<NodeId, [PhysicalQubit; 2]>,
    qubits: Vec<Option<(NodeId, PhysicalQubit)>>,
}

impl FrontLayer {
    pub fn new(num_qubits: usize) -> Self {
        FrontLayer {
            nodes: IndexMap::new(),
            qubits: vec![None; num_qubits],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn insert(&mut self, node: NodeId, qubits: [PhysicalQubit; 2]) {
        let [a, b] = qubits;
        debug_assert!(self.qubits[a.index()].is_none() && self.qubits[b.index()].is_none());
        self.qubits[a.index()] = Some((node, b));
        self.qubits[b.index()] = Some((node, a));
        self.nodes.insert(node, qubits);
    }

    pub fn remove(&mut self, node: NodeId) {
        let [a, b] = self
            .nodes
            .shift_remove(&node)
            .expect("only front nodes are removed");
        self.qubits[a.index()] = None;
        self.qubits[b.index()] = None;
    }

    /// The front gate on `qubit` and its partner qubit.
    #[inline]
    pub fn gate_on(&self, qubit: PhysicalQubit) -> Option<(NodeId, PhysicalQubit)> {
        self.qubits[qubit.index()]
    }

    #[inline]
    pub fn is_active(&self, qubit: PhysicalQubit) -> bool {
        self.qubits[qubit.index()].is_some()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&NodeId, &[PhysicalQubit; 2])> {
        self.nodes.iter()
    }

    pub fn get(&self, node: NodeId) -> Option<[PhysicalQubit; 2]> {
        self.nodes.get(&node).copied()
    }

    /// Change in total front distance if the swap were applied.
    #[inline]
    pub fn score(&self, swap: [PhysicalQubit; 2], dist: &DistanceMatrix) -> f64 {
        let [a, b] = swap;
        let mut total = 0.0;
        if let Some((_, c)) = self.qubits[a.index()] {
            if c != b {
                total += dist.score(b, c) - dist.score(a, c);
            }
        }
        if let Some((_, c)) = self.qubits[b.index()] {
            if c != a {
                total += dist.score(a, c) - dist.score(b, c);
            }
        }
        total
    }

    pub fn total_score(&self, dist: &DistanceMatrix) -> f64 {
        self.nodes.values().map(|&[a, b]| dist.score(a, b)).sum()
    }

    /// Relabel the gates for a swap of the states on `a` and `b`.
    pub fn apply_swap(&mut self, swap: [PhysicalQubit; 2]) {
        let [a, b] = swap;
        if let (Some((na, _)), Some((nb, _))) = (self.qubits[a.index()], self.qubits[b.index()]) {
            if na == nb {
                let entry = self.nodes.get_mut(&na).expect("front node");
                *entry = [entry[1], entry[0]];
                return;
            }
        }
        if let Some((node, c)) = self.qubits[a.index()] {
            self.qubits[c.index()] = Some((node, b));
            let entry = self.nodes.get_mut(&node).expect("front node");
            *entry = if *entry == [a, c] { [b, c] } else { [c, b] };
        }
        if let Some((node, c)) = self.qubits[b.index()] {
            self.qubits[c.index()] = Some((node, a));
            let entry = self.nodes.get_mut(&node).expect("front node");
            *entry = if *entry == [b, c] { [a, c] } else { [c, a] };
        }
        self.qubits.swap(a.index(), b.index());
    }

    /// The gate that the last swap touching `qubit` made adjacent, if any.
    #[inline]
    pub fn routable_on(
        &self,
        qubit: PhysicalQubit,
        adjacent: impl Fn(PhysicalQubit, PhysicalQubit) -> bool,
    ) -> Option<NodeId> {
        let (node, other) = self.qubits[qubit.index()]?;
        adjacent(qubit, other).then_some(node)
    }
}
