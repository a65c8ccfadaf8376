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

use crate::circuit::{Block, CircuitDag, OpKind, VirtualQubit};
use crate::error::{Result, SabreError};
use crate::topology::{connected_components, CouplingGraph, PhysicalQubit};

/// Circuit qubits assigned to one connected component of the device.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentAssignment {
    /// The device component's qubits, sorted.
    pub physical: Vec<PhysicalQubit>,
    /// The circuit qubits placed there, sorted; local qubit `i` of the sub-circuit is
    /// `virtuals[i]`.
    pub virtuals: Vec<VirtualQubit>,
}

impl ComponentAssignment {
    /// The part of `dag` acting only on this assignment's qubits, relabelled locally.
    ///
    /// Nodes spanning several assignments can only be barriers; they are left out.
    pub fn sub_circuit(&self, dag: &CircuitDag) -> CircuitDag {
        let mut local = vec![u32::MAX; dag.num_qubits()];
        for (i, v) in self.virtuals.iter().enumerate() {
            local[v.index()] = i as u32;
        }
        let mut sub = CircuitDag::new(self.virtuals.len(), dag.num_clbits());
        for node in dag.nodes() {
            if node.qubits.iter().any(|q| local[q.index()] == u32::MAX) {
                continue;
            }
            let qubits: Vec<u32> = node.qubits.iter().map(|q| local[q.index()]).collect();
            let pushed = match node.kind {
                OpKind::OneQubit | OpKind::TwoQubit => {
                    sub.push_gate_with_clbits(node.label.clone(), &qubits, &node.clbits)
                }
                OpKind::Measure => sub.push_measure(qubits[0], node.clbits[0]),
                OpKind::Barrier => sub.push_barrier(&qubits),
                OpKind::ControlFlow => {
                    let blocks = node
                        .blocks
                        .iter()
                        .map(|b| Block {
                            qubit_map: b
                                .qubit_map
                                .iter()
                                .map(|q| VirtualQubit(local[q.index()]))
                                .collect(),
                            clbit_map: b.clbit_map.clone(),
                            circuit: b.circuit.clone(),
                        })
                        .collect();
                    let predicate: Vec<u32> = node.clbits.clone();
                    sub.push_control_flow(node.label.clone(), &predicate, blocks, None)
                }
            };
            pushed.expect("restriction of a valid circuit is valid");
        }
        sub
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Circuit interaction components: qubits joined by two-qubit gates or by sharing a
/// control-flow node. Each is sorted; the list is ordered by smallest member.
pub fn interaction_components(dag: &CircuitDag) -> Vec<Vec<VirtualQubit>> {
    let n = dag.num_qubits();
    let mut parent: Vec<usize> = (0..n).collect();
    for node in dag.nodes() {
        if matches!(node.kind, OpKind::TwoQubit | OpKind::ControlFlow) && !node.qubits.is_empty() {
            let first = node.qubits[0].index();
            for q in &node.qubits[1..] {
                let (a, b) = (find(&mut parent, first), find(&mut parent, q.index()));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<VirtualQubit>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for q in 0..n {
        let root = find(&mut parent, q);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(VirtualQubit(q as u32));
    }
    groups
}

/// Assign circuit interaction components to device components.
///
/// Components are taken largest first and each goes to the device component with the least
/// remaining room that still fits it. The result lists only device components that received
/// qubits, in device-component order.
pub fn decompose_disjoint(
    dag: &CircuitDag,
    graph: &CouplingGraph,
) -> Result<Vec<ComponentAssignment>> {
    let device = connected_components(graph);
    let mut room: Vec<usize> = device.iter().map(Vec::len).collect();
    let mut pieces = interaction_components(dag);
    pieces.sort_by_key(|c| (std::cmp::Reverse(c.len()), c[0]));
    let mut assigned: Vec<Vec<VirtualQubit>> = vec![Vec::new(); device.len()];
    for piece in pieces {
        let target = (0..device.len())
            .filter(|&d| room[d] >= piece.len())
            .min_by_key(|&d| (room[d], d))
            .ok_or_else(|| {
                SabreError::Infeasible(format!(
                    "an interaction component of {} qubits fits in no device component (free capacities {:?})",
                    piece.len(),
                    room
                ))
            })?;
        room[target] -= piece.len();
        assigned[target].extend(piece);
    }
    Ok(device
        .into_iter()
        .zip(assigned)
        .filter(|(_, v)| !v.is_empty())
        .map(|(physical, mut virtuals)| {
            virtuals.sort_unstable();
            ComponentAssignment { physical, virtuals }
        })
        .collect())
}
