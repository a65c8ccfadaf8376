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

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SabreError};

/// Circuit-local qubit index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VirtualQubit(pub u32);

impl VirtualQubit {
    #[inline]
    pub fn new(index: u32) -> Self {
        VirtualQubit(index)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VirtualQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Index of a node within its own [`CircuitDag`]; nodes are numbered in insertion order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    OneQubit,
    TwoQubit,
    Measure,
    Barrier,
    ControlFlow,
}

/// A sub-circuit of a control-flow node.
///
/// `qubit_map[i]` is the outer qubit bound to the block's qubit `i`, and likewise for `clbit_map`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub qubit_map: Vec<VirtualQubit>,
    pub clbit_map: Vec<u32>,
    pub circuit: CircuitDag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateNode {
    pub id: NodeId,
    pub kind: OpKind,
    pub qubits: Vec<VirtualQubit>,
    pub clbits: Vec<u32>,
    pub blocks: Vec<Block>,
    pub label: String,
}

impl GateNode {
    #[inline]
    pub fn is_two_qubit(&self) -> bool {
        self.kind == OpKind::TwoQubit
    }
}

/// An immutable-after-construction dependency DAG.
///
/// Every node depends on the previous node on each of its qubits and clbits, so insertion order
/// is always a topological order and each wire is totally ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitDag {
    num_qubits: usize,
    num_clbits: usize,
    nodes: Vec<GateNode>,
    preds: Vec<Vec<NodeId>>,
    succs: Vec<Vec<NodeId>>,
    last_on_qubit: Vec<Option<NodeId>>,
    last_on_clbit: Vec<Option<NodeId>>,
}

impl CircuitDag {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        CircuitDag {
            num_qubits,
            num_clbits,
            nodes: Vec::new(),
            preds: Vec::new(),
            succs: Vec::new(),
            last_on_qubit: vec![None; num_qubits],
            last_on_clbit: vec![None; num_clbits],
        }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &GateNode {
        &self.nodes[id.index()]
    }

    /// Nodes in insertion order, which is a topological order.
    #[inline]
    pub fn nodes(&self) -> &[GateNode] {
        &self.nodes
    }

    #[inline]
    pub fn predecessors(&self, id: NodeId) -> &[NodeId] {
        &self.preds[id.index()]
    }

    #[inline]
    pub fn successors(&self, id: NodeId) -> &[NodeId] {
        &self.succs[id.index()]
    }

    /// True if no node (at any nesting level) is a control-flow node.
    pub fn is_flat(&self) -> bool {
        self.nodes.iter().all(|n| n.kind != OpKind::ControlFlow)
    }

    pub fn count_two_qubit(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_two_qubit()).count()
    }

    /// Append a one- or two-qubit gate; the kind follows from the operand count.
    pub fn push_gate(&mut self, label: impl Into<String>, qubits: &[u32]) -> Result<NodeId> {
        self.push_gate_with_clbits(label, qubits, &[])
    }

    /// Append a one- or two-qubit gate that also reads classical bits.
    pub fn push_gate_with_clbits(
        &mut self,
        label: impl Into<String>,
        qubits: &[u32],
        clbits: &[u32],
    ) -> Result<NodeId> {
        let kind = match qubits.len() {
            1 => OpKind::OneQubit,
            2 => OpKind::TwoQubit,
            n => {
                return Err(SabreError::InvalidCircuit(format!(
                    "gate on {n} qubits; only one- and two-qubit gates are supported"
                )))
            }
        };
        self.push_node(
            kind,
            label.into(),
            to_virtual(qubits),
            clbits.to_vec(),
            Vec::new(),
        )
    }

    pub fn push_measure(&mut self, qubit: u32, clbit: u32) -> Result<NodeId> {
        self.push_node(
            OpKind::Measure,
            "measure".to_string(),
            vec![VirtualQubit(qubit)],
            vec![clbit],
            Vec::new(),
        )
    }

    pub fn push_barrier(&mut self, qubits: &[u32]) -> Result<NodeId> {
        if qubits.is_empty() {
            return Err(SabreError::InvalidCircuit("barrier with no qubits".into()));
        }
        self.push_node(
            OpKind::Barrier,
            "barrier".to_string(),
            to_virtual(qubits),
            Vec::new(),
            Vec::new(),
        )
    }

    /// Append a control-flow node.
    ///
    /// The node's qubits become the sorted union of the blocks' mapped qubits. If `declared` is
    /// given, every mapped qubit must appear in it. The node's clbits are the predicate bits
    /// together with every block's mapped clbits.
    pub fn push_control_flow(
        &mut self,
        label: impl Into<String>,
        predicate: &[u32],
        blocks: Vec<Block>,
        declared: Option<&[u32]>,
    ) -> Result<NodeId> {
        if blocks.is_empty() {
            return Err(SabreError::InvalidCircuit(
                "control-flow node without blocks".into(),
            ));
        }
        let mut qubits = Vec::new();
        let mut clbits = predicate.to_vec();
        for (i, block) in blocks.iter().enumerate() {
            if block.qubit_map.len() != block.circuit.num_qubits() {
                return Err(SabreError::InvalidCircuit(format!(
                    "block {i} maps {} qubits but its circuit has {}",
                    block.qubit_map.len(),
                    block.circuit.num_qubits()
                )));
            }
            if block.clbit_map.len() != block.circuit.num_clbits() {
                return Err(SabreError::InvalidCircuit(format!(
                    "block {i} maps {} clbits but its circuit has {}",
                    block.clbit_map.len(),
                    block.circuit.num_clbits()
                )));
            }
            let mut seen = HashSet::new();
            for q in &block.qubit_map {
                if q.index() >= self.num_qubits {
                    return Err(SabreError::InvalidCircuit(format!(
                        "block {i} qubit mapping refers to undeclared outer qubit {}",
                        q.0
                    )));
                }
                if let Some(declared) = declared {
                    if !declared.contains(&q.0) {
                        return Err(SabreError::InvalidCircuit(format!(
                            "block {i} qubit mapping refers to outer qubit {} not listed by the operation",
                            q.0
                        )));
                    }
                }
                if !seen.insert(*q) {
                    return Err(SabreError::InvalidCircuit(format!(
                        "block {i} maps outer qubit {} twice",
                        q.0
                    )));
                }
            }
            for c in &block.clbit_map {
                if *c as usize >= self.num_clbits {
                    return Err(SabreError::InvalidCircuit(format!(
                        "block {i} clbit mapping refers to undeclared outer clbit {c}"
                    )));
                }
            }
            qubits.extend(block.qubit_map.iter().copied());
            clbits.extend(block.clbit_map.iter().copied());
        }
        qubits.sort_unstable();
        qubits.dedup();
        clbits.sort_unstable();
        clbits.dedup();
        self.push_node(OpKind::ControlFlow, label.into(), qubits, clbits, blocks)
    }

    fn push_node(
        &mut self,
        kind: OpKind,
        label: String,
        qubits: Vec<VirtualQubit>,
        clbits: Vec<u32>,
        blocks: Vec<Block>,
    ) -> Result<NodeId> {
        for q in &qubits {
            if q.index() >= self.num_qubits {
                return Err(SabreError::InvalidCircuit(format!(
                    "qubit {} out of range for a {}-qubit circuit",
                    q.0, self.num_qubits
                )));
            }
        }
        for c in &clbits {
            if *c as usize >= self.num_clbits {
                return Err(SabreError::InvalidCircuit(format!(
                    "clbit {c} out of range for a circuit with {} clbits",
                    self.num_clbits
                )));
            }
        }
        let distinct: HashSet<_> = qubits.iter().collect();
        if distinct.len() != qubits.len() {
            return Err(SabreError::InvalidCircuit(format!(
                "operation '{label}' repeats a qubit"
            )));
        }
        let distinct: HashSet<_> = clbits.iter().collect();
        if distinct.len() != clbits.len() {
            return Err(SabreError::InvalidCircuit(format!(
                "operation '{label}' repeats a clbit"
            )));
        }
        let id = NodeId(self.nodes.len() as u32);
        let mut preds = Vec::new();
        for q in &qubits {
            if let Some(p) = self.last_on_qubit[q.index()].replace(id) {
                preds.push(p);
            }
        }
        for c in &clbits {
            if let Some(p) = self.last_on_clbit[*c as usize].replace(id) {
                preds.push(p);
            }
        }
        preds.sort_unstable();
        preds.dedup();
        for p in &preds {
            self.succs[p.index()].push(id);
        }
        self.preds.push(preds);
        self.succs.push(Vec::new());
        self.nodes.push(GateNode {
            id,
            kind,
            qubits,
            clbits,
            blocks,
            label,
        });
        Ok(id)
    }

    /// Nodes not in `executed` whose predecessors all are, in ascending id order.
    pub fn front_nodes(&self, executed: &HashSet<NodeId>) -> Vec<NodeId> {
        self.nodes
            .iter()
            .map(|n| n.id)
            .filter(|id| {
                !executed.contains(id)
                    && self.preds[id.index()].iter().all(|p| executed.contains(p))
            })
            .collect()
    }

    /// Longest dependency path counting only two-qubit nodes.
    pub fn two_qubit_depth(&self) -> Result<usize> {
        let mut qubit_depth = vec![0usize; self.num_qubits];
        let mut clbit_depth = vec![0usize; self.num_clbits];
        let mut depth = 0;
        for node in &self.nodes {
            if node.kind == OpKind::ControlFlow {
                return Err(SabreError::InvalidCircuit(
                    "two-qubit depth is only defined for circuits without control flow".into(),
                ));
            }
            let mut d = node
                .qubits
                .iter()
                .map(|q| qubit_depth[q.index()])
                .chain(node.clbits.iter().map(|c| clbit_depth[*c as usize]))
                .max()
                .unwrap_or(0);
            if node.is_two_qubit() {
                d += 1;
            }
            for q in &node.qubits {
                qubit_depth[q.index()] = d;
            }
            for c in &node.clbits {
                clbit_depth[*c as usize] = d;
            }
            depth = depth.max(d);
        }
        Ok(depth)
    }

    /// The same circuit with every wire order reversed; blocks are reversed recursively.
    pub fn reversed(&self) -> CircuitDag {
        let mut out = CircuitDag::new(self.num_qubits, self.num_clbits);
        for node in self.nodes.iter().rev() {
            let blocks = node
                .blocks
                .iter()
                .map(|b| Block {
                    qubit_map: b.qubit_map.clone(),
                    clbit_map: b.clbit_map.clone(),
                    circuit: b.circuit.reversed(),
                })
                .collect();
            out.push_node(
                node.kind,
                node.label.clone(),
                node.qubits.clone(),
                node.clbits.clone(),
                blocks,
            )
            .expect("reversing a valid circuit keeps it valid");
        }
        out
    }
}

fn to_virtual(qubits: &[u32]) -> Vec<VirtualQubit> {
    qubits.iter().map(|q| VirtualQubit(*q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_order_creates_single_edge() {
        let mut dag = CircuitDag::new(2, 0);
        let a = dag.push_gate("cx", &[0, 1]).unwrap();
        let b = dag.push_gate("cz", &[1, 0]).unwrap();
        assert_eq!(dag.predecessors(b), &[a]);
        assert_eq!(dag.successors(a), &[b]);
    }

    #[test]
    fn rejects_repeated_qubit() {
        let mut dag = CircuitDag::new(2, 0);
        assert!(dag.push_gate("cx", &[1, 1]).is_err());
        assert!(dag.push_gate("h", &[2]).is_err());
    }

    #[test]
    fn conditional_gate_links_through_clbit() {
        let mut dag = CircuitDag::new(2, 1);
        let m = dag.push_measure(0, 0).unwrap();
        let g = dag.push_gate_with_clbits("x", &[1], &[0]).unwrap();
        assert_eq!(dag.predecessors(g), &[m]);
        let h = dag.push_gate("h", &[1]).unwrap();
        assert_eq!(dag.predecessors(h), &[g]);
    }

    #[test]
    fn depth_of_parallel_and_serial_gates() {
        let mut dag = CircuitDag::new(4, 0);
        dag.push_gate("cx", &[0, 1]).unwrap();
        dag.push_gate("cx", &[2, 3]).unwrap();
        assert_eq!(dag.two_qubit_depth().unwrap(), 1);
        dag.push_gate("h", &[1]).unwrap();
        dag.push_gate("cx", &[1, 2]).unwrap();
        assert_eq!(dag.two_qubit_depth().unwrap(), 2);
    }

    #[test]
    fn reversal_reverses_edges() {
        let mut dag = CircuitDag::new(3, 0);
        dag.push_gate("cx", &[0, 1]).unwrap();
        dag.push_gate("cx", &[1, 2]).unwrap();
        dag.push_gate("h", &[0]).unwrap();
        let rev = dag.reversed();
        assert_eq!(rev.node(NodeId(0)).label, "h");
        assert_eq!(rev.predecessors(NodeId(1)), &[] as &[NodeId]);
        assert_eq!(rev.predecessors(NodeId(2)), &[NodeId(0), NodeId(1)]);
        assert_eq!(rev.reversed(), dag);
    }
}
