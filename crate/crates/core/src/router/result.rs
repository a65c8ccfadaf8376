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

use serde::Serialize;

use crate::circuit::{BlockJson, CircuitDag, CircuitJson, NodeId, OpJson, OpKind};
use crate::error::Result;
use crate::router::Layout;
use crate::topology::PhysicalQubit;

/// One operation of a routed circuit, over physical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoutedOp {
    /// An original node; `qubits` are the physical images of its virtual qubits.
    Gate {
        node: NodeId,
        qubits: Vec<PhysicalQubit>,
    },
    /// A swap inserted by routing.
    Swap([PhysicalQubit; 2]),
    /// An original control-flow node. `qubits` lists every physical qubit touched by any branch,
    /// sorted; each block is routed on the whole device.
    ControlFlow {
        node: NodeId,
        qubits: Vec<PhysicalQubit>,
        blocks: Vec<RoutedBlock>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutedBlock {
    /// Routed body; nodes refer to the block's own circuit.
    pub ops: Vec<RoutedOp>,
    /// Swaps appended after the body to bring the layout to the common exit layout.
    pub epilogue: Vec<[PhysicalQubit; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutingResult {
    pub ops: Vec<RoutedOp>,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    /// Inserted swaps, including those inside control-flow blocks and their epilogues.
    pub swaps_added: usize,
    /// Two-qubit depth of the output, with each swap counted as one two-qubit gate.
    pub depth_2q: usize,
    pub seed: u64,
    pub release_valve_fires: usize,
}

/// Per-trial summary kept by the layout engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoutingSummary {
    pub swaps_added: usize,
    pub depth_2q: usize,
    pub release_valve_fires: usize,
}

impl RoutingResult {
    pub fn summary(&self) -> RoutingSummary {
        RoutingSummary {
            swaps_added: self.swaps_added,
            depth_2q: self.depth_2q,
            release_valve_fires: self.release_valve_fires,
        }
    }
}

pub(crate) fn count_swaps(ops: &[RoutedOp]) -> usize {
    ops.iter()
        .map(|op| match op {
            RoutedOp::Gate { .. } => 0,
            RoutedOp::Swap(_) => 1,
            RoutedOp::ControlFlow { blocks, .. } => blocks
                .iter()
                .map(|b| count_swaps(&b.ops) + b.epilogue.len())
                .sum(),
        })
        .sum()
}

/// Two-qubit depth of routed operations, swaps counting as one two-qubit gate and a
/// control-flow node as its deepest branch.
pub(crate) fn routed_depth(dag: &CircuitDag, ops: &[RoutedOp], num_physical: usize) -> usize {
    let mut qubit_depth = vec![0usize; num_physical];
    let mut clbit_depth = vec![0usize; dag.num_clbits()];
    let mut depth = 0;
    for op in ops {
        let (qubits, clbits, weight): (&[PhysicalQubit], &[u32], usize) = match op {
            RoutedOp::Swap(pair) => (pair, &[], 1),
            RoutedOp::Gate { node, qubits } => {
                let n = dag.node(*node);
                (qubits, &n.clbits, usize::from(n.kind == OpKind::TwoQubit))
            }
            RoutedOp::ControlFlow {
                node,
                qubits,
                blocks,
            } => {
                let n = dag.node(*node);
                let inner = blocks
                    .iter()
                    .zip(&n.blocks)
                    .map(|(routed, block)| {
                        let mut ops = routed.ops.clone();
                        ops.extend(routed.epilogue.iter().map(|s| RoutedOp::Swap(*s)));
                        routed_depth(&block.circuit, &ops, num_physical)
                    })
                    .max()
                    .unwrap_or(0);
                (qubits, &n.clbits, inner)
            }
        };
        let d = qubits
            .iter()
            .map(|q| qubit_depth[q.index()])
            .chain(clbits.iter().map(|c| clbit_depth[*c as usize]))
            .max()
            .unwrap_or(0)
            + weight;
        for q in qubits {
            qubit_depth[q.index()] = d;
        }
        for c in clbits {
            clbit_depth[*c as usize] = d;
        }
        depth = depth.max(d);
    }
    depth
}

fn ops_to_json(
    dag: &CircuitDag,
    ops: &[RoutedOp],
    local: &dyn Fn(PhysicalQubit) -> u32,
) -> Vec<OpJson> {
    let mut out = Vec::with_capacity(ops.len());
    for op in ops {
        match op {
            RoutedOp::Swap([a, b]) => out.push(OpJson {
                inserted: true,
                ..OpJson::gate("swap", vec![local(*a), local(*b)])
            }),
            RoutedOp::Gate { node, qubits } => {
                let n = dag.node(*node);
                out.push(OpJson {
                    clbits: n.clbits.clone(),
                    ..OpJson::gate(n.label.clone(), qubits.iter().map(|q| local(*q)).collect())
                });
            }
            RoutedOp::ControlFlow {
                node,
                qubits,
                blocks,
            } => {
                let n = dag.node(*node);
                let block_json = blocks
                    .iter()
                    .zip(&n.blocks)
                    .map(|(routed, block)| {
                        let position = |p: PhysicalQubit| {
                            qubits
                                .binary_search(&p)
                                .expect("block stays on the node's qubits")
                                as u32
                        };
                        let mut body = ops_to_json(&block.circuit, &routed.ops, &position);
                        body.extend(routed.epilogue.iter().map(|[a, b]| OpJson {
                            inserted: true,
                            ..OpJson::gate("swap", vec![position(*a), position(*b)])
                        }));
                        BlockJson {
                            qubit_map: qubits.iter().map(|q| local(*q)).collect(),
                            clbit_map: block.clbit_map.clone(),
                            circuit: CircuitJson {
                                num_qubits: qubits.len(),
                                num_clbits: block.circuit.num_clbits(),
                                ops: body,
                                initial_layout: None,
                                final_layout: None,
                            },
                        }
                    })
                    .collect();
                out.push(OpJson {
                    name: n.label.clone(),
                    qubits: qubits.iter().map(|q| local(*q)).collect(),
                    clbits: n.clbits.clone(),
                    blocks: block_json,
                    inserted: false,
                });
            }
        }
    }
    out
}

/// The routed circuit as JSON over physical qubits, with the circuit qubits' initial and final
/// positions attached and inserted swaps marked.
pub fn routed_to_json(dag: &CircuitDag, result: &RoutingResult) -> CircuitJson {
    CircuitJson {
        num_qubits: result.initial_layout.num_qubits(),
        num_clbits: dag.num_clbits(),
        ops: ops_to_json(dag, &result.ops, &|p| p.0),
        initial_layout: Some(result.initial_layout.v2p_indices()[..dag.num_qubits()].to_vec()),
        final_layout: Some(result.final_layout.v2p_indices()[..dag.num_qubits()].to_vec()),
    }
}

/// The routed circuit as a physical-qubit DAG with swaps labelled `swap`.
pub fn routed_to_dag(dag: &CircuitDag, result: &RoutingResult) -> Result<CircuitDag> {
    CircuitDag::try_from(&routed_to_json(dag, result))
}
