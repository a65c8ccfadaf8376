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

//! The JSON circuit format, which can carry nested control-flow blocks.

use serde::{Deserialize, Serialize};

use crate::circuit::{Block, CircuitDag, OpKind, VirtualQubit};
use crate::error::{Result, SabreError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitJson {
    pub num_qubits: usize,
    #[serde(default)]
    pub num_clbits: usize,
    pub ops: Vec<OpJson>,
    /// Present on routed output: `initial_layout[v]` is the physical qubit of virtual `v`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_layout: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_layout: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpJson {
    pub name: String,
    #[serde(default)]
    pub qubits: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clbits: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<BlockJson>,
    /// Marks swaps added by routing.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inserted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    pub qubit_map: Vec<u32>,
    #[serde(default)]
    pub clbit_map: Vec<u32>,
    pub circuit: CircuitJson,
}

impl OpJson {
    pub fn gate(name: impl Into<String>, qubits: Vec<u32>) -> Self {
        OpJson {
            name: name.into(),
            qubits,
            clbits: Vec::new(),
            blocks: Vec::new(),
            inserted: false,
        }
    }
}

pub fn parse_circuit_json(text: &str) -> Result<CircuitDag> {
    let json: CircuitJson = serde_json::from_str(text)
        .map_err(|e| SabreError::InvalidCircuit(format!("schema violation: {e}")))?;
    json_to_dag(&json)
}

impl TryFrom<&CircuitJson> for CircuitDag {
    type Error = SabreError;

    fn try_from(json: &CircuitJson) -> Result<Self> {
        json_to_dag(json)
    }
}

fn json_to_dag(json: &CircuitJson) -> Result<CircuitDag> {
    let mut dag = CircuitDag::new(json.num_qubits, json.num_clbits);
    for (i, op) in json.ops.iter().enumerate() {
        let at = |e: SabreError| match e {
            SabreError::InvalidCircuit(m) => SabreError::InvalidCircuit(format!("op {i}: {m}")),
            other => other,
        };
        if !op.blocks.is_empty() {
            let blocks = op
                .blocks
                .iter()
                .map(|b| {
                    Ok(Block {
                        qubit_map: b.qubit_map.iter().map(|q| VirtualQubit(*q)).collect(),
                        clbit_map: b.clbit_map.clone(),
                        circuit: json_to_dag(&b.circuit)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map_err(at)?;
            let declared = (!op.qubits.is_empty()).then_some(op.qubits.as_slice());
            dag.push_control_flow(op.name.clone(), &op.clbits, blocks, declared)
                .map_err(at)?;
            continue;
        }
        match op.name.as_str() {
            "measure" => {
                if op.qubits.len() != 1 || op.clbits.len() != 1 {
                    return Err(at(SabreError::InvalidCircuit(
                        "measure takes exactly one qubit and one clbit".into(),
                    )));
                }
                dag.push_measure(op.qubits[0], op.clbits[0]).map_err(at)?;
            }
            "barrier" => {
                dag.push_barrier(&op.qubits).map_err(at)?;
            }
            _ => {
                dag.push_gate_with_clbits(op.name.clone(), &op.qubits, &op.clbits)
                    .map_err(at)?;
            }
        }
    }
    Ok(dag)
}

/// Convert a DAG to its JSON form; control-flow nodes list their full qubit union.
pub fn dag_to_json(dag: &CircuitDag) -> CircuitJson {
    let ops = dag
        .nodes()
        .iter()
        .map(|node| OpJson {
            name: node.label.clone(),
            qubits: node.qubits.iter().map(|q| q.0).collect(),
            clbits: node.clbits.clone(),
            blocks: if node.kind == OpKind::ControlFlow {
                node.blocks
                    .iter()
                    .map(|b| BlockJson {
                        qubit_map: b.qubit_map.iter().map(|q| q.0).collect(),
                        clbit_map: b.clbit_map.clone(),
                        circuit: dag_to_json(&b.circuit),
                    })
                    .collect()
            } else {
                Vec::new()
            },
            inserted: false,
        })
        .collect();
    CircuitJson {
        num_qubits: dag.num_qubits(),
        num_clbits: dag.num_clbits(),
        ops,
        initial_layout: None,
        final_layout: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::NodeId;

    const IF_ELSE: &str = r#"{
        "num_qubits": 2, "num_clbits": 2,
        "ops": [
            {"name": "h", "qubits": [0]},
            {"name": "measure", "qubits": [0], "clbits": [0]},
            {"name": "if_else", "qubits": [1], "clbits": [0], "blocks": [
                {"qubit_map": [1], "circuit": {"num_qubits": 1, "ops": [{"name": "x", "qubits": [0]}]}},
                {"qubit_map": [1], "circuit": {"num_qubits": 1, "ops": []}}
            ]},
            {"name": "measure", "qubits": [1], "clbits": [1]}
        ]
    }"#;

    #[test]
    fn if_else_depends_on_predicate_bit() {
        let dag = parse_circuit_json(IF_ELSE).unwrap();
        assert_eq!(dag.num_nodes(), 4);
        let cf = dag.node(NodeId(2));
        assert_eq!(cf.kind, OpKind::ControlFlow);
        assert_eq!(dag.predecessors(NodeId(2)), &[NodeId(1)]);
        assert_eq!(dag.predecessors(NodeId(3)), &[NodeId(2)]);
        assert_eq!(cf.clbits, vec![0]);
    }

    #[test]
    fn empty_circuit() {
        let dag = parse_circuit_json(r#"{"num_qubits":1,"num_clbits":0,"ops":[]}"#).unwrap();
        assert!(dag.is_empty());
    }

    #[test]
    fn union_of_block_qubits() {
        let text = r#"{"num_qubits": 3, "num_clbits": 1, "ops": [
            {"name": "if_else", "clbits": [0], "blocks": [
                {"qubit_map": [1], "circuit": {"num_qubits": 1, "ops": [{"name": "x", "qubits": [0]}]}},
                {"qubit_map": [2], "circuit": {"num_qubits": 1, "ops": [{"name": "x", "qubits": [0]}]}}
            ]}]}"#;
        let dag = parse_circuit_json(text).unwrap();
        let qubits: Vec<u32> = dag.node(NodeId(0)).qubits.iter().map(|q| q.0).collect();
        assert_eq!(qubits, vec![1, 2]);
    }

    #[test]
    fn rejects_undeclared_outer_qubit() {
        let text = r#"{"num_qubits": 2, "ops": [
            {"name": "if_else", "blocks": [
                {"qubit_map": [5], "circuit": {"num_qubits": 1, "ops": []}}]}]}"#;
        assert!(matches!(
            parse_circuit_json(text),
            Err(SabreError::InvalidCircuit(_))
        ));
        let text = r#"{"num_qubits": 3, "ops": [
            {"name": "if_else", "qubits": [0], "blocks": [
                {"qubit_map": [1], "circuit": {"num_qubits": 1, "ops": []}}]}]}"#;
        assert!(parse_circuit_json(text).is_err());
    }

    #[test]
    fn rejects_schema_violations() {
        assert!(parse_circuit_json(r#"{"num_qubits": 1}"#).is_err());
        assert!(parse_circuit_json(r#"{"num_qubits": 1, "ops": [{"qubits": [0]}]}"#).is_err());
        assert!(parse_circuit_json(r#"{"num_qubits": 1, "ops": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let dag = parse_circuit_json(IF_ELSE).unwrap();
        let text = serde_json::to_string(&dag_to_json(&dag)).unwrap();
        assert_eq!(parse_circuit_json(&text).unwrap(), dag);
    }
}
