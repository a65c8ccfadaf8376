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

//! Circuits as dependency DAGs over virtual qubits and classical bits.

mod dag;
mod json;
mod qasm;

pub use dag::{Block, CircuitDag, GateNode, NodeId, OpKind, VirtualQubit};
pub use json::{dag_to_json, parse_circuit_json, BlockJson, CircuitJson, OpJson};
pub use qasm::{dag_to_qasm2, parse_qasm2_subset};
