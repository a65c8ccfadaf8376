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

use thiserror::Error;

pub type Result<T, E = SabreError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SabreError {
    /// Malformed text input; positions are 1-based.
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Input that parsed but does not describe a valid circuit (schema, arity, ranges).
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid coupling graph: {0}")]
    InvalidGraph(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("physical qubits {0} and {1} are not connected")]
    Unreachable(u32, u32),
    /// The circuit cannot be placed onto the device's connected components.
    #[error("infeasible placement: {0}")]
    Infeasible(String),
    #[error("front layer is empty")]
    EmptyFrontLayer,
    #[error("({0}, {1}) is not a coupling edge")]
    NotAnEdge(u32, u32),
    #[error("swap ({0}, {1}) touches no front-layer qubit")]
    NotACandidate(u32, u32),
    #[error("control-flow routing failed: {0}")]
    ControlFlow(String),
    /// A routing invariant was broken; this points at a bug or a corrupted input state.
    #[error("routing invariant violated: {0}")]
    Internal(String),
}
