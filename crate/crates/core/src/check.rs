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

//! Independent validity checker for routed circuits.
//!
//! The checker works on the JSON forms only. It replays the routed circuit while tracking
//! where every virtual qubit sits, and matches each routed operation against the original
//! operations whose wire predecessors have all been replayed.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::circuit::{CircuitJson, OpJson};
use crate::topology::{CouplingGraph, PhysicalQubit};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Accept branches that all end in the same layout instead of the block entry layout.
    pub allow_common_branch_layout: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Malformed routed file: bad indices, wrong block shapes, missing layouts.
    Structure,
    /// A two-qubit operation on qubits that are not coupled.
    Coupling,
    /// An operation whose operands are not where the tracked layout puts them.
    Mapping,
    /// An operation emitted before one of its predecessors.
    Order,
    /// Original operations that never appear in the routed circuit.
    Missing,
    /// A branch that does not restore the required layout.
    Alignment,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Structure => "structure",
            ViolationKind::Coupling => "coupling",
            ViolationKind::Mapping => "mapping",
            ViolationKind::Order => "order",
            ViolationKind::Missing => "missing",
            ViolationKind::Alignment => "alignment",
        };
        f.write_str(s)
    }
}

/// First violation found. `path` holds routed op indices, alternating with block indices
/// when the op sits inside a control-flow block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub path: Vec<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(
            f,
            "{} violation at op [{}]: {}",
            self.kind,
            path.join("."),
            self.message
        )
    }
}

impl std::error::Error for Violation {}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub ops_matched: usize,
    pub swaps: usize,
}

type Check<T> = std::result::Result<T, Violation>;

fn violation<T>(kind: ViolationKind, path: &[usize], message: impl Into<String>) -> Check<T> {
    Err(Violation {
        kind,
        path: path.to_vec(),
        message: message.into(),
    })
}

/// Check `routed` against `original` on `graph`.
pub fn check_routed(
    original: &CircuitJson,
    routed: &CircuitJson,
    graph: &CouplingGraph,
    options: CheckOptions,
) -> Check<CheckSummary> {
    let n = graph.num_qubits();
    if routed.num_qubits != n {
        return violation(
            ViolationKind::Structure,
            &[],
            format!(
                "routed circuit has {} qubits, device has {n}",
                routed.num_qubits
            ),
        );
    }
    let Some(initial) = &routed.initial_layout else {
        return violation(
            ViolationKind::Structure,
            &[],
            "routed circuit has no initial_layout",
        );
    };
    if initial.len() != original.num_qubits {
        return violation(
            ViolationKind::Structure,
            &[],
            format!(
                "initial_layout places {} qubits, circuit has {}",
                initial.len(),
                original.num_qubits
            ),
        );
    }
    // Extend the layout with placeholder tokens on the free physical qubits.
    let mut used = vec![false; n];
    for &p in initial {
        if p as usize >= n || used[p as usize] {
            return violation(
                ViolationKind::Structure,
                &[],
                "initial_layout is not injective",
            );
        }
        used[p as usize] = true;
    }
    let mut v2p: Vec<usize> = initial.iter().map(|&p| p as usize).collect();
    v2p.extend((0..n).filter(|&p| !used[p]));
    let global: Vec<u32> = (0..n as u32).collect();
    let mut summary = CheckSummary::default();
    let mut path = Vec::new();
    let v2p = replay(
        original,
        &routed.ops,
        v2p,
        &global,
        graph,
        options,
        &mut path,
        &mut summary,
    )?;
    if let Some(final_layout) = &routed.final_layout {
        let tracked: Vec<u32> = v2p[..original.num_qubits]
            .iter()
            .map(|&p| p as u32)
            .collect();
        if *final_layout != tracked {
            return violation(
                ViolationKind::Mapping,
                &[],
                format!(
                    "final_layout {final_layout:?} disagrees with the replayed layout {tracked:?}"
                ),
            );
        }
    }
    Ok(summary)
}

/// Wires of an original op: its qubits and clbits plus everything its blocks map onto.
fn wires(op: &OpJson, num_qubits: usize) -> Vec<usize> {
    let mut w: Vec<usize> = op.qubits.iter().map(|&q| q as usize).collect();
    w.extend(op.clbits.iter().map(|&c| num_qubits + c as usize));
    for b in &op.blocks {
        w.extend(b.qubit_map.iter().map(|&q| q as usize));
        w.extend(b.clbit_map.iter().map(|&c| num_qubits + c as usize));
    }
    w.sort_unstable();
    w.dedup();
    w
}

#[allow(clippy::too_many_arguments)]
fn replay(
    original: &CircuitJson,
    routed: &[OpJson],
    mut v2p: Vec<usize>,
    global: &[u32],
    graph: &CouplingGraph,
    options: CheckOptions,
    path: &mut Vec<usize>,
    summary: &mut CheckSummary,
) -> Check<Vec<usize>> {
    let m = v2p.len();
    let nq = original.num_qubits;
    let num_wires = nq + original.num_clbits;
    let mut op_wires = Vec::with_capacity(original.ops.len());
    let mut queues: Vec<VecDeque<usize>> = vec![VecDeque::new(); num_wires];
    for (i, op) in original.ops.iter().enumerate() {
        let w = wires(op, nq);
        if w.iter().any(|&x| x >= num_wires) {
            return violation(
                ViolationKind::Structure,
                path,
                format!("original op {i} uses a wire outside the circuit"),
            );
        }
        for &x in &w {
            queues[x].push_back(i);
        }
        op_wires.push(w);
    }
    let mut done = vec![false; original.ops.len()];
    let mut p2v = vec![0usize; m];
    for (v, &p) in v2p.iter().enumerate() {
        p2v[p] = v;
    }
    let is_ready = |i: usize, queues: &[VecDeque<usize>]| {
        op_wires[i].iter().all(|&w| queues[w].front() == Some(&i))
    };

    for (k, op) in routed.iter().enumerate() {
        path.push(k);
        if op.qubits.iter().any(|&q| q as usize >= m) {
            return violation(
                ViolationKind::Structure,
                path,
                format!("qubit index out of range in '{}'", op.name),
            );
        }
        if op.qubits.len() == 2 && op.blocks.is_empty() {
            let (a, b) = (global[op.qubits[0] as usize], global[op.qubits[1] as usize]);
            if !graph.contains_edge(PhysicalQubit(a), PhysicalQubit(b)) {
                return violation(
                    ViolationKind::Coupling,
                    path,
                    format!(
                        "'{}' acts on physical qubits {a} and {b}, which are not coupled",
                        op.name
                    ),
                );
            }
        }
        if op.inserted {
            if op.name != "swap" || op.qubits.len() != 2 || !op.blocks.is_empty() {
                return violation(
                    ViolationKind::Structure,
                    path,
                    "inserted op is not a two-qubit swap",
                );
            }
            let (a, b) = (op.qubits[0] as usize, op.qubits[1] as usize);
            p2v.swap(a, b);
            v2p[p2v[a]] = a;
            v2p[p2v[b]] = b;
            summary.swaps += 1;
            path.pop();
            continue;
        }
        // Virtual images of the routed operands. Placeholder tokens cannot be gate operands.
        let images: Vec<usize> = op.qubits.iter().map(|&q| p2v[q as usize]).collect();
        let matches = |i: usize| {
            let o = &original.ops[i];
            if o.name != op.name || o.clbits != op.clbits || o.blocks.len() != op.blocks.len() {
                return false;
            }
            if o.blocks.is_empty() {
                let mut want: Vec<usize> = o.qubits.iter().map(|&q| q as usize).collect();
                let mut got = images.clone();
                if o.name == "barrier" {
                    want.sort_unstable();
                    want.dedup();
                    got.sort_unstable();
                }
                want == got
            } else {
                // The routed op must cover every qubit the original one touches.
                op_wires[i]
                    .iter()
                    .filter(|&&w| w < nq)
                    .all(|w| images.contains(w))
            }
        };
        let candidate =
            (0..original.ops.len()).find(|&i| !done[i] && is_ready(i, &queues) && matches(i));
        let Some(i) = candidate else {
            if let Some(j) = (0..original.ops.len()).find(|&i| !done[i] && matches(i)) {
                return violation(
                    ViolationKind::Order,
                    path,
                    format!(
                        "'{}' (original op {j}) emitted before its predecessors",
                        op.name
                    ),
                );
            }
            return violation(
                ViolationKind::Mapping,
                path,
                format!(
                    "'{}' on virtual qubits {images:?} matches no pending original op",
                    op.name
                ),
            );
        };
        if !op.blocks.is_empty() {
            v2p = replay_control_flow(
                &original.ops[i],
                op,
                v2p,
                &p2v,
                global,
                graph,
                options,
                path,
                summary,
            )?;
            for (v, &p) in v2p.iter().enumerate() {
                p2v[p] = v;
            }
        }
        for &w in &op_wires[i] {
            queues[w].pop_front();
        }
        done[i] = true;
        summary.ops_matched += 1;
        path.pop();
    }
    if let Some(i) = done.iter().position(|d| !d) {
        let missing = done.iter().filter(|d| !**d).count();
        return violation(
            ViolationKind::Missing,
            path,
            format!(
                "{missing} original ops never emitted, first is op {i} '{}'",
                original.ops[i].name
            ),
        );
    }
    Ok(v2p)
}

#[allow(clippy::too_many_arguments)]
fn replay_control_flow(
    original: &OpJson,
    routed: &OpJson,
    v2p: Vec<usize>,
    p2v: &[usize],
    global: &[u32],
    graph: &CouplingGraph,
    options: CheckOptions,
    path: &mut Vec<usize>,
    summary: &mut CheckSummary,
) -> Check<Vec<usize>> {
    let mut common: Option<Vec<usize>> = None;
    for (b, (ob, rb)) in original.blocks.iter().zip(&routed.blocks).enumerate() {
        path.push(b);
        if rb.qubit_map != routed.qubits {
            return violation(
                ViolationKind::Structure,
                path,
                "block qubit_map differs from the op's qubits",
            );
        }
        if rb.clbit_map != ob.clbit_map {
            return violation(
                ViolationKind::Structure,
                path,
                "block clbit_map differs from the original",
            );
        }
        let width = rb.qubit_map.len();
        if rb.circuit.num_qubits != width {
            return violation(
                ViolationKind::Structure,
                path,
                "block width differs from its qubit_map",
            );
        }
        // Block-local tokens: the block's own virtuals first, then the other covered positions.
        let position = |p: usize| rb.qubit_map.iter().position(|&q| q as usize == p);
        let mut entry = Vec::with_capacity(width);
        let mut taken = vec![false; width];
        for &outer in &ob.qubit_map {
            let Some(pos) = position(v2p[outer as usize]) else {
                return violation(
                    ViolationKind::Mapping,
                    path,
                    format!("block virtual qubit {outer} is not covered by the routed block"),
                );
            };
            taken[pos] = true;
            entry.push(pos);
        }
        entry.extend((0..width).filter(|&p| !taken[p]));
        let block_global: Vec<u32> = rb.qubit_map.iter().map(|&q| global[q as usize]).collect();
        let final_v2p = replay(
            &ob.circuit,
            &rb.circuit.ops,
            entry.clone(),
            &block_global,
            graph,
            options,
            path,
            summary,
        )?;
        // Position permutation: the token at entry position p ends at sigma[p].
        let mut sigma = vec![0usize; width];
        for (t, &p) in entry.iter().enumerate() {
            sigma[p] = final_v2p[t];
        }
        if options.allow_common_branch_layout {
            if let Some(c) = &common {
                if *c != sigma {
                    return violation(
                        ViolationKind::Alignment,
                        path,
                        "branches end in different layouts",
                    );
                }
            }
        } else if sigma.iter().enumerate().any(|(p, &s)| p != s) {
            return violation(
                ViolationKind::Alignment,
                path,
                "branch does not restore its entry layout",
            );
        }
        common = Some(sigma);
        path.pop();
    }
    let mut v2p = v2p;
    if let Some(sigma) = common {
        for (p, &s) in sigma.iter().enumerate() {
            let from = routed.qubits[p] as usize;
            v2p[p2v[from]] = routed.qubits[s] as usize;
        }
    }
    Ok(v2p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::OpJson;
    use crate::topology::line;

    fn circuit(n: usize, ops: Vec<OpJson>) -> CircuitJson {
        CircuitJson {
            num_qubits: n,
            num_clbits: 0,
            ops,
            initial_layout: None,
            final_layout: None,
        }
    }

    fn swap(a: u32, b: u32) -> OpJson {
        OpJson {
            inserted: true,
            ..OpJson::gate("swap", vec![a, b])
        }
    }

    fn routed(ops: Vec<OpJson>, initial: Vec<u32>, fin: Vec<u32>) -> CircuitJson {
        CircuitJson {
            initial_layout: Some(initial),
            final_layout: Some(fin),
            ..circuit(3, ops)
        }
    }

    #[test]
    fn accepts_a_swap_then_gate() {
        let orig = circuit(3, vec![OpJson::gate("cx", vec![0, 2])]);
        let out = routed(
            vec![swap(1, 2), OpJson::gate("cx", vec![0, 1])],
            vec![0, 1, 2],
            vec![0, 2, 1],
        );
        let s = check_routed(&orig, &out, &line(3), CheckOptions::default()).unwrap();
        assert_eq!(
            s,
            CheckSummary {
                ops_matched: 1,
                swaps: 1
            }
        );
    }

    #[test]
    fn reports_uncoupled_gate() {
        let orig = circuit(3, vec![OpJson::gate("cx", vec![0, 2])]);
        let out = routed(
            vec![OpJson::gate("cx", vec![0, 2])],
            vec![0, 1, 2],
            vec![0, 1, 2],
        );
        let v = check_routed(&orig, &out, &line(3), CheckOptions::default()).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Coupling);
        assert_eq!(v.path, vec![0]);
    }

    #[test]
    fn reports_order() {
        let orig = circuit(
            3,
            vec![OpJson::gate("h", vec![0]), OpJson::gate("x", vec![0])],
        );
        let out = routed(
            vec![OpJson::gate("x", vec![0]), OpJson::gate("h", vec![0])],
            vec![0, 1, 2],
            vec![0, 1, 2],
        );
        let v = check_routed(&orig, &out, &line(3), CheckOptions::default()).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Order);
    }

    #[test]
    fn reports_missing_and_final_layout() {
        let orig = circuit(3, vec![OpJson::gate("h", vec![0])]);
        let out = routed(vec![], vec![0, 1, 2], vec![0, 1, 2]);
        let v = check_routed(&orig, &out, &line(3), CheckOptions::default()).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Missing);
        let out = routed(
            vec![swap(0, 1), OpJson::gate("h", vec![1])],
            vec![0, 1, 2],
            vec![0, 1, 2],
        );
        let v = check_routed(&orig, &out, &line(3), CheckOptions::default()).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Mapping);
    }
}
