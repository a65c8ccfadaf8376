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

use proptest::prelude::*;
use sabre_core::circuit::{dag_to_qasm2, parse_qasm2_subset, CircuitDag, NodeId};

#[derive(Clone, Debug)]
enum Op {
    One(u32),
    Two(u32, u32),
    Measure(u32, u32),
    Barrier(Vec<u32>),
    Conditional(u32, u32),
}

fn op(nq: u32, nc: u32) -> impl Strategy<Value = Op> {
    prop_oneof![
        (0..nq).prop_map(Op::One),
        (0..nq, 1..nq).prop_map(move |(a, d)| Op::Two(a, (a + d) % nq)),
        (0..nq, 0..nc).prop_map(|(q, c)| Op::Measure(q, c)),
        proptest::sample::subsequence((0..nq).collect::<Vec<_>>(), 1..=nq as usize)
            .prop_map(Op::Barrier),
        (0..nq, 0..nc).prop_map(|(q, c)| Op::Conditional(q, c)),
    ]
}

fn circuit(max_ops: usize) -> impl Strategy<Value = (u32, u32, Vec<Op>)> {
    (2u32..8, 1u32..3).prop_flat_map(move |(nq, nc)| {
        (
            Just(nq),
            Just(nc),
            prop::collection::vec(op(nq, nc), 0..max_ops),
        )
    })
}

fn build(nq: u32, nc: u32, ops: &[Op]) -> CircuitDag {
    let mut dag = CircuitDag::new(nq as usize, nc as usize);
    for op in ops {
        match op {
            Op::One(q) => dag.push_gate("h", &[*q]),
            Op::Two(a, b) => dag.push_gate("cx", &[*a, *b]),
            Op::Measure(q, c) => dag.push_measure(*q, *c),
            Op::Barrier(qs) => dag.push_barrier(qs),
            Op::Conditional(q, c) => dag.push_gate_with_clbits("x", &[*q], &[*c]),
        }
        .unwrap();
    }
    dag
}

/// Wires touched by an op, qubits first then clbits offset by the qubit count.
fn wires(nq: u32, op: &Op) -> Vec<u32> {
    match op {
        Op::One(q) => vec![*q],
        Op::Two(a, b) => vec![*a, *b],
        Op::Measure(q, c) | Op::Conditional(q, c) => vec![*q, nq + c],
        Op::Barrier(qs) => qs.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Iterating front_nodes yields every node once, and op i comes after every earlier op
    // sharing a wire with it.
    #[test]
    fn front_nodes_give_a_topological_order((nq, nc, ops) in circuit(200)) {
        let dag = build(nq, nc, &ops);
        let mut executed = HashSet::new();
        let mut order = Vec::new();
        loop {
            let front = dag.front_nodes(&executed);
            if front.is_empty() {
                break;
            }
            // Brute-force scan: ready means no earlier unexecuted op on a shared wire.
            let brute: Vec<NodeId> = (0..ops.len())
                .filter(|&i| !executed.contains(&NodeId(i as u32)))
                .filter(|&i| {
                    let w = wires(nq, &ops[i]);
                    (0..i).all(|j| executed.contains(&NodeId(j as u32)) || wires(nq, &ops[j]).iter().all(|x| !w.contains(x)))
                })
                .map(|i| NodeId(i as u32))
                .collect();
            prop_assert_eq!(&front, &brute);
            executed.extend(front.iter().copied());
            order.extend(front);
        }
        prop_assert_eq!(order.len(), ops.len());
    }

    #[test]
    fn two_qubit_depth_matches_layering((nq, nc, ops) in circuit(120)) {
        let dag = build(nq, nc, &ops);
        // Oracle: longest chain of two-qubit ops where consecutive ops share a wire,
        // computed from pairwise wire overlap rather than per-wire registers.
        let mut longest = vec![0usize; ops.len()];
        for i in 0..ops.len() {
            let w = wires(nq, &ops[i]);
            let before = (0..i)
                .filter(|&j| wires(nq, &ops[j]).iter().any(|x| w.contains(x)))
                .map(|j| longest[j])
                .max()
                .unwrap_or(0);
            longest[i] = before + usize::from(matches!(ops[i], Op::Two(..)));
        }
        prop_assert_eq!(dag.two_qubit_depth().unwrap(), longest.into_iter().max().unwrap_or(0));
    }

    #[test]
    fn qasm_round_trip((nq, nc, ops) in circuit(60)) {
        let ops: Vec<Op> = ops.into_iter().filter(|o| !matches!(o, Op::Conditional(..))).collect();
        let dag = build(nq, nc, &ops);
        let text = dag_to_qasm2(&dag).unwrap();
        let back = parse_qasm2_subset(&text).unwrap();
        prop_assert_eq!(back.nodes(), dag.nodes());
        prop_assert_eq!(dag_to_qasm2(&back).unwrap(), text);
    }

    #[test]
    fn double_reversal_is_identity((nq, nc, ops) in circuit(80)) {
        let dag = build(nq, nc, &ops);
        let twice = dag.reversed().reversed();
        prop_assert_eq!(twice.nodes(), dag.nodes());
        for i in 0..dag.num_nodes() {
            let id = NodeId(i as u32);
            prop_assert_eq!(twice.predecessors(id), dag.predecessors(id));
        }
    }
}
