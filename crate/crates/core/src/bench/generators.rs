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

//! Benchmark circuit generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

use crate::circuit::CircuitDag;
use crate::error::{Result, SabreError};

fn push(dag: &mut CircuitDag, label: &str, qubits: &[u32]) {
    dag.push_gate(label, qubits)
        .expect("generator emits valid gates");
}

/// Quantum Fourier transform: a controlled phase on every pair plus the final reversal swaps.
pub fn gen_qft(n: usize) -> Result<CircuitDag> {
    if n == 0 {
        return Err(SabreError::InvalidConfig(
            "qft needs at least one qubit".into(),
        ));
    }
    let mut dag = CircuitDag::new(n, 0);
    for i in 0..n as u32 {
        push(&mut dag, "h", &[i]);
        for j in i + 1..n as u32 {
            let angle = format!("cp(pi/{})", 1u64 << (j - i).min(63));
            push(&mut dag, &angle, &[j, i]);
        }
    }
    for i in 0..(n / 2) as u32 {
        push(&mut dag, "swap", &[i, n as u32 - 1 - i]);
    }
    Ok(dag)
}

/// Bernstein-Vazirani with the all-ones hidden string: every data qubit drives a CX onto
/// the last qubit.
pub fn gen_bv(n: usize) -> Result<CircuitDag> {
    if n < 2 {
        return Err(SabreError::InvalidConfig(
            "bv needs at least two qubits".into(),
        ));
    }
    let target = n as u32 - 1;
    let mut dag = CircuitDag::new(n, n - 1);
    push(&mut dag, "x", &[target]);
    for q in 0..n as u32 {
        push(&mut dag, "h", &[q]);
    }
    for q in 0..target {
        push(&mut dag, "cx", &[q, target]);
    }
    for q in 0..target {
        push(&mut dag, "h", &[q]);
        dag.push_measure(q, q).expect("valid measure");
    }
    Ok(dag)
}

/// Quantum-volume shape: `depth` layers, each pairing up a random permutation of the qubits
/// with an opaque `su4` gate per pair.
pub fn gen_qv(n: usize, depth: usize, seed: u64) -> Result<CircuitDag> {
    if n < 2 {
        return Err(SabreError::InvalidConfig(
            "qv needs at least two qubits".into(),
        ));
    }
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let mut dag = CircuitDag::new(n, 0);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for _ in 0..depth {
        perm.shuffle(&mut rng);
        for pair in perm.chunks_exact(2) {
            push(&mut dag, "su4", pair);
        }
    }
    Ok(dag)
}

/// Random gate sequence; about a third of the gates act on one qubit.
pub fn gen_random(n: usize, gates: usize, seed: u64) -> Result<CircuitDag> {
    if n < 2 {
        return Err(SabreError::InvalidConfig(
            "random circuits need at least two qubits".into(),
        ));
    }
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let mut dag = CircuitDag::new(n, 0);
    for _ in 0..gates {
        let a = rng.random_range(0..n as u32);
        if rng.random_range(0..3) == 0 {
            push(&mut dag, "rz", &[a]);
        } else {
            let mut b = rng.random_range(0..n as u32 - 1);
            if b >= a {
                b += 1;
            }
            push(&mut dag, "cx", &[a, b]);
        }
    }
    Ok(dag)
}

/// Parse `qft:N`, `bv:N`, `qv:N[:DEPTH]` or `random:N:GATES`. QV depth defaults to N.
pub fn gen_circuit(spec: &str, seed: u64) -> Result<CircuitDag> {
    let bad = || SabreError::InvalidConfig(format!("bad circuit generator '{spec}'"));
    let mut parts = spec.split(':');
    let name = parts.next().ok_or_else(bad)?;
    let args: Vec<usize> = parts
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match (name, args.as_slice()) {
        ("qft", [n]) => gen_qft(*n),
        ("bv", [n]) => gen_bv(*n),
        ("qv", [n]) => gen_qv(*n, *n, seed),
        ("qv", [n, d]) => gen_qv(*n, *d, seed),
        ("random", [n, g]) => gen_random(*n, *g, seed),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::OpKind;

    #[test]
    fn qft_counts() {
        assert_eq!(gen_qft(1).unwrap().count_two_qubit(), 0);
        assert_eq!(gen_qft(4).unwrap().count_two_qubit(), 8);
        let mut pairs = 0;
        for i in 0..10 {
            pairs += (i + 1..10).count();
        }
        assert_eq!(gen_qft(10).unwrap().count_two_qubit(), pairs + 5);
    }

    #[test]
    fn bv_is_a_star() {
        assert_eq!(gen_bv(2).unwrap().count_two_qubit(), 1);
        let dag = gen_bv(11).unwrap();
        let cx: Vec<_> = dag
            .nodes()
            .iter()
            .filter(|n| n.kind == OpKind::TwoQubit)
            .collect();
        assert_eq!(cx.len(), 10);
        let mut sources: Vec<u32> = cx.iter().map(|n| n.qubits[0].0).collect();
        sources.sort_unstable();
        assert_eq!(sources, (0..10).collect::<Vec<_>>());
        assert!(cx.iter().all(|n| n.qubits[1].0 == 10));
    }

    #[test]
    fn qv_layers_are_matchings() {
        assert_eq!(gen_qv(2, 1, 0).unwrap().count_two_qubit(), 1);
        let dag = gen_qv(4, 3, 0).unwrap();
        assert_eq!(dag.count_two_qubit(), 6);
        assert_eq!(dag.two_qubit_depth().unwrap(), 3);
        let dag = gen_qv(7, 5, 9).unwrap();
        for layer in dag.nodes().chunks(3) {
            let mut seen = [false; 7];
            for node in layer {
                for q in &node.qubits {
                    assert!(!std::mem::replace(&mut seen[q.index()], true));
                }
            }
        }
        assert_eq!(gen_qv(7, 5, 9).unwrap().nodes(), dag.nodes());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(gen_circuit("qv:10:10", 3).unwrap().count_two_qubit(), 50);
        assert!(gen_circuit("qft", 0).is_err());
        assert!(gen_circuit("ghz:3", 0).is_err());
    }
}
