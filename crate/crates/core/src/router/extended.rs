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

use crate::topology::{DistanceMatrix, PhysicalQubit};

/// Upcoming two-qubit gates used for lookahead, stored as per-qubit partner lists.
///
/// A qubit may appear in several gates. Scoring a swap touches only the partner lists of its
/// two endpoints.
#[derive(Clone, Debug, Default)]
pub struct ExtendedSet {
    qubits: Vec<Vec<PhysicalQubit>>,
    touched: Vec<PhysicalQubit>,
    len: usize,
}

impl ExtendedSet {
    pub fn new(num_qubits: usize) -> Self {
        ExtendedSet {
            qubits: vec![Vec::new(); num_qubits],
            touched: Vec::new(),
            len: 0,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, qubits: [PhysicalQubit; 2]) {
        let [a, b] = qubits;
        for (x, y) in [(a, b), (b, a)] {
            if self.qubits[x.index()].is_empty() {
                self.touched.push(x);
            }
            self.qubits[x.index()].push(y);
        }
        self.len += 1;
    }

    pub fn clear(&mut self) {
        for q in self.touched.drain(..) {
            self.qubits[q.index()].clear();
        }
        self.len = 0;
    }

    #[inline]
    pub fn partners(&self, qubit: PhysicalQubit) -> &[PhysicalQubit] {
        &self.qubits[qubit.index()]
    }

    /// Change in total extended-set distance if the swap were applied.
    #[inline]
    pub fn score(&self, swap: [PhysicalQubit; 2], dist: &DistanceMatrix) -> f64 {
        let [a, b] = swap;
        let mut total = 0.0;
        for &c in &self.qubits[a.index()] {
            if c != b {
                total += dist.score(b, c) - dist.score(a, c);
            }
        }
        for &c in &self.qubits[b.index()] {
            if c != a {
                total += dist.score(a, c) - dist.score(b, c);
            }
        }
        total
    }

    pub fn total_score(&self, dist: &DistanceMatrix) -> f64 {
        let mut total = 0.0;
        for &a in &self.touched {
            for &b in &self.qubits[a.index()] {
                total += dist.score(a, b);
            }
        }
        total / 2.0
    }

    /// Relabel the stored gates for a swap of the states on `a` and `b`.
    pub fn apply_swap(&mut self, swap: [PhysicalQubit; 2]) {
        let [a, b] = swap;
        let relabel = |q: PhysicalQubit| {
            if q == a {
                b
            } else if q == b {
                a
            } else {
                q
            }
        };
        let mut lists: Vec<PhysicalQubit> = self.qubits[a.index()]
            .iter()
            .chain(&self.qubits[b.index()])
            .copied()
            .chain([a, b])
            .collect();
        lists.sort_unstable();
        lists.dedup();
        for q in lists {
            for partner in &mut self.qubits[q.index()] {
                *partner = relabel(*partner);
            }
        }
        let (a_empty, b_empty) = (
            self.qubits[a.index()].is_empty(),
            self.qubits[b.index()].is_empty(),
        );
        self.qubits.swap(a.index(), b.index());
        if a_empty != b_empty {
            let (now_full, now_empty) = if a_empty { (a, b) } else { (b, a) };
            if let Some(slot) = self.touched.iter_mut().find(|q| **q == now_empty) {
                *slot = now_full;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::line;

    fn p(i: u32) -> PhysicalQubit {
        PhysicalQubit(i)
    }

    #[test]
    fn swap_relabels_shared_partners() {
        let dist = DistanceMatrix::new(&line(5));
        let mut set = ExtendedSet::new(5);
        set.push([p(0), p(3)]);
        set.push([p(1), p(3)]);
        set.push([p(0), p(1)]);
        set.push([p(2), p(4)]);
        let before = set.total_score(&dist);
        let delta = set.score([p(0), p(1)], &dist);
        set.apply_swap([p(0), p(1)]);
        assert!((set.total_score(&dist) - before - delta).abs() < 1e-12);
        let mut a = set.partners(p(0)).to_vec();
        a.sort();
        assert_eq!(a, vec![p(1), p(3)]);
        let delta = set.score([p(2), p(4)], &dist);
        let before = set.total_score(&dist);
        set.apply_swap([p(2), p(4)]);
        assert!((set.total_score(&dist) - before - delta).abs() < 1e-12);
        set.apply_swap([p(4), p(3)]);
        set.clear();
        assert!(set.is_empty());
        assert!((0..5).all(|q| set.partners(p(q)).is_empty()));
    }
}
