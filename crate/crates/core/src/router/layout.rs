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

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::VirtualQubit;
use crate::error::{Result, SabreError};
use crate::topology::PhysicalQubit;

/// A bijection between virtual and physical qubits over the whole device.
///
/// Circuits narrower than the device are padded with idle virtual qubits, so both directions
/// are total.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    v2p: Vec<PhysicalQubit>,
    p2v: Vec<VirtualQubit>,
}

impl Layout {
    pub fn trivial(num_qubits: usize) -> Self {
        Layout {
            v2p: (0..num_qubits as u32).map(PhysicalQubit).collect(),
            p2v: (0..num_qubits as u32).map(VirtualQubit).collect(),
        }
    }

    /// Build from a full `virtual → physical` permutation.
    pub fn from_v2p(v2p: &[u32]) -> Result<Self> {
        Self::from_partial(v2p.len(), v2p)
    }

    /// Place the first `partial.len()` virtual qubits as given and fill the remaining virtual
    /// qubits onto the unused physical qubits in ascending order.
    pub fn from_partial(num_physical: usize, partial: &[u32]) -> Result<Self> {
        if partial.len() > num_physical {
            return Err(SabreError::InvalidLayout(format!(
                "{} virtual qubits do not fit on {num_physical} physical qubits",
                partial.len()
            )));
        }
        let mut used = vec![false; num_physical];
        for (v, &p) in partial.iter().enumerate() {
            if p as usize >= num_physical {
                return Err(SabreError::InvalidLayout(format!(
                    "virtual {v} placed on physical {p}, outside a {num_physical}-qubit device"
                )));
            }
            if std::mem::replace(&mut used[p as usize], true) {
                return Err(SabreError::InvalidLayout(format!(
                    "physical {p} is assigned twice"
                )));
            }
        }
        let mut v2p: Vec<PhysicalQubit> = partial.iter().map(|&p| PhysicalQubit(p)).collect();
        v2p.extend(
            (0..num_physical as u32)
                .filter(|p| !used[*p as usize])
                .map(PhysicalQubit),
        );
        Ok(Self::from_physical(v2p))
    }

    fn from_physical(v2p: Vec<PhysicalQubit>) -> Self {
        let mut p2v = vec![VirtualQubit(0); v2p.len()];
        for (v, p) in v2p.iter().enumerate() {
            p2v[p.index()] = VirtualQubit(v as u32);
        }
        Layout { v2p, p2v }
    }

    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Self {
        let mut v2p: Vec<PhysicalQubit> = (0..num_qubits as u32).map(PhysicalQubit).collect();
        v2p.shuffle(rng);
        Self::from_physical(v2p)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.v2p.len()
    }

    #[inline]
    pub fn phys(&self, v: VirtualQubit) -> PhysicalQubit {
        self.v2p[v.index()]
    }

    #[inline]
    pub fn virt(&self, p: PhysicalQubit) -> VirtualQubit {
        self.p2v[p.index()]
    }

    pub fn v2p(&self) -> &[PhysicalQubit] {
        &self.v2p
    }

    pub fn p2v(&self) -> &[VirtualQubit] {
        &self.p2v
    }

    pub fn v2p_indices(&self) -> Vec<u32> {
        self.v2p.iter().map(|p| p.0).collect()
    }

    /// Exchange the virtual qubits sitting on two physical qubits.
    #[inline]
    pub fn swap_physical(&mut self, a: PhysicalQubit, b: PhysicalQubit) {
        self.p2v.swap(a.index(), b.index());
        self.v2p[self.p2v[a.index()].index()] = a;
        self.v2p[self.p2v[b.index()].index()] = b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn partial_layouts_fill_ascending() {
        let layout = Layout::from_partial(4, &[2, 0]).unwrap();
        assert_eq!(layout.v2p_indices(), vec![2, 0, 1, 3]);
        assert_eq!(layout.virt(PhysicalQubit(2)), VirtualQubit(0));
        assert!(Layout::from_partial(3, &[1, 1]).is_err());
        assert!(Layout::from_partial(3, &[4]).is_err());
    }

    #[test]
    fn swaps_stay_bijective() {
        let mut rng = rand_pcg::Pcg64Mcg::seed_from_u64(3);
        let mut layout = Layout::random(6, &mut rng);
        for (a, b) in [(0, 1), (3, 5), (1, 3)] {
            layout.swap_physical(PhysicalQubit(a), PhysicalQubit(b));
        }
        for v in 0..6 {
            let v = VirtualQubit(v);
            assert_eq!(layout.virt(layout.phys(v)), v);
        }
    }
}
