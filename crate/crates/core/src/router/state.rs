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

//! The swap-insertion main loop.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

use super::extended::ExtendedSet;
use super::front::FrontLayer;
use super::heuristic::{
    critical_component, critical_path_ranks, HeuristicConfig, Selection, SetScaling,
};
use super::result::{count_swaps, routed_depth, RoutedBlock, RoutedOp, RoutingResult};
use super::Layout;
use crate::circuit::{CircuitDag, NodeId, OpKind};
use crate::control_flow::{realize_permutation, Permutation};
use crate::error::{Result, SabreError};
use crate::router::heuristic::BlockAlignment;
use crate::topology::{shortest_path, PhysicalQubit, RoutingTarget, UNREACHABLE};

/// Depth registers count a swap as three CNOTs.
pub const SWAP_DEPTH: u32 = 3;

/// Everything a routing pass reads but never modifies.
#[derive(Clone, Copy, Debug)]
pub struct RoutingProblem<'a> {
    pub dag: &'a CircuitDag,
    pub target: &'a RoutingTarget,
    pub heuristic: &'a HeuristicConfig,
}

/// Route `problem.dag` from `initial` with a seeded RNG.
pub fn route(problem: RoutingProblem<'_>, initial: Layout, seed: u64) -> Result<RoutingResult> {
    RouterState::new(problem, initial, seed)?.run()
}

/// Mix a parent seed with two indices into a child seed.
pub(crate) fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z =
        seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug)]
struct DepthUndo {
    a: u32,
    b: u32,
    max: u32,
}

/// Mutable state of one routing pass.
///
/// Construction routes everything that is routable under the initial layout, so a fresh state
/// is either finished or blocked on a non-empty front layer.
pub struct RouterState<'a> {
    dag: &'a CircuitDag,
    target: &'a RoutingTarget,
    cfg: &'a HeuristicConfig,
    ranks: Vec<u32>,
    initial_layout: Layout,
    layout: Layout,
    front: FrontLayer,
    extended: ExtendedSet,
    required_predecessors: Vec<u32>,
    decay: Vec<f64>,
    decay_steps: usize,
    qubit_depth: Vec<u32>,
    clbit_depth: Vec<u32>,
    max_depth: u32,
    depth_undo: Vec<DepthUndo>,
    swap_trace: Vec<[PhysicalQubit; 2]>,
    ops: Vec<RoutedOp>,
    routed: usize,
    threshold: usize,
    rng: Pcg64Mcg,
    seed: u64,
    release_valve_fires: usize,
    candidates: Vec<[PhysicalQubit; 2]>,
    best: Vec<[PhysicalQubit; 2]>,
}

impl<'a> RouterState<'a> {
    pub fn new(problem: RoutingProblem<'a>, initial: Layout, seed: u64) -> Result<Self> {
        problem.heuristic.validate()?;
        let n = problem.target.num_qubits();
        if initial.num_qubits() != n {
            return Err(SabreError::InvalidLayout(format!(
                "layout covers {} qubits but the device has {n}",
                initial.num_qubits()
            )));
        }
        if problem.dag.num_qubits() > n {
            return Err(SabreError::Infeasible(format!(
                "circuit has {} qubits but the device has {n}",
                problem.dag.num_qubits()
            )));
        }
        let ranks = if problem.heuristic.critical_path.is_some() {
            critical_path_ranks(problem.dag)
        } else {
            Vec::new()
        };
        let required_predecessors = (0..problem.dag.num_nodes())
            .map(|i| problem.dag.predecessors(NodeId(i as u32)).len() as u32)
            .collect();
        let mut state = RouterState {
            dag: problem.dag,
            target: problem.target,
            cfg: problem.heuristic,
            ranks,
            initial_layout: initial.clone(),
            layout: initial,
            front: FrontLayer::new(n),
            extended: ExtendedSet::new(n),
            required_predecessors,
            decay: vec![1.0; n],
            decay_steps: 0,
            qubit_depth: vec![0; n],
            clbit_depth: vec![0; problem.dag.num_clbits()],
            max_depth: 0,
            depth_undo: Vec::new(),
            swap_trace: Vec::new(),
            ops: Vec::with_capacity(problem.dag.num_nodes()),
            routed: 0,
            threshold: problem.heuristic.release_valve_threshold.unwrap_or(10 * n),
            rng: Pcg64Mcg::seed_from_u64(seed),
            seed,
            release_valve_fires: 0,
            candidates: Vec::new(),
            best: Vec::new(),
        };
        let roots: Vec<NodeId> = (0..state.dag.num_nodes() as u32)
            .map(NodeId)
            .filter(|id| state.required_predecessors[id.index()] == 0)
            .collect();
        state.update_route(roots)?;
        state.populate_extended_set();
        Ok(state)
    }

    #[inline]
    pub fn is_done(&self) -> bool {
        self.front.is_empty()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn front(&self) -> &FrontLayer {
        &self.front
    }

    pub fn extended(&self) -> &ExtendedSet {
        &self.extended
    }

    pub fn decay_registers(&self) -> &[f64] {
        &self.decay
    }

    /// Per-qubit depth of the routed prefix, counting swaps as three two-qubit gates.
    pub fn depth_registers(&self) -> &[u32] {
        &self.qubit_depth
    }

    pub fn swap_trace(&self) -> &[[PhysicalQubit; 2]] {
        &self.swap_trace
    }

    /// Operations committed so far. Swaps still in the trace are not included.
    pub fn routed_ops(&self) -> &[RoutedOp] {
        &self.ops
    }

    pub fn release_valve_fires(&self) -> usize {
        self.release_valve_fires
    }

    #[inline]
    fn dist(&self, a: PhysicalQubit, b: PhysicalQubit) -> f64 {
        self.target.distance.score(a, b)
    }

    fn basic_weight(&self) -> f64 {
        match &self.cfg.basic {
            Some(b) => match b.scale {
                SetScaling::Constant => b.weight,
                SetScaling::Size => b.weight / self.front.len().max(1) as f64,
            },
            None => 0.0,
        }
    }

    fn lookahead_weight(&self) -> f64 {
        match &self.cfg.lookahead {
            Some(l) if !self.extended.is_empty() => match l.scale {
                SetScaling::Constant => l.weight,
                SetScaling::Size => l.weight / self.extended.len() as f64,
            },
            _ => 0.0,
        }
    }

    /// The distance heuristic of the current state: weighted front and extended-set sums.
    pub fn score_absolute(&self) -> f64 {
        let mut total = 0.0;
        if self.cfg.basic.is_some() {
            total += self.basic_weight() * self.front.total_score(&self.target.distance);
        }
        if self.cfg.lookahead.is_some() {
            total += self.lookahead_weight() * self.extended.total_score(&self.target.distance);
        }
        total
    }

    fn check_swap(&self, swap: [PhysicalQubit; 2]) -> Result<()> {
        let [a, b] = swap;
        if self.front.is_empty() {
            return Err(SabreError::EmptyFrontLayer);
        }
        if !self.target.graph.contains_edge(a, b) {
            return Err(SabreError::NotAnEdge(a.0, b.0));
        }
        if !self.front.is_active(a) && !self.front.is_active(b) {
            return Err(SabreError::NotACandidate(a.0, b.0));
        }
        Ok(())
    }

    /// Change of [`score_absolute`](Self::score_absolute) if `swap` were applied, computed
    /// from the two endpoints only.
    pub fn score_swap_relative(&self, swap: [PhysicalQubit; 2]) -> Result<f64> {
        self.check_swap(swap)?;
        Ok(self.relative(swap))
    }

    #[inline]
    fn relative(&self, swap: [PhysicalQubit; 2]) -> f64 {
        let mut total = 0.0;
        if self.cfg.basic.is_some() {
            total += self.basic_weight() * self.front.score(swap, &self.target.distance);
        }
        if self.cfg.lookahead.is_some() && !self.extended.is_empty() {
            total += self.lookahead_weight() * self.extended.score(swap, &self.target.distance);
        }
        total
    }

    /// Larger of the two endpoint decay registers.
    #[inline]
    pub fn decay_multiplier(&self, swap: [PhysicalQubit; 2]) -> f64 {
        self.decay[swap[0].index()].max(self.decay[swap[1].index()])
    }

    /// Growth of the routed circuit's overall depth if `swap` were applied and the front
    /// gates it makes adjacent were then routed.
    pub fn depth_delta(&self, swap: [PhysicalQubit; 2]) -> u32 {
        let [a, b] = swap;
        let base = self.qubit_depth[a.index()].max(self.qubit_depth[b.index()]) + SWAP_DEPTH;
        let mut new_max = self.max_depth.max(base);
        for (from, to) in [(a, b), (b, a)] {
            if let Some((_, c)) = self.front.gate_on(from) {
                if c != to && self.target.graph.contains_edge(to, c) {
                    new_max = new_max.max(base.max(self.qubit_depth[c.index()]) + 1);
                }
            }
        }
        new_max - self.max_depth
    }

    /// The depth score term, `weight * delta / 3` scaled as configured.
    pub fn depth_component(&self, swap: [PhysicalQubit; 2]) -> f64 {
        match &self.cfg.depth {
            Some(d) => {
                let weight = match d.scale {
                    SetScaling::Constant => d.weight,
                    SetScaling::Size => d.weight / self.front.len().max(1) as f64,
                };
                weight * self.depth_delta(swap) as f64 / SWAP_DEPTH as f64
            }
            None => 0.0,
        }
    }

    /// Bonus for moving the operands of ranked front gates closer together.
    pub fn critical_bonus(&self, swap: [PhysicalQubit; 2]) -> f64 {
        let Some(c) = &self.cfg.critical_path else {
            return 0.0;
        };
        let [a, b] = swap;
        let mut bonus = 0.0;
        for (from, to) in [(a, b), (b, a)] {
            if let Some((node, other)) = self.front.gate_on(from) {
                if other != to && self.dist(to, other) < self.dist(from, other) {
                    bonus += c.weight * critical_component(c.alpha, self.ranks[node.index()]);
                }
            }
        }
        bonus
    }

    #[inline]
    fn composite(&self, swap: [PhysicalQubit; 2], absolute: f64) -> f64 {
        let additive = self.relative(swap) + self.depth_component(swap);
        let score = if self.cfg.decay.is_some() {
            // The multiplier scales the post-swap score; applied to a bare difference it would
            // reward recently used qubits whenever the difference is negative.
            self.decay_multiplier(swap) * (absolute + additive)
        } else {
            additive
        };
        score - self.critical_bonus(swap)
    }

    /// Full score of one candidate swap under every enabled component.
    pub fn swap_score(&self, swap: [PhysicalQubit; 2]) -> Result<f64> {
        self.check_swap(swap)?;
        let absolute = if self.cfg.decay.is_some() {
            self.score_absolute()
        } else {
            0.0
        };
        Ok(self.composite(swap, absolute))
    }

    /// Coupling edges with at least one endpoint in the front layer, each listed once.
    pub fn candidate_swaps(&self) -> Vec<[PhysicalQubit; 2]> {
        let mut out = Vec::new();
        self.fill_candidates(&mut out);
        out
    }

    fn fill_candidates(&self, out: &mut Vec<[PhysicalQubit; 2]>) {
        out.clear();
        for (_, &[a, b]) in self.front.iter() {
            for p in [a, b] {
                for &n in self.target.graph.neighbors(p) {
                    if n > p || !self.front.is_active(n) {
                        out.push([p, n]);
                    }
                }
            }
        }
    }

    fn choose_best_swap(&mut self) -> Result<[PhysicalQubit; 2]> {
        let mut candidates = std::mem::take(&mut self.candidates);
        let mut best = std::mem::take(&mut self.best);
        self.fill_candidates(&mut candidates);
        if candidates.is_empty() {
            return Err(SabreError::Internal(
                "front layer has no candidate swaps".into(),
            ));
        }
        let absolute = if self.cfg.decay.is_some() {
            self.score_absolute()
        } else {
            0.0
        };
        let epsilon = self.cfg.best_epsilon;
        let mut min_score = f64::INFINITY;
        best.clear();
        for &swap in &candidates {
            let score = self.composite(swap, absolute);
            if score - min_score < -epsilon {
                min_score = score;
                best.clear();
                best.push(swap);
            } else if (score - min_score).abs() <= epsilon {
                best.push(swap);
            }
        }
        let chosen = match self.cfg.selection {
            Selection::FirstMin => best[0],
            Selection::RandomTieBreak => best[self.rng.random_range(0..best.len())],
        };
        self.candidates = candidates;
        self.best = best;
        Ok(chosen)
    }

    /// Apply a swap to the layout, front layer, extended set and depth registers, and append
    /// it to the uncommitted trace.
    pub fn apply_swap(&mut self, swap: [PhysicalQubit; 2]) -> Result<()> {
        let [a, b] = swap;
        if !self.target.graph.contains_edge(a, b) {
            return Err(SabreError::NotAnEdge(a.0, b.0));
        }
        self.apply_swap_unchecked(swap);
        Ok(())
    }

    fn apply_swap_unchecked(&mut self, swap: [PhysicalQubit; 2]) {
        let [a, b] = swap;
        self.front.apply_swap(swap);
        self.extended.apply_swap(swap);
        self.layout.swap_physical(a, b);
        let (da, db) = (self.qubit_depth[a.index()], self.qubit_depth[b.index()]);
        self.depth_undo.push(DepthUndo {
            a: da,
            b: db,
            max: self.max_depth,
        });
        let d = da.max(db) + SWAP_DEPTH;
        self.qubit_depth[a.index()] = d;
        self.qubit_depth[b.index()] = d;
        self.max_depth = self.max_depth.max(d);
        self.swap_trace.push(swap);
    }

    fn undo_trace(&mut self) {
        while let Some(swap) = self.swap_trace.pop() {
            let [a, b] = swap;
            self.front.apply_swap(swap);
            self.extended.apply_swap(swap);
            self.layout.swap_physical(a, b);
            let undo = self
                .depth_undo
                .pop()
                .expect("one undo record per traced swap");
            self.qubit_depth[a.index()] = undo.a;
            self.qubit_depth[b.index()] = undo.b;
            self.max_depth = undo.max;
        }
    }

    fn decay_step(&mut self, swap: [PhysicalQubit; 2]) {
        if let Some(decay) = &self.cfg.decay {
            self.decay_steps += 1;
            if self.decay_steps >= decay.reset {
                self.decay.fill(1.0);
                self.decay_steps = 0;
            } else {
                self.decay[swap[0].index()] += decay.increment;
                self.decay[swap[1].index()] += decay.increment;
            }
        }
    }

    fn adjacent(&self, a: PhysicalQubit, b: PhysicalQubit) -> bool {
        self.target.graph.contains_edge(a, b)
    }

    /// One iteration of the main loop: insert swaps until some front gate becomes routable
    /// (or the release valve fires), then route everything that follows from it.
    pub fn step(&mut self) -> Result<()> {
        if self.front.is_empty() {
            return Ok(());
        }
        let mut routable: Vec<NodeId> = Vec::with_capacity(2);
        while routable.is_empty() && self.swap_trace.len() <= self.threshold {
            let swap = self.choose_best_swap()?;
            self.apply_swap_unchecked(swap);
            for q in [swap[1], swap[0]] {
                if let Some(node) = self.front.routable_on(q, |x, y| self.adjacent(x, y)) {
                    if !routable.contains(&node) {
                        routable.push(node);
                    }
                }
            }
            self.decay_step(swap);
        }
        if routable.is_empty() {
            routable = self.release_valve()?;
        }
        for node in &routable {
            self.front.remove(*node);
        }
        self.update_route(routable)?;
        self.extended.clear();
        self.populate_extended_set();
        if self.cfg.decay.is_some() {
            self.decay.fill(1.0);
            self.decay_steps = 0;
        }
        Ok(())
    }

    /// Undo the fruitless swaps and walk the closest front gate together along a shortest
    /// path, moving both ends so the added depth is split.
    fn release_valve(&mut self) -> Result<Vec<NodeId>> {
        self.release_valve_fires += 1;
        self.undo_trace();
        let (node, [a, b]) = self
            .front
            .iter()
            .map(|(n, q)| (*n, *q))
            .min_by_key(|(_, [a, b])| self.target.distance.raw(*a, *b))
            .ok_or(SabreError::EmptyFrontLayer)?;
        let path = shortest_path(&self.target.graph, a, b)?;
        let split = path.len() / 2;
        let mut swaps = Vec::with_capacity(path.len().saturating_sub(2));
        for i in 0..split {
            swaps.push([path[i], path[i + 1]]);
        }
        for i in 0..split.saturating_sub(1) {
            let end = path.len() - 1 - i;
            swaps.push([path[end], path[end - 1]]);
        }
        for swap in swaps {
            self.apply_swap_unchecked(swap);
        }
        let mut routable = vec![node];
        // Swaps along the path can incidentally make other front gates adjacent too.
        for (other, &[x, y]) in self.front.iter() {
            if *other != node && self.adjacent(x, y) {
                routable.push(*other);
            }
        }
        if !self.adjacent(
            self.front.get(node).expect("front")[0],
            self.front.get(node).expect("front")[1],
        ) {
            return Err(SabreError::Internal(
                "release valve left its gate non-adjacent".into(),
            ));
        }
        Ok(routable)
    }

    fn commit_trace(&mut self) {
        self.ops
            .extend(self.swap_trace.drain(..).map(RoutedOp::Swap));
        self.depth_undo.clear();
    }

    fn record_depth(&mut self, qubits: &[PhysicalQubit], clbits: &[u32], weight: u32) {
        let d = qubits
            .iter()
            .map(|q| self.qubit_depth[q.index()])
            .chain(clbits.iter().map(|c| self.clbit_depth[*c as usize]))
            .max()
            .unwrap_or(0)
            + weight;
        for q in qubits {
            self.qubit_depth[q.index()] = d;
        }
        for c in clbits {
            self.clbit_depth[*c as usize] = d;
        }
        self.max_depth = self.max_depth.max(d);
    }

    /// Route `to_visit` and everything that becomes ready after it, parking non-adjacent
    /// two-qubit gates in the front layer.
    fn update_route(&mut self, mut to_visit: Vec<NodeId>) -> Result<()> {
        self.commit_trace();
        let mut i = 0;
        while i < to_visit.len() {
            let id = to_visit[i];
            i += 1;
            let node = self.dag.node(id);
            match node.kind {
                OpKind::TwoQubit => {
                    let a = self.layout.phys(node.qubits[0]);
                    let b = self.layout.phys(node.qubits[1]);
                    if !self.adjacent(a, b) {
                        if self.target.distance.raw(a, b) == UNREACHABLE {
                            return Err(SabreError::Infeasible(format!(
                                "gate '{}' joins physical qubits {} and {} in different device components",
                                node.label, a.0, b.0
                            )));
                        }
                        self.front.insert(id, [a, b]);
                        continue;
                    }
                    self.emit_gate(id);
                }
                OpKind::ControlFlow => self.route_control_flow(id)?,
                OpKind::OneQubit | OpKind::Measure | OpKind::Barrier => self.emit_gate(id),
            }
            for &succ in self.dag.successors(id) {
                let count = &mut self.required_predecessors[succ.index()];
                *count -= 1;
                if *count == 0 {
                    to_visit.push(succ);
                }
            }
        }
        Ok(())
    }

    fn emit_gate(&mut self, id: NodeId) {
        let node = self.dag.node(id);
        let qubits: Vec<PhysicalQubit> = node.qubits.iter().map(|q| self.layout.phys(*q)).collect();
        self.record_depth(
            &qubits,
            &node.clbits,
            u32::from(node.kind == OpKind::TwoQubit),
        );
        self.ops.push(RoutedOp::Gate { node: id, qubits });
        self.routed += 1;
    }

    /// Fill the extended set with the next two-qubit gates reachable from the front layer,
    /// looking through every other kind of node, until it holds `size` gates.
    fn populate_extended_set(&mut self) {
        let Some(lookahead) = &self.cfg.lookahead else {
            return;
        };
        let size = lookahead.size;
        if size == 0 {
            return;
        }
        let mut to_visit: Vec<NodeId> = self.front.iter().map(|(n, _)| *n).collect();
        let mut decremented: Vec<NodeId> = Vec::new();
        let mut i = 0;
        'visit: while i < to_visit.len() {
            let id = to_visit[i];
            i += 1;
            for &succ in self.dag.successors(id) {
                decremented.push(succ);
                let count = &mut self.required_predecessors[succ.index()];
                *count -= 1;
                if *count == 0 {
                    let node = self.dag.node(succ);
                    if node.kind == OpKind::TwoQubit {
                        let a = self.layout.phys(node.qubits[0]);
                        let b = self.layout.phys(node.qubits[1]);
                        self.extended.push([a, b]);
                        if self.extended.len() >= size {
                            break 'visit;
                        }
                    }
                    to_visit.push(succ);
                }
            }
        }
        for id in decremented {
            self.required_predecessors[id.index()] += 1;
        }
    }

    fn route_control_flow(&mut self, id: NodeId) -> Result<()> {
        let node = self.dag.node(id);
        let n = self.target.num_qubits();
        let mut routed_blocks = Vec::with_capacity(node.blocks.len());
        let mut block_depths = Vec::with_capacity(node.blocks.len());
        let mut permutations: Vec<Vec<u32>> = Vec::with_capacity(node.blocks.len());
        for (index, block) in node.blocks.iter().enumerate() {
            let partial: Vec<u32> = block
                .qubit_map
                .iter()
                .map(|q| self.layout.phys(*q).0)
                .collect();
            let entry = Layout::from_partial(n, &partial)?;
            let problem = RoutingProblem {
                dag: &block.circuit,
                target: self.target,
                heuristic: self.cfg,
            };
            let seed = derive_seed(self.seed, id.0 as u64 + 1, index as u64);
            let mut inner = RouterState::new(problem, entry.clone(), seed)?;
            inner.route_remaining()?;
            // Where the state that entered on each physical qubit ended up.
            let moved: Vec<u32> = (0..n as u32)
                .map(|p| inner.layout.phys(entry.virt(PhysicalQubit(p))).0)
                .collect();
            permutations.push(moved);
            block_depths.push((inner.qubit_depth.clone(), inner.max_depth));
            self.release_valve_fires += inner.release_valve_fires;
            routed_blocks.push(RoutedBlock {
                ops: std::mem::take(&mut inner.ops),
                epilogue: Vec::new(),
            });
        }
        let exit: Vec<u32> = match self.cfg.block_alignment {
            BlockAlignment::EntryLayout => (0..n as u32).collect(),
            BlockAlignment::FirstBranch => permutations[0].clone(),
        };
        let mut touched = vec![false; n];
        for q in &node.qubits {
            touched[self.layout.phys(*q).index()] = true;
        }
        let mut block_depth = 0u32;
        for ((routed, moved), (mut registers, mut max)) in routed_blocks
            .iter_mut()
            .zip(&permutations)
            .zip(block_depths)
        {
            let mut mapping = vec![0u32; n];
            for p in 0..n {
                mapping[moved[p] as usize] = exit[p];
            }
            routed.epilogue = realize_permutation(
                &self.target.graph,
                &self.target.distance,
                &Permutation::new(mapping)?,
            )?;
            for &[a, b] in &routed.epilogue {
                let d = registers[a.index()].max(registers[b.index()]) + SWAP_DEPTH;
                registers[a.index()] = d;
                registers[b.index()] = d;
                max = max.max(d);
            }
            block_depth = block_depth.max(max);
            mark_touched(&routed.ops, &mut touched);
            for [a, b] in &routed.epilogue {
                touched[a.index()] = true;
                touched[b.index()] = true;
            }
        }
        let qubits: Vec<PhysicalQubit> = (0..n as u32)
            .map(PhysicalQubit)
            .filter(|p| touched[p.index()])
            .collect();
        self.record_depth(&qubits, &node.clbits, block_depth);
        self.ops.push(RoutedOp::ControlFlow {
            node: id,
            qubits,
            blocks: routed_blocks,
        });
        self.routed += 1;
        if self.cfg.block_alignment == BlockAlignment::FirstBranch {
            self.adopt_exit_layout(&exit)?;
        }
        Ok(())
    }

    /// Move every state from physical `p` to `exit[p]`, then refresh the front layer.
    fn adopt_exit_layout(&mut self, exit: &[u32]) -> Result<()> {
        let mut v2p = vec![0u32; exit.len()];
        for (p, &dest) in exit.iter().enumerate() {
            v2p[self.layout.virt(PhysicalQubit(p as u32)).index()] = dest;
        }
        self.layout = Layout::from_v2p(&v2p)?;
        let gates: Vec<NodeId> = self.front.iter().map(|(n, _)| *n).collect();
        let mut refreshed = FrontLayer::new(exit.len());
        for id in gates {
            let node = self.dag.node(id);
            refreshed.insert(
                id,
                [
                    self.layout.phys(node.qubits[0]),
                    self.layout.phys(node.qubits[1]),
                ],
            );
        }
        self.front = refreshed;
        Ok(())
    }

    /// Route front gates that a layout change made adjacent.
    fn route_adjacent_front(&mut self) -> Result<bool> {
        let ready: Vec<NodeId> = self
            .front
            .iter()
            .filter(|(_, &[a, b])| self.target.graph.contains_edge(a, b))
            .map(|(n, _)| *n)
            .collect();
        if ready.is_empty() {
            return Ok(false);
        }
        for id in &ready {
            self.front.remove(*id);
        }
        self.update_route(ready)?;
        Ok(true)
    }

    fn route_remaining(&mut self) -> Result<()> {
        if self.cfg.block_alignment == BlockAlignment::FirstBranch {
            while self.route_adjacent_front()? {}
            self.extended.clear();
            self.populate_extended_set();
        }
        while !self.front.is_empty() {
            self.step()?;
            if self.cfg.block_alignment == BlockAlignment::FirstBranch
                && self.route_adjacent_front()?
            {
                while self.route_adjacent_front()? {}
                self.extended.clear();
                self.populate_extended_set();
            }
        }
        if self.routed != self.dag.num_nodes() {
            return Err(SabreError::Internal(format!(
                "routing stopped after {} of {} nodes",
                self.routed,
                self.dag.num_nodes()
            )));
        }
        Ok(())
    }

    /// Route the rest of the circuit.
    pub fn run(mut self) -> Result<RoutingResult> {
        self.route_remaining()?;
        let depth_2q = routed_depth(self.dag, &self.ops, self.target.num_qubits());
        Ok(RoutingResult {
            swaps_added: count_swaps(&self.ops),
            depth_2q,
            ops: self.ops,
            initial_layout: self.initial_layout,
            final_layout: self.layout,
            seed: self.seed,
            release_valve_fires: self.release_valve_fires,
        })
    }
}

fn mark_touched(ops: &[RoutedOp], touched: &mut [bool]) {
    for op in ops {
        match op {
            RoutedOp::Gate { qubits, .. } | RoutedOp::ControlFlow { qubits, .. } => {
                for q in qubits {
                    touched[q.index()] = true;
                }
            }
            RoutedOp::Swap([a, b]) => {
                touched[a.index()] = true;
                touched[b.index()] = true;
            }
        }
    }
}
