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

mod common;

use sabre_core::bench::{gen_qft, gen_random};
use sabre_core::circuit::CircuitDag;
use sabre_core::layout::{
    decompose_disjoint, run_trials, Objective, StartKind, TrialConfig, TrialStage,
};
use sabre_core::parallel::Parallelism;
use sabre_core::router::HeuristicConfig;
use sabre_core::topology::{
    connected_components, grid, heavy_hex, parse_graph_spec, RoutingTarget,
};
use sabre_core::SabreError;

use common::assert_valid;

fn quick(seed: u64) -> TrialConfig {
    TrialConfig {
        layout_trials: 4,
        swap_trials: 4,
        max_iterations: 2,
        ..TrialConfig::default().with_seed(seed)
    }
}

#[test]
fn trials_are_independent_of_thread_count() {
    let dag = gen_qft(9).unwrap();
    let target = RoutingTarget::new(heavy_hex(27).unwrap());
    let heuristic = HeuristicConfig::default();
    let runs: Vec<_> = [
        Parallelism::Sequential,
        Parallelism::Threads(2),
        Parallelism::Threads(0),
    ]
    .into_iter()
    .map(|parallelism| {
        let cfg = TrialConfig {
            parallelism,
            ..quick(3)
        };
        run_trials(&dag, &target, &heuristic, &cfg).unwrap()
    })
    .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
    assert_valid(&dag, &target.graph, &runs[0].result);
}

#[test]
fn records_cover_every_trial_and_the_winner_is_minimal() {
    let dag = gen_random(10, 60, 1).unwrap();
    let target = RoutingTarget::new(grid(3, 4));
    let cfg = TrialConfig {
        seed_layouts: vec![(0..10).collect()],
        ..quick(9)
    };
    let run = run_trials(&dag, &target, &HeuristicConfig::default(), &cfg).unwrap();
    let kinds: Vec<StartKind> = run.layout_trials.iter().map(|r| r.start).collect();
    assert_eq!(
        kinds,
        [StartKind::Random; 4]
            .into_iter()
            .chain([StartKind::Dense, StartKind::Seeded])
            .collect::<Vec<_>>()
    );
    assert_eq!(run.swap_trials.len(), 4);
    assert!(run.swap_trials.iter().all(|r| r.stage == TrialStage::Swap));
    let best = run.swap_trials.iter().map(|r| r.swaps).min().unwrap();
    assert_eq!(run.result.swaps_added, best);
    assert_eq!(run.swap_trials[run.selected_swap_trial].swaps, best);
    assert_valid(&dag, &target.graph, &run.result);
}

#[test]
fn depth_objective_never_picks_a_deeper_result() {
    let target = RoutingTarget::new(heavy_hex(27).unwrap());
    let heuristic = HeuristicConfig::default();
    for seed in 0..4 {
        let dag = gen_random(12, 60, seed).unwrap();
        let by = |objective| {
            let cfg = TrialConfig {
                objective,
                ..quick(seed)
            };
            run_trials(&dag, &target, &heuristic, &cfg).unwrap().result
        };
        let (swaps, depth) = (by(Objective::Swaps), by(Objective::Depth));
        assert!(depth.depth_2q <= swaps.depth_2q);
        assert!(swaps.swaps_added <= depth.swaps_added);
    }
}

#[test]
fn bad_seed_layouts_are_rejected() {
    let dag = gen_qft(4).unwrap();
    let target = RoutingTarget::new(grid(2, 3));
    let heuristic = HeuristicConfig::default();
    for seed in [vec![0, 1, 2], vec![0, 1, 1, 2], vec![0, 1, 2, 6]] {
        let cfg = TrialConfig {
            seed_layouts: vec![seed],
            ..quick(0)
        };
        assert!(matches!(
            run_trials(&dag, &target, &heuristic, &cfg),
            Err(SabreError::InvalidLayout(_))
        ));
    }
}

/// Two independent random circuits side by side.
fn two_blocks(a: usize, b: usize, seed: u64) -> CircuitDag {
    let first = gen_random(a, 30, seed).unwrap();
    let second = gen_random(b, 30, seed + 1).unwrap();
    let mut dag = CircuitDag::new(a + b, 0);
    for (offset, part) in [(0, &first), (a as u32, &second)] {
        for node in part.nodes() {
            let qubits: Vec<u32> = node.qubits.iter().map(|q| q.0 + offset).collect();
            dag.push_gate(node.label.clone(), &qubits).unwrap();
        }
    }
    dag
}

#[test]
fn disjoint_devices_place_each_component_inside_one_piece() {
    let graph = parse_graph_spec("grid:2x3+grid:3x3").unwrap();
    let pieces = connected_components(&graph);
    let target = RoutingTarget::new(graph.clone());
    for seed in 0..10 {
        let dag = two_blocks(7, 5, seed);
        let parts = decompose_disjoint(&dag, &graph).unwrap();
        assert_eq!(parts.len(), 2);
        let run = run_trials(&dag, &target, &HeuristicConfig::default(), &quick(seed)).unwrap();
        let piece_of = |p: u32| {
            pieces
                .iter()
                .position(|c| c.iter().any(|q| q.0 == p))
                .unwrap()
        };
        let layout = run.result.initial_layout.v2p_indices();
        assert!(layout[..7]
            .iter()
            .all(|&p| piece_of(p) == piece_of(layout[0])));
        assert!(layout[7..12]
            .iter()
            .all(|&p| piece_of(p) == piece_of(layout[7])));
        assert!(run.layout_trials.iter().any(|r| r.component == Some(1)));
        assert_valid(&dag, &graph, &run.result);
    }
}

#[test]
fn component_too_large_for_any_piece_is_infeasible() {
    let graph = parse_graph_spec("grid:2x3+grid:2x3").unwrap();
    let target = RoutingTarget::new(graph);
    let dag = two_blocks(7, 2, 0);
    let err = run_trials(&dag, &target, &HeuristicConfig::default(), &quick(0)).unwrap_err();
    assert!(matches!(err, SabreError::Infeasible(_)), "{err:?}");
}
