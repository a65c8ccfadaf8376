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

use proptest::prelude::*;
use sabre_core::topology::{
    densest_subgraph_seed, eagle_127, grid, heavy_hex_code, line, parse_graph_spec, ring,
    shortest_path, CouplingGraph, DistanceMatrix, PhysicalQubit,
};

use common::bfs;

fn assert_matches_bfs(graph: &CouplingGraph) {
    let dist = DistanceMatrix::new(graph);
    for s in 0..graph.num_qubits() {
        let oracle = bfs(graph, s);
        for (t, &d) in oracle.iter().enumerate() {
            let got = dist.get(PhysicalQubit(s as u32), PhysicalQubit(t as u32));
            assert_eq!(got, (d != u32::MAX).then_some(d), "{s}->{t}");
            let edge = graph.contains_edge(PhysicalQubit(s as u32), PhysicalQubit(t as u32));
            assert_eq!(d == 1, edge);
        }
    }
}

#[test]
fn distances_match_bfs_on_builtin_graphs() {
    for g in [
        line(7),
        ring(9),
        grid(4, 5),
        eagle_127(),
        heavy_hex_code(5).unwrap(),
        parse_graph_spec("heavy_hex:27").unwrap(),
        parse_graph_spec("grid:2x3+ring:4").unwrap(),
    ] {
        assert_matches_bfs(&g);
    }
}

#[test]
fn lazy_rows_agree_with_eager() {
    let g = grid(6, 6);
    let lazy = DistanceMatrix::with_eager_limit(&g, 0);
    assert_eq!(lazy.rows_computed(), 0);
    let eager = DistanceMatrix::new(&g);
    for s in 0..36 {
        assert_eq!(lazy.row(PhysicalQubit(s)), eager.row(PhysicalQubit(s)));
    }
}

fn graph() -> impl Strategy<Value = CouplingGraph> {
    (2usize..16).prop_flat_map(|n| {
        prop::collection::vec((0..n as u32, 0..n as u32), 0..3 * n).prop_map(move |edges| {
            let edges = edges.into_iter().filter(|(a, b)| a != b);
            CouplingGraph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn random_graph_distances(g in graph()) {
        assert_matches_bfs(&g);
    }

    #[test]
    fn shortest_paths_are_shortest(g in graph(), a in 0u32..16, b in 0u32..16) {
        let n = g.num_qubits() as u32;
        let (a, b) = (PhysicalQubit(a % n), PhysicalQubit(b % n));
        let d = bfs(&g, a.index())[b.index()];
        match shortest_path(&g, a, b) {
            Ok(path) => {
                prop_assert_eq!(path.len() as u32, d + 1);
                prop_assert_eq!(path[0], a);
                prop_assert_eq!(*path.last().unwrap(), b);
                for w in path.windows(2) {
                    prop_assert!(g.contains_edge(w[0], w[1]));
                }
            }
            Err(_) => prop_assert_eq!(d, u32::MAX),
        }
    }

    #[test]
    fn dense_seed_is_connected(g in graph(), k in 1usize..8) {
        if let Ok(seed) = densest_subgraph_seed(&g, k) {
            prop_assert_eq!(seed.len(), k);
            let reach = bfs(&g.subgraph(&seed), 0);
            prop_assert!(reach.iter().all(|&d| d != u32::MAX));
        } else {
            let largest = (0..g.num_qubits()).map(|s| bfs(&g, s).iter().filter(|&&d| d != u32::MAX).count()).max().unwrap();
            prop_assert!(largest < k);
        }
    }
}
