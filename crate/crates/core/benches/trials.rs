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

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sabre_core::bench::{gen_qft, gen_qv};
use sabre_core::layout::{run_trials, TrialConfig};
use sabre_core::parallel::Parallelism;
use sabre_core::router::HeuristicConfig;
use sabre_core::topology::{heavy_hex, RoutingTarget};

fn trials(c: &mut Criterion) {
    let target = RoutingTarget::new(heavy_hex(127).unwrap());
    let heuristic = HeuristicConfig::default();
    let circuits = [
        ("qft_20", gen_qft(20).unwrap()),
        ("qv_20x10", gen_qv(20, 10, 0).unwrap()),
    ];
    let mut group = c.benchmark_group("run_trials");
    group.sample_size(10);
    for (name, dag) in &circuits {
        for (mode, parallelism) in [
            ("sequential", Parallelism::Sequential),
            ("rayon", Parallelism::Threads(0)),
        ] {
            let cfg = TrialConfig {
                parallelism,
                ..TrialConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(mode, name), dag, |b, dag| {
                b.iter(|| run_trials(dag, &target, &heuristic, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
