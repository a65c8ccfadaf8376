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

//! Benchmark circuits and the suite driver.

mod generators;
mod suite;

pub use generators::{gen_bv, gen_circuit, gen_qft, gen_qv, gen_random};
pub use suite::{
    aggregate, log_log_slope, records_csv, run_benchmark, Aggregate, BenchFailure, BenchOptions,
    BenchRecord, BenchReport, CircuitSpec, ConfigSpec, Stat, SuiteSpec, TrendResult, TrendSpec,
    TrialPreset,
};
