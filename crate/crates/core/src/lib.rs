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

//! Heuristic qubit layout and SWAP-insertion routing.
//!
//! The crate is organised around the routing pipeline:
//!
//! * [`circuit`] holds the dependency-DAG circuit model and its text formats.
//! * [`topology`] models device connectivity: coupling graphs, distances, paths and generators.
//! * [`router`] is the swap-insertion engine with relative scoring and the release valve.
//! * [`control_flow`] routes control-flow blocks and realizes swap epilogues.
//! * [`layout`] searches initial layouts over many seeded trials, including disjoint devices.
//! * [`bench`] provides circuit generators and the benchmark-suite driver.
//! * [`check`] is an independent validity checker for routed output.

pub mod bench;
pub mod check;
pub mod circuit;
pub mod control_flow;
mod error;
pub mod layout;
pub mod parallel;
pub mod router;
pub mod topology;

pub use error::{Result, SabreError};
