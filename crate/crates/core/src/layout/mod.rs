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

//! Initial-layout search over many seeded trials.
//!
//! Each layout trial refines a starting layout by alternating forward and backward routing
//! passes, then scores it with one forward routing. The best layout is routed again by the
//! swap trials and the best routing is returned. Devices with several connected components
//! are handled by placing each circuit interaction component separately.

mod disjoint;
mod sabre;
mod trials;

pub use disjoint::{decompose_disjoint, ComponentAssignment};
pub use sabre::{dense_layout, sabre_layout};
pub use trials::{
    run_trials, Objective, StartKind, TrialConfig, TrialRecord, TrialRun, TrialStage,
};
