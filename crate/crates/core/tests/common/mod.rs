// Copyright 2026 The pmst Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Fixture loading shared by the integration tests.

#![allow(dead_code)]

pub mod arb;

use pmst_core::{parse_global_type, parse_process, GlobalType, Process};

pub fn source(name: &str) -> &'static str {
    match name {
        "ga_all01.gty" => include_str!("../../../../fixtures/ga_all01.gty"),
        "ga_unreachable.gty" => include_str!("../../../../fixtures/ga_unreachable.gty"),
        "ga_quit_narrow.gty" => include_str!("../../../../fixtures/ga_quit_narrow.gty"),
        "ga_variant_a.gty" => include_str!("../../../../fixtures/ga_variant_a.gty"),
        "ga_variant_b.gty" => include_str!("../../../../fixtures/ga_variant_b.gty"),
        "ga_variant_disjoint.gty" => include_str!("../../../../fixtures/ga_variant_disjoint.gty"),
        "system_simple.mps" => include_str!("../../../../fixtures/system_simple.mps"),
        "system_simple_badquit.mps" => include_str!("../../../../fixtures/system_simple_badquit.mps"),
        "system_full.mps" => include_str!("../../../../fixtures/system_full.mps"),
        "bob_open.mps" => include_str!("../../../../fixtures/bob_open.mps"),
        "com_two_branch.mps" => include_str!("../../../../fixtures/com_two_branch.mps"),
        "call_demo.mps" => include_str!("../../../../fixtures/call_demo.mps"),
        "relay.mps" => include_str!("../../../../fixtures/relay.mps"),
        "deadlock_mismatch.mps" => include_str!("../../../../fixtures/deadlock_mismatch.mps"),
        other => panic!("unknown fixture {other}"),
    }
}

pub fn global(name: &str) -> GlobalType {
    parse_global_type(source(name)).unwrap()
}

pub fn system(name: &str) -> Process {
    system_with(name, None)
}

/// Loads a system, optionally replacing every annotation file by `gty`.
pub fn system_with(name: &str, gty: Option<&str>) -> Process {
    parse_process(source(name))
        .unwrap()
        .resolve_annotations(&mut |path| Ok::<_, ()>(global(gty.unwrap_or(path))))
        .unwrap()
}

/// Fixtures accepted by the type checker in subset mode.
pub const TYPED: [&str; 4] = ["system_simple.mps", "com_two_branch.mps", "call_demo.mps", "relay.mps"];
