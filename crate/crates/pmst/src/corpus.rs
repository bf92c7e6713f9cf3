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

//! The fixture corpus, embedded in the binary.

use std::path::Path;

use pmst_core::{parse_global_type, parse_process, GlobalType, Process};

use crate::load::{resolve, LoadError};

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        /// `(file name, contents)` of every shipped fixture.
        pub const FIXTURES: &[(&str, &str)] = &[$(($name, include_str!(concat!("../../../fixtures/", $name)))),*];
    };
}

fixtures![
    "ga_all01.gty",
    "ga_unreachable.gty",
    "ga_quit_narrow.gty",
    "ga_variant_a.gty",
    "ga_variant_b.gty",
    "ga_variant_disjoint.gty",
    "bob_rB.lty",
    "system_simple.mps",
    "system_simple_badquit.mps",
    "system_full.mps",
    "bob_open.mps",
    "com_two_branch.mps",
    "call_demo.mps",
    "relay.mps",
    "deadlock_mismatch.mps",
];

/// Closed systems accepted by the checker in subset mode.
pub const TYPED: &[&str] = &["system_simple.mps", "com_two_branch.mps", "call_demo.mps", "relay.mps"];

/// Ill-typed system with a reachable stuck state.
pub const DEADLOCK_COUNTEREXAMPLE: &str = "deadlock_mismatch.mps";

pub fn source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

fn missing(name: &str) -> LoadError {
    LoadError::Io {
        path: name.into(),
        source: std::io::Error::new(std::io::ErrorKind::NotFound, "not in the embedded corpus"),
    }
}

pub fn global(name: &str) -> Result<GlobalType, LoadError> {
    let src = source(name).ok_or_else(|| missing(name))?;
    parse_global_type(src).map_err(|error| LoadError::Parse { path: name.into(), error })
}

pub fn system(name: &str) -> Result<Process, LoadError> {
    system_with(name, None)
}

/// Loads an embedded system, reading every annotation from `gty` instead
/// of the named file when given.
pub fn system_with(name: &str, gty: Option<&str>) -> Result<Process, LoadError> {
    let src = source(name).ok_or_else(|| missing(name))?;
    let p = parse_process(src).map_err(|error| LoadError::Parse { path: name.into(), error })?;
    resolve(Path::new(name), p, &mut |rel| global(gty.unwrap_or(rel)))
}
