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

//! Probabilistic multiparty sessions with imprecise-probability session
//! types.
//!
//! The crate is `no_std` with `alloc`. It provides the process calculus
//! ([`ast`], [`syntax`], [`dynamics`]), global and local types
//! ([`typesys`]), the typing algorithm and its verification harnesses
//! ([`checker`]), and exact reachability analysis plus a seeded simulator
//! ([`analysis`]).

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod analysis;
pub mod ast;
pub mod checker;
pub mod dynamics;
pub mod prob;
pub mod syntax;
pub mod typesys;

pub use ast::{Annotation, BranchArm, Channel, Process, SelectBranch, Term, Value};
pub use prob::{Prob, Rational};
pub use syntax::{parse_global_type, parse_local_type, parse_process, ParseError};
pub use typesys::{GlobalType, Interval, LocalType, Sort};
