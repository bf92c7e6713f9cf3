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

//! The typing system: sortings, typings, the algorithmic typing judgment
//! `Γ ⊢ P ▷ Δ`, labelled reduction on typings, and property harnesses built
//! on top of them.

mod check;
mod deadlock;
mod lemmas;
mod reduction;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Channel, Term};
use crate::prob::{render, Prob, Rational};
use crate::syntax::{interval_text, print_local, print_term, prob_text};
use crate::typesys::{ErasedLocalType, Interval, LocalType, Sort};

pub use check::{check_against, check_recording, open_restrictions, type_check, Judgment};
pub use deadlock::{check_deadlock_freedom, find_stuck_states, DeadlockVerdict, Exploration, StuckState};
pub use lemmas::{
    intersect_sorting, intersect_typing, verify_congruence_preservation, verify_intersection, IntersectionError,
    verify_lemma_properties, LemmaCheck, LemmaProperty, LemmaReport,
};
pub use reduction::{type_step, verify_subject_reduction, MatchedStep, SubjectReductionReport, TypeStep, Violation};

/// A parameter of a process variable: a value of some sort or a channel of
/// some local type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamType {
    Value(Sort),
    Chan(LocalType),
}

/// Positional parameter types of a process variable (`X : S~ T~`).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub params: Vec<ParamType>,
}

impl Signature {
    pub fn new(params: Vec<ParamType>) -> Self {
        Signature { params }
    }

    pub fn sorts(&self) -> Vec<Sort> {
        self.params
            .iter()
            .filter_map(|p| match p {
                ParamType::Value(s) => Some(*s),
                ParamType::Chan(_) => None,
            })
            .collect()
    }

    pub fn chan_types(&self) -> Vec<&LocalType> {
        self.params
            .iter()
            .filter_map(|p| match p {
                ParamType::Chan(t) => Some(t),
                ParamType::Value(_) => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is already bound in the sorting")]
pub struct SortingClash(pub String);

/// Γ: sorts of value variables and signatures of process variables. The two
/// domains are disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sorting {
    vars: BTreeMap<String, Sort>,
    proc_vars: BTreeMap<String, Signature>,
}

impl Sorting {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds or rebinds a value variable.
    pub fn insert_var(&mut self, x: impl Into<String>, sort: Sort) -> Result<(), SortingClash> {
        let x = x.into();
        if self.proc_vars.contains_key(&x) {
            return Err(SortingClash(x));
        }
        self.vars.insert(x, sort);
        Ok(())
    }

    /// Binds or rebinds a process variable.
    pub fn insert_proc_var(&mut self, x: impl Into<String>, sig: Signature) -> Result<(), SortingClash> {
        let x = x.into();
        if self.vars.contains_key(&x) {
            return Err(SortingClash(x));
        }
        self.proc_vars.insert(x, sig);
        Ok(())
    }

    pub fn remove_var(&mut self, x: &str) -> Option<Sort> {
        self.vars.remove(x)
    }

    pub fn remove_proc_var(&mut self, x: &str) -> Option<Signature> {
        self.proc_vars.remove(x)
    }

    pub fn var(&self, x: &str) -> Option<Sort> {
        self.vars.get(x).copied()
    }

    pub fn proc_var(&self, x: &str) -> Option<&Signature> {
        self.proc_vars.get(x)
    }

    pub fn vars(&self) -> &BTreeMap<String, Sort> {
        &self.vars
    }

    pub fn proc_vars(&self) -> &BTreeMap<String, Signature> {
        &self.proc_vars
    }
}

/// Δ: local types of channels. Composition is defined only on disjoint
/// domains.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Typing(BTreeMap<Channel, LocalType>);

impl Typing {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry; fails with the channel if it is already present.
    pub fn insert(&mut self, c: Channel, t: LocalType) -> Result<(), Channel> {
        if self.0.contains_key(&c) {
            return Err(c);
        }
        self.0.insert(c, t);
        Ok(())
    }

    /// Replaces the type of a channel already present, or adds it.
    pub fn set(&mut self, c: Channel, t: LocalType) {
        self.0.insert(c, t);
    }

    pub fn get(&self, c: &Channel) -> Option<&LocalType> {
        self.0.get(c)
    }

    pub fn remove(&mut self, c: &Channel) -> Option<LocalType> {
        self.0.remove(c)
    }

    pub fn contains(&self, c: &Channel) -> bool {
        self.0.contains_key(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Channel, &LocalType)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Names occurring in the domain.
    pub fn names(&self) -> alloc::collections::BTreeSet<String> {
        self.0.keys().map(|c| String::from(c.name())).collect()
    }

    /// Channels whose type is not `end` (up to unfolding).
    pub fn non_end(&self) -> Vec<Channel> {
        self.0
            .iter()
            .filter(|(_, t)| !t.unfold().is_end())
            .map(|(c, _)| c.clone())
            .collect()
    }

    pub fn is_end_only(&self) -> bool {
        self.non_end().is_empty()
    }

    /// Disjoint union `Δ, Δ′`.
    pub fn compose(&self, other: &Typing) -> Result<Typing, Channel> {
        let mut out = self.clone();
        for (c, t) in other.iter() {
            out.insert(c.clone(), t.clone())?;
        }
        Ok(out)
    }

    pub fn erase(&self) -> BTreeMap<Channel, ErasedLocalType> {
        self.0.iter().map(|(c, t)| (c.clone(), t.erase())).collect()
    }
}

impl FromIterator<(Channel, LocalType)> for Typing {
    fn from_iter<I: IntoIterator<Item = (Channel, LocalType)>>(iter: I) -> Self {
        Typing(iter.into_iter().collect())
    }
}

impl fmt::Display for Typing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        for (i, (c, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {}", chan_text(c), print_local(t))?;
        }
        Ok(())
    }
}

/// How a selection's label set is compared with its type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckMode {
    /// The selected labels must be exactly those of the type.
    Strict,
    /// The selected labels may be a subset of those of the type, provided
    /// every omitted label's interval contains 0.
    #[default]
    Subset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeErrorKind {
    ProbSumNotOne { chan: Channel, sum: Rational },
    ProbOutsideInterval { label: String, prob: Prob, delta: Interval },
    LabelSetMismatch { chan: Channel, found: Vec<String>, expected: Vec<String> },
    SortMismatch { context: String, expected: String, found: String },
    NonDisjointTyping(Channel),
    ProjectionMismatch { session: String, role: String, detail: String },
    UnknownProcVar(String),
    ArityMismatch { name: String, expected: usize, found: usize },
    ResidualNotEndOnly(Vec<Channel>),
    UntypedChannel(Channel),
    UnboundVariable(String),
    ChannelTypeMismatch { chan: Channel, expected: String, found: LocalType },
    MissingAnnotation(String),
    UnresolvedAnnotation { session: String, path: String },
    AnnotationNotWellFormed { session: String, detail: String },
}

impl TypeErrorKind {
    /// Variant name, stable across releases.
    pub fn name(&self) -> &'static str {
        match self {
            TypeErrorKind::ProbSumNotOne { .. } => "ProbSumNotOne",
            TypeErrorKind::ProbOutsideInterval { .. } => "ProbOutsideInterval",
            TypeErrorKind::LabelSetMismatch { .. } => "LabelSetMismatch",
            TypeErrorKind::SortMismatch { .. } => "SortMismatch",
            TypeErrorKind::NonDisjointTyping(..) => "NonDisjointTyping",
            TypeErrorKind::ProjectionMismatch { .. } => "ProjectionMismatch",
            TypeErrorKind::UnknownProcVar(..) => "UnknownProcVar",
            TypeErrorKind::ArityMismatch { .. } => "ArityMismatch",
            TypeErrorKind::ResidualNotEndOnly(..) => "ResidualNotEndOnly",
            TypeErrorKind::UntypedChannel(..) => "UntypedChannel",
            TypeErrorKind::UnboundVariable(..) => "UnboundVariable",
            TypeErrorKind::ChannelTypeMismatch { .. } => "ChannelTypeMismatch",
            TypeErrorKind::MissingAnnotation(..) => "MissingAnnotation",
            TypeErrorKind::UnresolvedAnnotation { .. } => "UnresolvedAnnotation",
            TypeErrorKind::AnnotationNotWellFormed { .. } => "AnnotationNotWellFormed",
        }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TypeErrorKind::*;
        match self {
            ProbSumNotOne { chan, sum } => {
                write!(f, "probabilities of selection on {} sum to {}, not 1", chan_text(chan), render(sum))
            }
            ProbOutsideInterval { label, prob, delta } => write!(
                f,
                "probability {} of label `{label}` lies outside {}",
                prob_text(prob),
                interval_text(delta)
            ),
            LabelSetMismatch { chan, found, expected } => write!(
                f,
                "labels {{{}}} on {} do not match the type's {{{}}}",
                found.join(", "),
                chan_text(chan),
                expected.join(", ")
            ),
            SortMismatch { context, expected, found } => {
                write!(f, "{context}: expected {expected}, found {found}")
            }
            NonDisjointTyping(c) => write!(f, "channel {} is used by both sides of a parallel composition", chan_text(c)),
            ProjectionMismatch { session, role, detail } => {
                write!(f, "annotation of `{session}` has no projection on `{role}`: {detail}")
            }
            UnknownProcVar(x) => write!(f, "unknown process variable `{x}`"),
            ArityMismatch { name, expected, found } => {
                write!(f, "`{name}` takes {expected} argument(s), found {found}")
            }
            ResidualNotEndOnly(cs) => {
                let names: Vec<String> = cs.iter().map(chan_text).collect();
                write!(f, "channel(s) {} are not finished", names.join(", "))
            }
            UntypedChannel(c) => write!(f, "channel {} has no type", chan_text(c)),
            UnboundVariable(x) => write!(f, "unbound variable `{x}`"),
            ChannelTypeMismatch { chan, expected, found } => write!(
                f,
                "channel {} has type {} but is used as {expected}",
                chan_text(chan),
                print_local(found)
            ),
            MissingAnnotation(s) => write!(f, "restriction of `{s}` has no global type annotation"),
            UnresolvedAnnotation { session, path } => {
                write!(f, "annotation \"{path}\" of `{session}` was not loaded")
            }
            AnnotationNotWellFormed { session, detail } => {
                write!(f, "annotation of `{session}` is not well formed: {detail}")
            }
        }
    }
}

/// A typing failure together with the rule names on the derivation path
/// leading to it, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} [{}]", rules.join(" > "))]
pub struct TypeError {
    pub kind: Box<TypeErrorKind>,
    pub rules: Vec<&'static str>,
}

/// Failure of a harness before any property could be checked.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Step(#[from] crate::dynamics::StepError),
}

pub(crate) fn chan_text(c: &Channel) -> String {
    print_term(&Term::Chan(c.clone()))
}
