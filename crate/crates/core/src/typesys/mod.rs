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

//! Imprecise probabilities, global and local session types.

mod equality;
mod intersect;
mod intervals;
mod project;
mod wellformed;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::fresh_name;
use crate::prob::{Prob, ProbError};

pub use equality::equi_eq;
pub use intersect::{intersect_local, IntersectError};
pub use intervals::{classify_interval_set, IntervalClass};
pub use project::{project, ProjectionError};
pub use wellformed::{well_formed, IntervalSetIssue, WellFormedReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("bad interval [{lower}, {upper}]: lower bound exceeds upper bound")]
    Inverted { lower: Prob, upper: Prob },
    #[error("bad interval bound: {0}")]
    Bound(#[from] ProbError),
}

/// A closed interval `[lower, upper]` of admissible probabilities, with
/// `0 <= lower <= upper <= 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lower: Prob,
    upper: Prob,
}

impl Interval {
    pub fn new(lower: Prob, upper: Prob) -> Result<Self, IntervalError> {
        if lower > upper {
            return Err(IntervalError::Inverted { lower, upper });
        }
        Ok(Interval { lower, upper })
    }

    /// Parses both bounds with [`Prob::parse`].
    pub fn parse(lower: &str, upper: &str) -> Result<Self, IntervalError> {
        Self::new(Prob::parse(lower)?, Prob::parse(upper)?)
    }

    pub fn point(p: Prob) -> Self {
        Interval {
            lower: p.clone(),
            upper: p,
        }
    }

    /// `[0, 1]`, the interval that constrains nothing.
    pub fn full() -> Self {
        Interval {
            lower: Prob::zero(),
            upper: Prob::one(),
        }
    }

    pub fn lower(&self) -> &Prob {
        &self.lower
    }

    pub fn upper(&self) -> &Prob {
        &self.upper
    }

    pub fn contains(&self, p: &Prob) -> bool {
        &self.lower <= p && p <= &self.upper
    }

    pub fn contains_rational(&self, r: &crate::prob::Rational) -> bool {
        self.lower.as_rational() <= r && r <= self.upper.as_rational()
    }

    /// `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lower = self.lower.clone().max(other.lower.clone());
        let upper = self.upper.clone().min(other.upper.clone());
        (lower <= upper).then_some(Interval { lower, upper })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Nat,
    Int,
    Bool,
    Str,
}

impl Sort {
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Nat => "nat",
            Sort::Int => "int",
            Sort::Bool => "bool",
            Sort::Str => "string",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Sort> {
        Some(match s {
            "nat" => Sort::Nat,
            "int" => Sort::Int,
            "bool" => Sort::Bool,
            "string" | "str" => Sort::Str,
            _ => return None,
        })
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlobalBranch {
    pub delta: Interval,
    pub label: String,
    pub sort: Sort,
    pub cont: GlobalType,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GlobalType {
    /// `from -> to { delta_i : l_i(S_i). G_i }`
    Interaction {
        from: String,
        to: String,
        branches: Vec<GlobalBranch>,
    },
    Rec {
        var: String,
        body: Box<GlobalType>,
    },
    Var(String),
    End,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelectArm<A> {
    pub annot: A,
    pub label: String,
    pub sort: Sort,
    pub cont: Local<A>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReceiveArm<A> {
    pub label: String,
    pub sort: Sort,
    pub cont: Local<A>,
}

/// Local types, generic over the annotation carried by selection arms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Local<A> {
    /// `partner (+) { delta_i : !l_i<S_i>. T_i }`
    Select { partner: String, arms: Vec<SelectArm<A>> },
    /// `partner & { ?l_i(S_i). T_i }`
    Branch { partner: String, arms: Vec<ReceiveArm<A>> },
    Rec { var: String, body: Box<Local<A>> },
    Var(String),
    End,
}

pub type LocalType = Local<Interval>;
/// A local type with its selection intervals removed.
pub type ErasedLocalType = Local<()>;

/// Structural problems of a type term.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeTermError {
    #[error("unbound type variable `{0}`")]
    UnboundTypeVar(String),
    #[error("unguarded recursion on `{0}`")]
    UnguardedRecursion(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("empty choice")]
    EmptyChoice,
    #[error("role `{0}` communicates with itself")]
    SelfCommunication(String),
}

impl GlobalType {
    /// Roles occurring in the type (`pid(G)`).
    pub fn roles(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_roles(&mut out);
        out
    }

    fn collect_roles(&self, out: &mut BTreeSet<String>) {
        match self {
            GlobalType::Interaction { from, to, branches } => {
                out.insert(from.clone());
                out.insert(to.clone());
                for b in branches {
                    b.cont.collect_roles(out);
                }
            }
            GlobalType::Rec { body, .. } => body.collect_roles(out),
            GlobalType::Var(_) | GlobalType::End => {}
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            GlobalType::Interaction { branches, .. } => {
                for b in branches {
                    b.cont.collect_free(bound, out);
                }
            }
            GlobalType::Rec { var, body } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            GlobalType::Var(t) => {
                if !bound.contains(t) {
                    out.insert(t.clone());
                }
            }
            GlobalType::End => {}
        }
    }

    pub(crate) fn unguarded(&self) -> BTreeSet<String> {
        match self {
            GlobalType::Var(t) => BTreeSet::from([t.clone()]),
            GlobalType::Rec { body, .. } => body.unguarded(),
            _ => BTreeSet::new(),
        }
    }

    /// Checks the invariants: labels distinct, choices nonempty, no
    /// self-communication, type variables bound and guarded.
    pub fn validate(&self) -> Result<(), TypeTermError> {
        if let Some(t) = self.free_vars().into_iter().next() {
            return Err(TypeTermError::UnboundTypeVar(t));
        }
        self.validate_shape()
    }

    fn validate_shape(&self) -> Result<(), TypeTermError> {
        match self {
            GlobalType::Interaction { from, to, branches } => {
                if from == to {
                    return Err(TypeTermError::SelfCommunication(from.clone()));
                }
                if branches.is_empty() {
                    return Err(TypeTermError::EmptyChoice);
                }
                let labels: Vec<&str> = branches.iter().map(|b| b.label.as_str()).collect();
                if let Some(l) = crate::ast::first_duplicate(&labels) {
                    return Err(TypeTermError::DuplicateLabel(l.into()));
                }
                branches.iter().try_for_each(|b| b.cont.validate_shape())
            }
            GlobalType::Rec { var, body } => {
                if body.unguarded().contains(var) {
                    return Err(TypeTermError::UnguardedRecursion(var.clone()));
                }
                body.validate_shape()
            }
            GlobalType::Var(_) | GlobalType::End => Ok(()),
        }
    }

    /// Capture-avoiding `self[repl/var]`.
    pub fn subst_var(&self, var: &str, repl: &GlobalType) -> GlobalType {
        match self {
            GlobalType::Var(t) if t == var => repl.clone(),
            GlobalType::Var(_) | GlobalType::End => self.clone(),
            GlobalType::Interaction { from, to, branches } => GlobalType::Interaction {
                from: from.clone(),
                to: to.clone(),
                branches: branches
                    .iter()
                    .map(|b| GlobalBranch {
                        cont: b.cont.subst_var(var, repl),
                        ..b.clone()
                    })
                    .collect(),
            },
            GlobalType::Rec { var: t, .. } if t == var => self.clone(),
            GlobalType::Rec { var: t, body } => {
                let fv = repl.free_vars();
                if fv.contains(t) {
                    let mut avoid = fv;
                    avoid.extend(body.free_vars());
                    avoid.insert(var.into());
                    let t2 = fresh_name(t, &avoid);
                    let body = body.subst_var(t, &GlobalType::Var(t2.clone()));
                    GlobalType::Rec {
                        var: t2,
                        body: Box::new(body.subst_var(var, repl)),
                    }
                } else {
                    GlobalType::Rec {
                        var: t.clone(),
                        body: Box::new(body.subst_var(var, repl)),
                    }
                }
            }
        }
    }

    /// Unfolds top-level recursion until the head is not `Rec`.
    pub fn unfold(&self) -> GlobalType {
        let mut cur = self.clone();
        for _ in 0..UNFOLD_LIMIT {
            match cur {
                GlobalType::Rec { ref var, ref body } => {
                    let next = body.subst_var(var, &cur);
                    cur = next;
                }
                other => return other,
            }
        }
        cur
    }

    /// Alpha-canonical form: recursion variables renamed by depth, branches
    /// sorted by label.
    pub fn alpha_key(&self) -> GlobalType {
        fn go(g: &GlobalType, env: &mut Vec<(String, String)>) -> GlobalType {
            match g {
                GlobalType::Interaction { from, to, branches } => {
                    let mut branches: Vec<GlobalBranch> = branches
                        .iter()
                        .map(|b| GlobalBranch {
                            cont: go(&b.cont, env),
                            ..b.clone()
                        })
                        .collect();
                    branches.sort_by(|a, b| a.label.cmp(&b.label));
                    GlobalType::Interaction {
                        from: from.clone(),
                        to: to.clone(),
                        branches,
                    }
                }
                GlobalType::Rec { var, body } => {
                    let name = format!("%t{}", env.len());
                    env.push((var.clone(), name.clone()));
                    let body = go(body, env);
                    env.pop();
                    GlobalType::Rec {
                        var: name,
                        body: Box::new(body),
                    }
                }
                GlobalType::Var(t) => GlobalType::Var(
                    env.iter()
                        .rev()
                        .find(|(o, _)| o == t)
                        .map(|(_, n)| n.clone())
                        .unwrap_or_else(|| t.clone()),
                ),
                GlobalType::End => GlobalType::End,
            }
        }
        go(self, &mut Vec::new())
    }

    /// Replaces every interval with `f(interval)`.
    pub fn map_intervals(&self, f: &mut dyn FnMut(&Interval) -> Interval) -> GlobalType {
        match self {
            GlobalType::Interaction { from, to, branches } => GlobalType::Interaction {
                from: from.clone(),
                to: to.clone(),
                branches: branches
                    .iter()
                    .map(|b| GlobalBranch {
                        delta: f(&b.delta),
                        label: b.label.clone(),
                        sort: b.sort,
                        cont: b.cont.map_intervals(f),
                    })
                    .collect(),
            },
            GlobalType::Rec { var, body } => GlobalType::Rec {
                var: var.clone(),
                body: Box::new(body.map_intervals(f)),
            },
            other => other.clone(),
        }
    }
}

const UNFOLD_LIMIT: usize = 1024;

impl<A: Clone> Local<A> {
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go<A>(t: &Local<A>, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match t {
                Local::Select { arms, .. } => arms.iter().for_each(|a| go(&a.cont, bound, out)),
                Local::Branch { arms, .. } => arms.iter().for_each(|a| go(&a.cont, bound, out)),
                Local::Rec { var, body } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Local::Var(t) => {
                    if !bound.contains(t) {
                        out.insert(t.clone());
                    }
                }
                Local::End => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn unguarded(&self) -> BTreeSet<String> {
        match self {
            Local::Var(t) => BTreeSet::from([t.clone()]),
            Local::Rec { body, .. } => body.unguarded(),
            _ => BTreeSet::new(),
        }
    }

    pub fn validate(&self) -> Result<(), TypeTermError> {
        if let Some(t) = self.free_vars().into_iter().next() {
            return Err(TypeTermError::UnboundTypeVar(t));
        }
        self.validate_shape()
    }

    fn validate_shape(&self) -> Result<(), TypeTermError> {
        let check = |labels: Vec<&str>| -> Result<(), TypeTermError> {
            if labels.is_empty() {
                return Err(TypeTermError::EmptyChoice);
            }
            match crate::ast::first_duplicate(&labels) {
                Some(l) => Err(TypeTermError::DuplicateLabel(l.into())),
                None => Ok(()),
            }
        };
        match self {
            Local::Select { arms, .. } => {
                check(arms.iter().map(|a| a.label.as_str()).collect())?;
                arms.iter().try_for_each(|a| a.cont.validate_shape())
            }
            Local::Branch { arms, .. } => {
                check(arms.iter().map(|a| a.label.as_str()).collect())?;
                arms.iter().try_for_each(|a| a.cont.validate_shape())
            }
            Local::Rec { var, body } => {
                if body.unguarded().contains(var) {
                    return Err(TypeTermError::UnguardedRecursion(var.clone()));
                }
                body.validate_shape()
            }
            Local::Var(_) | Local::End => Ok(()),
        }
    }

    /// Capture-avoiding `self[repl/var]`.
    pub fn subst_var(&self, var: &str, repl: &Local<A>) -> Local<A> {
        match self {
            Local::Var(t) if t == var => repl.clone(),
            Local::Var(_) | Local::End => self.clone(),
            Local::Select { partner, arms } => Local::Select {
                partner: partner.clone(),
                arms: arms
                    .iter()
                    .map(|a| SelectArm {
                        annot: a.annot.clone(),
                        label: a.label.clone(),
                        sort: a.sort,
                        cont: a.cont.subst_var(var, repl),
                    })
                    .collect(),
            },
            Local::Branch { partner, arms } => Local::Branch {
                partner: partner.clone(),
                arms: arms
                    .iter()
                    .map(|a| ReceiveArm {
                        label: a.label.clone(),
                        sort: a.sort,
                        cont: a.cont.subst_var(var, repl),
                    })
                    .collect(),
            },
            Local::Rec { var: t, .. } if t == var => self.clone(),
            Local::Rec { var: t, body } => {
                let fv = repl.free_vars();
                if fv.contains(t) {
                    let mut avoid = fv;
                    avoid.extend(body.free_vars());
                    avoid.insert(var.into());
                    let t2 = fresh_name(t, &avoid);
                    let body = body.subst_var(t, &Local::Var(t2.clone()));
                    Local::Rec {
                        var: t2,
                        body: Box::new(body.subst_var(var, repl)),
                    }
                } else {
                    Local::Rec {
                        var: t.clone(),
                        body: Box::new(body.subst_var(var, repl)),
                    }
                }
            }
        }
    }

    /// Unfolds top-level recursion until the head is not `Rec`.
    pub fn unfold(&self) -> Local<A> {
        let mut cur = self.clone();
        for _ in 0..UNFOLD_LIMIT {
            match cur {
                Local::Rec { ref var, ref body } => {
                    let next = body.subst_var(var, &cur);
                    cur = next;
                }
                other => return other,
            }
        }
        cur
    }

    pub fn map_annot<B>(&self, f: &mut dyn FnMut(&A) -> B) -> Local<B> {
        match self {
            Local::Select { partner, arms } => Local::Select {
                partner: partner.clone(),
                arms: arms
                    .iter()
                    .map(|a| SelectArm {
                        annot: f(&a.annot),
                        label: a.label.clone(),
                        sort: a.sort,
                        cont: a.cont.map_annot(f),
                    })
                    .collect(),
            },
            Local::Branch { partner, arms } => Local::Branch {
                partner: partner.clone(),
                arms: arms
                    .iter()
                    .map(|a| ReceiveArm {
                        label: a.label.clone(),
                        sort: a.sort,
                        cont: a.cont.map_annot(f),
                    })
                    .collect(),
            },
            Local::Rec { var, body } => Local::Rec {
                var: var.clone(),
                body: Box::new(body.map_annot(f)),
            },
            Local::Var(t) => Local::Var(t.clone()),
            Local::End => Local::End,
        }
    }

    /// Drops selection annotations.
    pub fn erase(&self) -> ErasedLocalType {
        self.map_annot(&mut |_| ())
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Local::End)
    }
}

impl<A: Clone + Ord> Local<A> {
    /// Alpha-canonical form: recursion variables renamed by depth, arms
    /// sorted by label.
    pub fn alpha_key(&self) -> Local<A> {
        fn go<A: Clone + Ord>(t: &Local<A>, env: &mut Vec<(String, String)>) -> Local<A> {
            match t {
                Local::Select { partner, arms } => {
                    let mut arms: Vec<SelectArm<A>> = arms
                        .iter()
                        .map(|a| SelectArm {
                            annot: a.annot.clone(),
                            label: a.label.clone(),
                            sort: a.sort,
                            cont: go(&a.cont, env),
                        })
                        .collect();
                    arms.sort_by(|a, b| a.label.cmp(&b.label));
                    Local::Select {
                        partner: partner.clone(),
                        arms,
                    }
                }
                Local::Branch { partner, arms } => {
                    let mut arms: Vec<ReceiveArm<A>> = arms
                        .iter()
                        .map(|a| ReceiveArm {
                            label: a.label.clone(),
                            sort: a.sort,
                            cont: go(&a.cont, env),
                        })
                        .collect();
                    arms.sort_by(|a, b| a.label.cmp(&b.label));
                    Local::Branch {
                        partner: partner.clone(),
                        arms,
                    }
                }
                Local::Rec { var, body } => {
                    let name = format!("%t{}", env.len());
                    env.push((var.clone(), name.clone()));
                    let body = go(body, env);
                    env.pop();
                    Local::Rec {
                        var: name,
                        body: Box::new(body),
                    }
                }
                Local::Var(t) => Local::Var(
                    env.iter()
                        .rev()
                        .find(|(o, _)| o == t)
                        .map(|(_, n)| n.clone())
                        .unwrap_or_else(|| t.clone()),
                ),
                Local::End => Local::End,
            }
        }
        go(self, &mut Vec::new())
    }
}

impl LocalType {
    /// Widens every selection interval to `[0, 1]`.
    pub fn widen(&self) -> LocalType {
        self.map_annot(&mut |_| Interval::full())
    }
}
