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

//! Abstract syntax of the probabilistic multiparty session calculus.

pub(crate) mod alpha;
mod binders;
mod subst;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::prob::Prob;
use crate::typesys::GlobalType;

pub use alpha::{alpha_key, struct_equal};
pub use binders::{fresh_name, BinderReport};
pub use subst::{instantiate, Subst, SubstError};

/// Base values that can be sent as payloads.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    /// A session name, e.g. the restricted name `PhoneNoA` sent to a partner.
    Session(String),
    Bool(bool),
    Int(i64),
    Str(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Channel {
    /// A channel variable, bound by a branch binder or a definition parameter.
    Var(String),
    /// `s[r]`: the endpoint of role `r` in session `s`.
    Role { session: String, role: String },
}

impl Channel {
    pub fn role(session: impl Into<String>, role: impl Into<String>) -> Self {
        Channel::Role {
            session: session.into(),
            role: role.into(),
        }
    }

    pub fn var(name: impl Into<String>) -> Self {
        Channel::Var(name.into())
    }

    /// The name occurrence carried by this channel.
    pub fn name(&self) -> &str {
        match self {
            Channel::Var(x) => x,
            Channel::Role { session, .. } => session,
        }
    }
}

/// `x` or `s[r]`.
impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Var(x) => f.write_str(x),
            Channel::Role { session, role } => write!(f, "{session}[{role}]"),
        }
    }
}

/// Payloads and call arguments: either a value or a channel (variables are
/// channel variables, as in the grammar `c ::= x | s[r]`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Val(Value),
    Chan(Channel),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Chan(Channel::Var(name.into()))
    }

    pub fn str(s: impl Into<String>) -> Self {
        Term::Val(Value::Str(s.into()))
    }

    pub fn int(n: i64) -> Self {
        Term::Val(Value::Int(n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelectBranch {
    pub prob: Prob,
    pub label: String,
    pub payload: Term,
    pub cont: Process,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchArm {
    pub label: String,
    pub binder: String,
    pub cont: Process,
}

/// Global-type annotation on a restriction. `Path` is produced by the parser
/// for `new s : "file.gty"` and must be resolved before type checking.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Annotation {
    Global(GlobalType),
    Path(String),
}

impl Annotation {
    pub fn global(&self) -> Option<&GlobalType> {
        match self {
            Annotation::Global(g) => Some(g),
            Annotation::Path(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    /// `c[partner] (+) { p_i : l_i(v_i). P_i }`
    Select {
        chan: Channel,
        partner: String,
        branches: Vec<SelectBranch>,
    },
    /// `c[partner] & { l_i(x_i). P_i }`
    Branch {
        chan: Channel,
        partner: String,
        arms: Vec<BranchArm>,
    },
    Restrict {
        session: String,
        annotation: Option<Annotation>,
        body: Box<Process>,
    },
    Def {
        name: String,
        params: Vec<String>,
        body: Box<Process>,
        scope: Box<Process>,
    },
    Call {
        name: String,
        args: Vec<Term>,
    },
    Nil,
    Par(Box<Process>, Box<Process>),
}

impl Process {
    pub fn par(left: Process, right: Process) -> Process {
        Process::Par(Box::new(left), Box::new(right))
    }

    pub fn restrict(session: impl Into<String>, annotation: Option<GlobalType>, body: Process) -> Process {
        Process::Restrict {
            session: session.into(),
            annotation: annotation.map(Annotation::Global),
            body: Box::new(body),
        }
    }

    pub fn def(name: impl Into<String>, params: Vec<String>, body: Process, scope: Process) -> Process {
        Process::Def {
            name: name.into(),
            params,
            body: Box::new(body),
            scope: Box::new(scope),
        }
    }

    /// Right-nested parallel composition of `items`; `Nil` when empty.
    pub fn par_all<I: IntoIterator<Item = Process>>(items: I) -> Process {
        let mut items: Vec<Process> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Process::Nil;
        };
        while let Some(p) = items.pop() {
            acc = Process::par(p, acc);
        }
        acc
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Process::Nil)
    }

    /// Labels of a choice that occur more than once, if any.
    pub fn duplicate_label(&self) -> Option<&str> {
        let labels: Vec<&str> = match self {
            Process::Select { branches, .. } => branches.iter().map(|b| b.label.as_str()).collect(),
            Process::Branch { arms, .. } => arms.iter().map(|a| a.label.as_str()).collect(),
            _ => return None,
        };
        first_duplicate(&labels)
    }

    /// Selections whose branch probabilities do not sum to exactly one.
    pub fn incomplete_selections(&self) -> Vec<(Channel, crate::prob::Rational)> {
        let mut out = Vec::new();
        self.walk(&mut |p| {
            if let Process::Select { chan, branches, .. } = p {
                let total = crate::prob::sum(branches.iter().map(|b| &b.prob));
                if !num_traits::One::is_one(&total) {
                    out.push((chan.clone(), total));
                }
            }
        });
        out
    }

    /// `true` iff every selection's probabilities sum to exactly one.
    pub fn is_probability_complete(&self) -> bool {
        self.incomplete_selections().is_empty()
    }

    /// Pre-order traversal over every sub-process, including definition bodies
    /// and choice continuations.
    pub fn walk<F: FnMut(&Process)>(&self, f: &mut F) {
        f(self);
        match self {
            Process::Select { branches, .. } => branches.iter().for_each(|b| b.cont.walk(f)),
            Process::Branch { arms, .. } => arms.iter().for_each(|a| a.cont.walk(f)),
            Process::Restrict { body, .. } => body.walk(f),
            Process::Def { body, scope, .. } => {
                body.walk(f);
                scope.walk(f);
            }
            Process::Par(l, r) => {
                l.walk(f);
                r.walk(f);
            }
            Process::Call { .. } | Process::Nil => {}
        }
    }

    /// Replaces every `Annotation::Path` with the global type `load` returns
    /// for it.
    pub fn resolve_annotations<E>(
        &self,
        load: &mut dyn FnMut(&str) -> Result<GlobalType, E>,
    ) -> Result<Process, E> {
        Ok(match self {
            Process::Select { chan, partner, branches } => Process::Select {
                chan: chan.clone(),
                partner: partner.clone(),
                branches: branches
                    .iter()
                    .map(|b| {
                        Ok(SelectBranch {
                            prob: b.prob.clone(),
                            label: b.label.clone(),
                            payload: b.payload.clone(),
                            cont: b.cont.resolve_annotations(load)?,
                        })
                    })
                    .collect::<Result<_, E>>()?,
            },
            Process::Branch { chan, partner, arms } => Process::Branch {
                chan: chan.clone(),
                partner: partner.clone(),
                arms: arms
                    .iter()
                    .map(|a| {
                        Ok(BranchArm {
                            label: a.label.clone(),
                            binder: a.binder.clone(),
                            cont: a.cont.resolve_annotations(load)?,
                        })
                    })
                    .collect::<Result<_, E>>()?,
            },
            Process::Restrict { session, annotation, body } => Process::Restrict {
                session: session.clone(),
                annotation: match annotation {
                    Some(Annotation::Path(path)) => Some(Annotation::Global(load(path)?)),
                    other => other.clone(),
                },
                body: Box::new(body.resolve_annotations(load)?),
            },
            Process::Def { name, params, body, scope } => Process::Def {
                name: name.clone(),
                params: params.clone(),
                body: Box::new(body.resolve_annotations(load)?),
                scope: Box::new(scope.resolve_annotations(load)?),
            },
            Process::Par(l, r) => Process::par(l.resolve_annotations(load)?, r.resolve_annotations(load)?),
            Process::Call { .. } | Process::Nil => self.clone(),
        })
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }
}

pub(crate) fn first_duplicate<'a>(labels: &[&'a str]) -> Option<&'a str> {
    let mut seen = alloc::collections::BTreeSet::new();
    labels.iter().copied().find(|l| !seen.insert(*l))
}
