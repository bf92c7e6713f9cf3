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

//! One-step rewrites by the structural congruence axioms, in both
//! directions and at every position of a term.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{fresh_name, Annotation, BranchArm, Process, SelectBranch};
use crate::typesys::GlobalType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `P | 0 ≡ P`
    ParNil,
    /// `P | Q ≡ Q | P`
    ParComm,
    /// `(P | Q) | R ≡ P | (Q | R)`
    ParAssoc,
    /// `(νs)0 ≡ 0`
    ResNil,
    /// `(νs)(νs′)P ≡ (νs′)(νs)P`
    ResSwap,
    /// `(νs)P | Q ≡ (νs)(P | Q)` if `s ∉ fc(Q)`
    ResExtrusion,
    /// `def D in 0 ≡ 0`
    DefNil,
    /// `def D in (νs)P ≡ (νs)def D in P` if `s ∉ fc(D)`
    DefRes,
    /// `def D in (P | Q) ≡ (def D in P) | Q` if `dpv(D) ∩ fpv(Q) = ∅`
    DefPar,
    /// `def D in def D′ in P ≡ def D′ in def D in P` under disjointness
    DefSwap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub axiom: Axiom,
    pub direction: Direction,
    pub result: Process,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

struct Def<'a> {
    name: &'a str,
    params: &'a [alloc::string::String],
    body: &'a Process,
}

impl Def<'_> {
    fn of(p: &Process) -> Option<(Def<'_>, &Process)> {
        match p {
            Process::Def { name, params, body, scope } => Some((Def { name, params, body }, scope)),
            _ => None,
        }
    }

    fn wrap(&self, scope: Process) -> Process {
        Process::def(self.name, self.params.to_vec(), self.body.clone(), scope)
    }

    fn free_names(&self) -> BTreeSet<alloc::string::String> {
        self.wrap(Process::Nil).free_names()
    }

    fn free_proc_vars(&self) -> BTreeSet<alloc::string::String> {
        self.wrap(Process::Nil).free_proc_vars()
    }
}

fn restrict(session: &str, annotation: &Option<Annotation>, body: Process) -> Process {
    Process::Restrict {
        session: session.into(),
        annotation: annotation.clone(),
        body: Box::new(body),
    }
}

fn at_root(p: &Process, avoid: &BTreeSet<alloc::string::String>, out: &mut Vec<Rewrite>) {
    use Axiom::*;
    use Direction::*;
    let mut push = |axiom, direction, result| out.push(Rewrite { axiom, direction, result });

    push(ParNil, RightToLeft, Process::par(p.clone(), Process::Nil));
    if p.is_nil() {
        let s = fresh_name("s", avoid);
        push(ResNil, RightToLeft, Process::restrict(s, Some(GlobalType::End), Process::Nil));
        let x = fresh_name("X", avoid);
        push(DefNil, RightToLeft, Process::def(x, Vec::new(), Process::Nil, Process::Nil));
    }
    match p {
        Process::Par(l, r) => {
            if r.is_nil() {
                push(ParNil, LeftToRight, (**l).clone());
            }
            push(ParComm, LeftToRight, Process::par((**r).clone(), (**l).clone()));
            if let Process::Par(a, b) = &**l {
                push(
                    ParAssoc,
                    LeftToRight,
                    Process::par((**a).clone(), Process::par((**b).clone(), (**r).clone())),
                );
            }
            if let Process::Par(b, c) = &**r {
                push(
                    ParAssoc,
                    RightToLeft,
                    Process::par(Process::par((**l).clone(), (**b).clone()), (**c).clone()),
                );
            }
            if let Process::Restrict { session, annotation, body } = &**l {
                if !r.free_names().contains(session) {
                    push(
                        ResExtrusion,
                        LeftToRight,
                        restrict(session, annotation, Process::par((**body).clone(), (**r).clone())),
                    );
                }
            }
            if let Some((d, scope)) = Def::of(l) {
                if !r.free_proc_vars().contains(d.name) {
                    push(DefPar, RightToLeft, d.wrap(Process::par(scope.clone(), (**r).clone())));
                }
            }
        }
        Process::Restrict { session, annotation, body } => {
            if body.is_nil() {
                push(ResNil, LeftToRight, Process::Nil);
            }
            if let Process::Restrict {
                session: s2,
                annotation: a2,
                body: inner,
            } = &**body
            {
                if s2 != session {
                    push(
                        ResSwap,
                        LeftToRight,
                        restrict(s2, a2, restrict(session, annotation, (**inner).clone())),
                    );
                }
            }
            if let Process::Par(l, r) = &**body {
                if !r.free_names().contains(session) {
                    push(
                        ResExtrusion,
                        RightToLeft,
                        Process::par(restrict(session, annotation, (**l).clone()), (**r).clone()),
                    );
                }
            }
            if let Some((d, scope)) = Def::of(body) {
                if !d.free_names().contains(session) {
                    push(DefRes, RightToLeft, d.wrap(restrict(session, annotation, scope.clone())));
                }
            }
        }
        Process::Def { .. } => {
            let (d, scope) = Def::of(p).expect("definition");
            if scope.is_nil() {
                push(DefNil, LeftToRight, Process::Nil);
            }
            match scope {
                Process::Restrict { session, annotation, body } if !d.free_names().contains(session) => {
                    push(DefRes, LeftToRight, restrict(session, annotation, d.wrap((**body).clone())));
                }
                Process::Par(l, r) if !r.free_proc_vars().contains(d.name) => {
                    push(DefPar, LeftToRight, Process::par(d.wrap((**l).clone()), (**r).clone()));
                }
                Process::Def { .. } => {
                    let (d2, inner) = Def::of(scope).expect("definition");
                    let clash = |a: &Def<'_>, b: &Def<'_>| a.name == b.name || a.free_proc_vars().contains(b.name);
                    if !clash(&d, &d2) && !clash(&d2, &d) {
                        push(DefSwap, LeftToRight, d2.wrap(d.wrap(inner.clone())));
                    }
                }
                _ => {}
            }
        }
        _ => {}
    }
}

fn go(p: &Process, avoid: &BTreeSet<alloc::string::String>, out: &mut Vec<Rewrite>) {
    at_root(p, avoid, out);
    let inner = |child: &Process, rebuild: &dyn Fn(Process) -> Process, out: &mut Vec<Rewrite>| {
        let mut sub = Vec::new();
        go(child, avoid, &mut sub);
        out.extend(sub.into_iter().map(|rw| Rewrite {
            result: rebuild(rw.result),
            ..rw
        }));
    };
    match p {
        Process::Select { chan, partner, branches } => {
            for (i, b) in branches.iter().enumerate() {
                inner(
                    &b.cont,
                    &|q| {
                        let mut branches: Vec<SelectBranch> = branches.clone();
                        branches[i].cont = q;
                        Process::Select {
                            chan: chan.clone(),
                            partner: partner.clone(),
                            branches,
                        }
                    },
                    out,
                );
            }
        }
        Process::Branch { chan, partner, arms } => {
            for (i, a) in arms.iter().enumerate() {
                inner(
                    &a.cont,
                    &|q| {
                        let mut arms: Vec<BranchArm> = arms.clone();
                        arms[i].cont = q;
                        Process::Branch {
                            chan: chan.clone(),
                            partner: partner.clone(),
                            arms,
                        }
                    },
                    out,
                );
            }
        }
        Process::Restrict { session, annotation, body } => {
            inner(body, &|q| restrict(session, annotation, q), out);
        }
        Process::Def { name, params, body, scope } => {
            inner(body, &|q| Process::def(name.clone(), params.clone(), q, (**scope).clone()), out);
            inner(scope, &|q| Process::def(name.clone(), params.clone(), (**body).clone(), q), out);
        }
        Process::Par(l, r) => {
            inner(l, &|q| Process::par(q, (**r).clone()), out);
            inner(r, &|q| Process::par((**l).clone(), q), out);
        }
        Process::Call { .. } | Process::Nil => {}
    }
}

/// Every process obtained from `p` by one application of a congruence
/// axiom, in either direction, at any position. Names introduced by the
/// right-to-left unit laws are fresh for `p`; the introduced restriction is
/// annotated with `end`.
pub fn congruence_rewrites(p: &Process) -> Vec<Rewrite> {
    let avoid = p.all_names();
    let mut out = Vec::new();
    go(p, &avoid, &mut out);
    out
}
