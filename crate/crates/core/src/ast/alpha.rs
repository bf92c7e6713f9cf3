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

//! Alpha-equivalence.
//!
//! Bound names are replaced by names derived from their binding depth (de
//! Bruijn levels, one counter per binder kind), and choice branches are
//! sorted by label. Two terms are alpha-equivalent iff their keys are equal.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Annotation, BranchArm, Channel, Process, SelectBranch, Term, Value};

/// Prefixes for level names, chosen so that no free name of the term has the
/// shape `prefix` followed by digits.
#[derive(Debug, Clone)]
pub(crate) struct Prefixes {
    session: String,
    var: String,
    proc_var: String,
}

fn clashes(prefix: &str, free: &BTreeSet<String>) -> bool {
    free.iter().any(|n| {
        n.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    })
}

fn pick(base: &str, free: &BTreeSet<String>) -> String {
    let mut p = String::from(base);
    while clashes(&p, free) {
        p.push('_');
    }
    p
}

impl Prefixes {
    pub(crate) fn for_term(p: &Process) -> Self {
        let mut free = p.free_names();
        free.extend(p.free_proc_vars());
        Prefixes {
            session: pick("s", &free),
            var: pick("x", &free),
            proc_var: pick("X", &free),
        }
    }
}

/// Scoped renaming environment mapping bound names to level names.
#[derive(Debug, Clone)]
pub(crate) struct LevelEnv {
    prefixes: Prefixes,
    names: Vec<(String, String)>,
    proc_vars: Vec<(String, String)>,
    sessions: usize,
    vars: usize,
}

impl LevelEnv {
    pub(crate) fn new(prefixes: Prefixes) -> Self {
        LevelEnv {
            prefixes,
            names: Vec::new(),
            proc_vars: Vec::new(),
            sessions: 0,
            vars: 0,
        }
    }

    pub(crate) fn bind_session(&mut self, orig: &str) -> String {
        let new = format!("{}{}", self.prefixes.session, self.sessions);
        self.sessions += 1;
        self.names.push((orig.into(), new.clone()));
        new
    }

    pub(crate) fn bind_var(&mut self, orig: &str) -> String {
        let new = format!("{}{}", self.prefixes.var, self.vars);
        self.vars += 1;
        self.names.push((orig.into(), new.clone()));
        new
    }

    pub(crate) fn bind_proc_var(&mut self, orig: &str) -> String {
        let new = format!("{}{}", self.prefixes.proc_var, self.proc_vars.len());
        self.proc_vars.push((orig.into(), new.clone()));
        new
    }

    pub(crate) fn name(&self, n: &str) -> String {
        self.names
            .iter()
            .rev()
            .find(|(o, _)| o == n)
            .map(|(_, new)| new.clone())
            .unwrap_or_else(|| n.into())
    }

    pub(crate) fn proc_var(&self, n: &str) -> String {
        self.proc_vars
            .iter()
            .rev()
            .find(|(o, _)| o == n)
            .map(|(_, new)| new.clone())
            .unwrap_or_else(|| n.into())
    }

    pub(crate) fn channel(&self, c: &Channel) -> Channel {
        match c {
            Channel::Var(x) => Channel::Var(self.name(x)),
            Channel::Role { session, role } => Channel::Role {
                session: self.name(session),
                role: role.clone(),
            },
        }
    }

    pub(crate) fn term(&self, t: &Term) -> Term {
        match t {
            Term::Chan(c) => Term::Chan(self.channel(c)),
            Term::Val(Value::Session(s)) => Term::Val(Value::Session(self.name(s))),
            Term::Val(v) => Term::Val(v.clone()),
        }
    }
}

/// Saved binding depth, restored with [`LevelEnv::restore`].
#[derive(Clone, Copy)]
pub(crate) struct Mark {
    names: usize,
    proc_vars: usize,
    sessions: usize,
    vars: usize,
}

impl LevelEnv {
    pub(crate) fn mark(&self) -> Mark {
        Mark {
            names: self.names.len(),
            proc_vars: self.proc_vars.len(),
            sessions: self.sessions,
            vars: self.vars,
        }
    }

    pub(crate) fn restore(&mut self, m: Mark) {
        self.names.truncate(m.names);
        self.proc_vars.truncate(m.proc_vars);
        self.sessions = m.sessions;
        self.vars = m.vars;
    }
}

pub(crate) fn canonical_annotation(a: &Option<Annotation>) -> Option<Annotation> {
    a.as_ref().map(|a| match a {
        Annotation::Global(g) => Annotation::Global(g.alpha_key()),
        Annotation::Path(p) => Annotation::Path(p.clone()),
    })
}

fn key(p: &Process, env: &mut LevelEnv) -> Process {
    match p {
        Process::Nil => Process::Nil,
        Process::Par(l, r) => Process::par(key(l, env), key(r, env)),
        Process::Select {
            chan,
            partner,
            branches,
        } => {
            let mut branches: Vec<SelectBranch> = branches
                .iter()
                .map(|b| SelectBranch {
                    prob: b.prob.clone(),
                    label: b.label.clone(),
                    payload: env.term(&b.payload),
                    cont: key(&b.cont, env),
                })
                .collect();
            branches.sort_by(|a, b| a.label.cmp(&b.label));
            Process::Select {
                chan: env.channel(chan),
                partner: partner.clone(),
                branches,
            }
        }
        Process::Branch { chan, partner, arms } => {
            let mut arms: Vec<BranchArm> = arms
                .iter()
                .map(|a| {
                    let m = env.mark();
                    let binder = env.bind_var(&a.binder);
                    let cont = key(&a.cont, env);
                    env.restore(m);
                    BranchArm {
                        label: a.label.clone(),
                        binder,
                        cont,
                    }
                })
                .collect();
            arms.sort_by(|a, b| a.label.cmp(&b.label));
            Process::Branch {
                chan: env.channel(chan),
                partner: partner.clone(),
                arms,
            }
        }
        Process::Restrict {
            session,
            annotation,
            body,
        } => {
            let m = env.mark();
            let session = env.bind_session(session);
            let body = key(body, env);
            env.restore(m);
            Process::Restrict {
                session,
                annotation: canonical_annotation(annotation),
                body: Box::new(body),
            }
        }
        Process::Def {
            name,
            params,
            body,
            scope,
        } => {
            let m = env.mark();
            let name = env.bind_proc_var(name);
            let inner = env.mark();
            let params = params.iter().map(|x| env.bind_var(x)).collect();
            let body = key(body, env);
            env.restore(inner);
            let scope = key(scope, env);
            env.restore(m);
            Process::Def {
                name,
                params,
                body: Box::new(body),
                scope: Box::new(scope),
            }
        }
        Process::Call { name, args } => Process::Call {
            name: env.proc_var(name),
            args: args.iter().map(|a| env.term(a)).collect(),
        },
    }
}

/// Canonical representative of the alpha-equivalence class of `p`, with
/// choice branches ordered by label.
pub fn alpha_key(p: &Process) -> Process {
    key(p, &mut LevelEnv::new(Prefixes::for_term(p)))
}

/// Equality up to consistent renaming of bound names and reordering of
/// choice branches.
pub fn struct_equal(p: &Process, q: &Process) -> bool {
    p == q || alpha_key(p) == alpha_key(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    #[test]
    fn nil_equals_nil() {
        assert!(struct_equal(&Process::Nil, &Process::Nil));
    }

    #[test]
    fn branch_order_is_irrelevant() {
        assert!(struct_equal(
            &p("s[rA][rB](+){ 0.6: yes(\"ok\"). 0, 0.4: no(\"ok\"). 0 }"),
            &p("s[rA][rB](+){ 0.4: no(\"ok\"). 0, 0.6: yes(\"ok\"). 0 }"),
        ));
        assert!(struct_equal(
            &p("s[rB][rA]&{ yes(x). 0, no(y). 0 }"),
            &p("s[rB][rA]&{ no(z). 0, yes(w). 0 }"),
        ));
    }

    #[test]
    fn bound_session_renaming() {
        assert!(struct_equal(&p("new s . 0"), &p("new s2 . 0")));
        assert!(struct_equal(
            &p("new s . s[rA][rB]&{ l(x). 0 }"),
            &p("new u . u[rA][rB]&{ l(y). 0 }"),
        ));
    }

    #[test]
    fn free_names_matter() {
        assert!(!struct_equal(&p("s[rA][rB]&{ l(x). 0 }"), &p("u[rA][rB]&{ l(x). 0 }")));
        assert!(!struct_equal(&p("0 | 0"), &Process::Nil));
    }

    #[test]
    fn level_names_avoid_free_names() {
        // A free name shaped like a level name must not be captured.
        let a = p("new s . s0[rA][rB]&{ l(x). 0 }");
        let b = p("new s0 . s0[rA][rB]&{ l(x). 0 }");
        assert!(!struct_equal(&a, &b));
    }

    #[test]
    fn procvar_renaming() {
        assert!(struct_equal(
            &p("def X(y) = y[rB]&{ l(z). X(y) } in X(s[rA])"),
            &p("def Y(w) = w[rB]&{ l(q). Y(w) } in Y(s[rA])"),
        ));
    }
}
