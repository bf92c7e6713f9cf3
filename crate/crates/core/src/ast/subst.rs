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

//! Capture-avoiding substitution of names by terms.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::binders::fresh_name;
use super::{BranchArm, Channel, Process, SelectBranch, Term, Value};

/// Finite map from names to the terms replacing their free occurrences.
pub type Subst = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("arity mismatch calling `{name}`: expected {expected} argument(s), found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("cannot use {term:?} in channel position for `{name}`")]
    IllSorted { name: String, term: Term },
}

#[derive(Clone, Copy)]
enum BinderKind {
    Session,
    Var,
}

impl BinderKind {
    fn rename_to(self, fresh: String) -> Term {
        match self {
            BinderKind::Session => Term::Val(Value::Session(fresh)),
            BinderKind::Var => Term::Chan(Channel::Var(fresh)),
        }
    }
}

fn range_names(s: &Subst) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in s.values() {
        match t {
            Term::Chan(c) => {
                out.insert(c.name().into());
            }
            Term::Val(Value::Session(n)) => {
                out.insert(n.clone());
            }
            Term::Val(_) => {}
        }
    }
    out
}

/// Shadows `binder` in `s`, renaming it when it would capture a name from the
/// range of the substitution.
fn enter(s: &Subst, binder: &str, kind: BinderKind, body: &Process) -> (Subst, String) {
    let mut inner = s.clone();
    inner.remove(binder);
    if inner.is_empty() {
        return (inner, binder.into());
    }
    let range = range_names(&inner);
    if !range.contains(binder) {
        return (inner, binder.into());
    }
    let mut avoid = range;
    avoid.extend(body.all_names());
    avoid.extend(inner.keys().cloned());
    let fresh = fresh_name(binder, &avoid);
    inner.insert(binder.into(), kind.rename_to(fresh.clone()));
    (inner, fresh)
}

fn subject(c: &Channel, s: &Subst) -> Result<Channel, SubstError> {
    match c {
        Channel::Var(x) => match s.get(x) {
            None => Ok(c.clone()),
            Some(Term::Chan(to)) => Ok(to.clone()),
            Some(other) => Err(SubstError::IllSorted {
                name: x.clone(),
                term: other.clone(),
            }),
        },
        Channel::Role { session, role } => match s.get(session) {
            None => Ok(c.clone()),
            Some(Term::Val(Value::Session(m))) | Some(Term::Chan(Channel::Var(m))) => Ok(Channel::Role {
                session: m.clone(),
                role: role.clone(),
            }),
            Some(other) => Err(SubstError::IllSorted {
                name: session.clone(),
                term: other.clone(),
            }),
        },
    }
}

fn term(t: &Term, s: &Subst) -> Result<Term, SubstError> {
    match t {
        Term::Chan(Channel::Var(x)) => Ok(s.get(x).cloned().unwrap_or_else(|| t.clone())),
        Term::Chan(c) => Ok(Term::Chan(subject(c, s)?)),
        Term::Val(Value::Session(n)) => Ok(s.get(n).cloned().unwrap_or_else(|| t.clone())),
        Term::Val(_) => Ok(t.clone()),
    }
}

fn go(p: &Process, s: &Subst) -> Result<Process, SubstError> {
    if s.is_empty() {
        return Ok(p.clone());
    }
    Ok(match p {
        Process::Nil => Process::Nil,
        Process::Par(l, r) => Process::par(go(l, s)?, go(r, s)?),
        Process::Select {
            chan,
            partner,
            branches,
        } => Process::Select {
            chan: subject(chan, s)?,
            partner: partner.clone(),
            branches: branches
                .iter()
                .map(|b| {
                    Ok(SelectBranch {
                        prob: b.prob.clone(),
                        label: b.label.clone(),
                        payload: term(&b.payload, s)?,
                        cont: go(&b.cont, s)?,
                    })
                })
                .collect::<Result<_, _>>()?,
        },
        Process::Branch { chan, partner, arms } => Process::Branch {
            chan: subject(chan, s)?,
            partner: partner.clone(),
            arms: arms
                .iter()
                .map(|a| {
                    let (inner, binder) = enter(s, &a.binder, BinderKind::Var, &a.cont);
                    Ok(BranchArm {
                        label: a.label.clone(),
                        binder,
                        cont: go(&a.cont, &inner)?,
                    })
                })
                .collect::<Result<_, _>>()?,
        },
        Process::Restrict {
            session,
            annotation,
            body,
        } => {
            let (inner, session) = enter(s, session, BinderKind::Session, body);
            Process::Restrict {
                session,
                annotation: annotation.clone(),
                body: Box::new(go(body, &inner)?),
            }
        }
        Process::Def {
            name,
            params,
            body,
            scope,
        } => {
            let mut inner = s.clone();
            let mut new_params = Vec::with_capacity(params.len());
            for x in params {
                let (next, x2) = enter(&inner, x, BinderKind::Var, body);
                inner = next;
                new_params.push(x2);
            }
            Process::Def {
                name: name.clone(),
                params: new_params,
                body: Box::new(go(body, &inner)?),
                scope: Box::new(go(scope, s)?),
            }
        }
        Process::Call { name, args } => Process::Call {
            name: name.clone(),
            args: args.iter().map(|a| term(a, s)).collect::<Result<_, _>>()?,
        },
    })
}

impl Process {
    /// Replaces every free occurrence of each name in `s`. Bound names that
    /// would capture a name of the substituted terms are renamed first.
    pub fn substitute(&self, s: &Subst) -> Result<Process, SubstError> {
        go(self, s)
    }

    /// Renames free occurrences of process variable `from` to `to`. `to` must
    /// not be bound anywhere inside `self`.
    pub fn rename_proc_var(&self, from: &str, to: &str) -> Process {
        match self {
            Process::Nil => Process::Nil,
            Process::Par(l, r) => Process::par(l.rename_proc_var(from, to), r.rename_proc_var(from, to)),
            Process::Select {
                chan,
                partner,
                branches,
            } => Process::Select {
                chan: chan.clone(),
                partner: partner.clone(),
                branches: branches
                    .iter()
                    .map(|b| SelectBranch {
                        cont: b.cont.rename_proc_var(from, to),
                        ..b.clone()
                    })
                    .collect(),
            },
            Process::Branch { chan, partner, arms } => Process::Branch {
                chan: chan.clone(),
                partner: partner.clone(),
                arms: arms
                    .iter()
                    .map(|a| BranchArm {
                        cont: a.cont.rename_proc_var(from, to),
                        ..a.clone()
                    })
                    .collect(),
            },
            Process::Restrict {
                session,
                annotation,
                body,
            } => Process::Restrict {
                session: session.clone(),
                annotation: annotation.clone(),
                body: Box::new(body.rename_proc_var(from, to)),
            },
            Process::Def { name, .. } if name == from => self.clone(),
            Process::Def {
                name,
                params,
                body,
                scope,
            } => Process::Def {
                name: name.clone(),
                params: params.clone(),
                body: Box::new(body.rename_proc_var(from, to)),
                scope: Box::new(scope.rename_proc_var(from, to)),
            },
            Process::Call { name, args } => Process::Call {
                name: if name == from { to.into() } else { name.clone() },
                args: args.clone(),
            },
        }
    }
}

impl Process {
    /// Renames free occurrences of the name `from` (session or variable) to
    /// `to`, keeping each occurrence's kind. `to` must not be bound inside
    /// `self`.
    pub fn rename_name(&self, from: &str, to: &str) -> Process {
        let n = |x: &String| if x == from { String::from(to) } else { x.clone() };
        let chan = |c: &Channel| match c {
            Channel::Var(x) => Channel::Var(n(x)),
            Channel::Role { session, role } => Channel::Role {
                session: n(session),
                role: role.clone(),
            },
        };
        let term = |t: &Term| match t {
            Term::Chan(c) => Term::Chan(chan(c)),
            Term::Val(Value::Session(x)) => Term::Val(Value::Session(n(x))),
            Term::Val(v) => Term::Val(v.clone()),
        };
        match self {
            Process::Nil => Process::Nil,
            Process::Par(l, r) => Process::par(l.rename_name(from, to), r.rename_name(from, to)),
            Process::Select {
                chan: c,
                partner,
                branches,
            } => Process::Select {
                chan: chan(c),
                partner: partner.clone(),
                branches: branches
                    .iter()
                    .map(|b| SelectBranch {
                        prob: b.prob.clone(),
                        label: b.label.clone(),
                        payload: term(&b.payload),
                        cont: b.cont.rename_name(from, to),
                    })
                    .collect(),
            },
            Process::Branch { chan: c, partner, arms } => Process::Branch {
                chan: chan(c),
                partner: partner.clone(),
                arms: arms
                    .iter()
                    .map(|a| BranchArm {
                        label: a.label.clone(),
                        binder: a.binder.clone(),
                        cont: if a.binder == from {
                            a.cont.clone()
                        } else {
                            a.cont.rename_name(from, to)
                        },
                    })
                    .collect(),
            },
            Process::Restrict { session, .. } if session == from => self.clone(),
            Process::Restrict {
                session,
                annotation,
                body,
            } => Process::Restrict {
                session: session.clone(),
                annotation: annotation.clone(),
                body: Box::new(body.rename_name(from, to)),
            },
            Process::Def {
                name,
                params,
                body,
                scope,
            } => Process::Def {
                name: name.clone(),
                params: params.clone(),
                body: Box::new(if params.iter().any(|x| x == from) {
                    (**body).clone()
                } else {
                    body.rename_name(from, to)
                }),
                scope: Box::new(scope.rename_name(from, to)),
            },
            Process::Call { name, args } => Process::Call {
                name: name.clone(),
                args: args.iter().map(term).collect(),
            },
        }
    }
}

/// `body{args/params}` for a call; the arities must agree.
pub fn instantiate(name: &str, params: &[String], args: &[Term], body: &Process) -> Result<Process, SubstError> {
    if params.len() != args.len() {
        return Err(SubstError::ArityMismatch {
            name: name.into(),
            expected: params.len(),
            found: args.len(),
        });
    }
    let s: Subst = params.iter().cloned().zip(args.iter().cloned()).collect();
    body.substitute(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::struct_equal;
    use crate::syntax::parse_process;

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    #[test]
    fn nil_is_fixed() {
        let s = Subst::from([("x".into(), Term::int(5))]);
        assert_eq!(Process::Nil.substitute(&s).unwrap(), Process::Nil);
    }

    #[test]
    fn replaces_channel_variable() {
        let s = Subst::from([("y".into(), Term::Chan(Channel::role("s", "rA")))]);
        let got = p("y[rB](+){ 1: l(v). 0 }").substitute(&s).unwrap();
        assert!(struct_equal(&got, &p("s[rA][rB](+){ 1: l(v). 0 }")));
    }

    #[test]
    fn bound_occurrences_untouched() {
        let before = p("s[rA][rB]&{ l(x). X(x) }");
        let s = Subst::from([("x".into(), Term::int(7))]);
        assert_eq!(before.substitute(&s).unwrap(), before);
    }

    #[test]
    fn session_value_becomes_role_channel() {
        // After receiving a session name `x`, `x[rB]` becomes a concrete endpoint.
        let body = Process::Call {
            name: "B".into(),
            args: vec![Term::Chan(Channel::role("x", "rB"))],
        };
        let s = Subst::from([("x".into(), Term::Val(Value::Session("Ph".into())))]);
        let got = body.substitute(&s).unwrap();
        assert_eq!(
            got,
            Process::Call {
                name: "B".into(),
                args: vec![Term::Chan(Channel::role("Ph", "rB"))],
            }
        );
    }

    #[test]
    fn avoids_capture() {
        // x free, substituted by y; the inner binder y must be renamed.
        let proc = Process::Branch {
            chan: Channel::role("s", "rA"),
            partner: "rB".into(),
            arms: vec![BranchArm {
                label: "l".into(),
                binder: "y".into(),
                cont: Process::Call {
                    name: "X".into(),
                    args: vec![Term::var("x"), Term::var("y")],
                },
            }],
        };
        let s = Subst::from([("x".into(), Term::var("y"))]);
        let got = proc.substitute(&s).unwrap();
        let Process::Branch { arms, .. } = &got else { panic!() };
        assert_ne!(arms[0].binder, "y");
        let Process::Call { args, .. } = &arms[0].cont else { panic!() };
        assert_eq!(args[0], Term::var("y"));
        assert_eq!(args[1], Term::var(arms[0].binder.clone()));
    }

    #[test]
    fn arity_is_checked() {
        let err = instantiate("X", &["a".into()], &[], &Process::Nil).unwrap_err();
        assert_eq!(
            err,
            SubstError::ArityMismatch {
                name: "X".into(),
                expected: 1,
                found: 0
            }
        );
    }
}
