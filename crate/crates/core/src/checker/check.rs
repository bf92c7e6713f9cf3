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

//! The syntax-directed typing algorithm.
//!
//! Restrictions take their typing from the projections of their annotation.
//! A definition's signature is fixed at its first call site from the sorts
//! and types of the actual arguments, and the body is checked then.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{chan_text, CheckMode, ParamType, Signature, Sorting, TypeError, TypeErrorKind, Typing};
use crate::ast::{fresh_name, Annotation, BranchArm, Channel, Process, SelectBranch, Term, Value};
use crate::prob::{sum, Prob};
use crate::syntax::print_local;
use crate::typesys::{equi_eq, project, well_formed, GlobalType, Local, Sort, WellFormedReport};

/// A sub-derivation `Γ, x:S ⊢ P ▷ Δ` met at a branching arm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgment {
    /// Γ, without the arm binder.
    pub sorting: Sorting,
    pub binder: (String, Sort),
    pub process: Process,
    pub typing: Typing,
}

struct DefEntry {
    params: Vec<String>,
    /// `None` for signatures supplied by the caller's sorting.
    body: Option<Process>,
    vars: BTreeMap<String, Sort>,
    procs: BTreeMap<String, usize>,
    sig: Option<Signature>,
}

#[derive(Clone, Default)]
struct Env {
    vars: BTreeMap<String, Sort>,
    procs: BTreeMap<String, usize>,
}

enum Arg {
    Value(Sort),
    Chan(Channel),
    Session(String),
}

impl Arg {
    fn describe(&self) -> String {
        match self {
            Arg::Value(s) => s.to_string(),
            Arg::Chan(c) => format!("channel {}", chan_text(c)),
            Arg::Session(s) => format!("session name `{s}`"),
        }
    }
}

fn fits(found: Sort, expected: Sort) -> bool {
    found == expected || (found == Sort::Nat && expected == Sort::Int)
}

fn sorted_labels<'a, I: IntoIterator<Item = &'a String>>(labels: I) -> Vec<String> {
    let mut v: Vec<String> = labels.into_iter().cloned().collect();
    v.sort();
    v
}

struct Checker {
    mode: CheckMode,
    defs: Vec<DefEntry>,
    path: Vec<&'static str>,
    recorded: Option<Vec<Judgment>>,
}

impl Checker {
    fn new(gamma: &Sorting, mode: CheckMode, record: bool) -> (Checker, Env) {
        let mut defs = Vec::new();
        let mut procs = BTreeMap::new();
        for (x, sig) in gamma.proc_vars() {
            procs.insert(x.clone(), defs.len());
            defs.push(DefEntry {
                params: Vec::new(),
                body: None,
                vars: BTreeMap::new(),
                procs: BTreeMap::new(),
                sig: Some(sig.clone()),
            });
        }
        let checker = Checker {
            mode,
            defs,
            path: Vec::new(),
            recorded: record.then(Vec::new),
        };
        (
            checker,
            Env {
                vars: gamma.vars().clone(),
                procs,
            },
        )
    }

    fn fail<T>(&self, kind: TypeErrorKind) -> Result<T, TypeError> {
        Err(TypeError {
            kind: Box::new(kind),
            rules: self.path.clone(),
        })
    }

    fn rule<T>(&mut self, name: &'static str, f: impl FnOnce(&mut Self) -> Result<T, TypeError>) -> Result<T, TypeError> {
        self.path.push(name);
        let r = f(self);
        self.path.pop();
        r
    }

    fn arg(&self, env: &Env, delta: &Typing, t: &Term) -> Result<Arg, TypeError> {
        Ok(match t {
            Term::Val(Value::Int(n)) => Arg::Value(if *n >= 0 { Sort::Nat } else { Sort::Int }),
            Term::Val(Value::Bool(_)) => Arg::Value(Sort::Bool),
            Term::Val(Value::Str(_)) => Arg::Value(Sort::Str),
            Term::Val(Value::Session(s)) => Arg::Session(s.clone()),
            Term::Chan(c @ Channel::Role { .. }) => Arg::Chan(c.clone()),
            Term::Chan(c @ Channel::Var(x)) => {
                if delta.contains(c) {
                    Arg::Chan(c.clone())
                } else if let Some(s) = env.vars.get(x) {
                    Arg::Value(*s)
                } else {
                    return self.fail(TypeErrorKind::UnboundVariable(x.clone()));
                }
            }
        })
    }

    fn check(&mut self, env: &Env, p: &Process, delta: Typing) -> Result<(), TypeError> {
        match p {
            Process::Nil => self.rule("TEnd", |c| {
                let open = delta.non_end();
                if open.is_empty() {
                    Ok(())
                } else {
                    c.fail(TypeErrorKind::ResidualNotEndOnly(open))
                }
            }),
            Process::Par(l, r) => self.rule("TConc", |c| {
                let (fl, fr) = (l.free_channels(), r.free_channels());
                let (mut dl, mut dr) = (Typing::new(), Typing::new());
                for (ch, t) in delta.iter() {
                    match (fl.contains(ch), fr.contains(ch)) {
                        (true, true) => return c.fail(TypeErrorKind::NonDisjointTyping(ch.clone())),
                        (false, true) => dr.set(ch.clone(), t.clone()),
                        _ => dl.set(ch.clone(), t.clone()),
                    }
                }
                c.check(env, l, dl)?;
                c.check(env, r, dr)
            }),
            Process::Select { chan, partner, branches } => {
                self.rule("TSelect", |c| c.select(env, chan, partner, branches, delta))
            }
            Process::Branch { chan, partner, arms } => self.rule("TBranch", |c| c.branch(env, chan, partner, arms, delta)),
            Process::Restrict { session, annotation, body } => {
                self.rule("TRes", |c| c.restrict(env, session, annotation.as_ref(), body, delta))
            }
            Process::Def { name, params, body, scope } => self.rule("TDef", |c| {
                let idx = c.defs.len();
                let mut procs = env.procs.clone();
                procs.insert(name.clone(), idx);
                c.defs.push(DefEntry {
                    params: params.clone(),
                    body: Some((**body).clone()),
                    vars: env.vars.clone(),
                    procs: procs.clone(),
                    sig: None,
                });
                let inner = Env {
                    vars: env.vars.clone(),
                    procs,
                };
                c.check(&inner, scope, delta)?;
                if c.defs[idx].sig.is_none() && params.is_empty() {
                    c.resolve(idx, Signature::default())?;
                }
                Ok(())
            }),
            Process::Call { name, args } => self.rule("TCall", |c| c.call(env, name, args, delta)),
        }
    }

    fn select(
        &mut self,
        env: &Env,
        chan: &Channel,
        partner: &str,
        branches: &[SelectBranch],
        delta: Typing,
    ) -> Result<(), TypeError> {
        let Some(ty) = delta.get(chan) else {
            return self.fail(TypeErrorKind::UntypedChannel(chan.clone()));
        };
        let Local::Select { partner: tp, arms } = ty.unfold() else {
            return self.fail(TypeErrorKind::ChannelTypeMismatch {
                chan: chan.clone(),
                expected: format!("a selection towards `{partner}`"),
                found: ty.clone(),
            });
        };
        if tp != partner {
            return self.fail(TypeErrorKind::ChannelTypeMismatch {
                chan: chan.clone(),
                expected: format!("a selection towards `{partner}`"),
                found: ty.clone(),
            });
        }
        let found = sorted_labels(branches.iter().map(|b| &b.label));
        let expected = sorted_labels(arms.iter().map(|a| &a.label));
        let subset = found.iter().all(|l| expected.contains(l));
        if !subset || (self.mode == CheckMode::Strict && found.len() != expected.len()) {
            return self.fail(TypeErrorKind::LabelSetMismatch {
                chan: chan.clone(),
                found,
                expected,
            });
        }
        let total = sum(branches.iter().map(|b| &b.prob));
        if !num_traits::One::is_one(&total) {
            return self.fail(TypeErrorKind::ProbSumNotOne {
                chan: chan.clone(),
                sum: total,
            });
        }
        let arm_of = |label: &str| arms.iter().find(|a| a.label == label).expect("label checked");
        for b in branches {
            let arm = arm_of(&b.label);
            if !arm.annot.contains(&b.prob) {
                return self.fail(TypeErrorKind::ProbOutsideInterval {
                    label: b.label.clone(),
                    prob: b.prob.clone(),
                    delta: arm.annot.clone(),
                });
            }
        }
        for arm in arms.iter().filter(|a| !found.contains(&a.label)) {
            if !arm.annot.contains(&Prob::zero()) {
                return self.fail(TypeErrorKind::ProbOutsideInterval {
                    label: arm.label.clone(),
                    prob: Prob::zero(),
                    delta: arm.annot.clone(),
                });
            }
        }
        for b in branches {
            let arm = arm_of(&b.label);
            match self.rule("TVal", |c| c.arg(env, &delta, &b.payload))? {
                Arg::Value(s) if fits(s, arm.sort) => {}
                other => {
                    return self.fail(TypeErrorKind::SortMismatch {
                        context: format!("payload of `{}`", b.label),
                        expected: arm.sort.to_string(),
                        found: other.describe(),
                    })
                }
            }
        }
        for b in branches {
            let mut d = delta.clone();
            d.set(chan.clone(), arm_of(&b.label).cont.clone());
            self.check(env, &b.cont, d)?;
        }
        Ok(())
    }

    fn branch(&mut self, env: &Env, chan: &Channel, partner: &str, arms: &[BranchArm], delta: Typing) -> Result<(), TypeError> {
        let Some(ty) = delta.get(chan) else {
            return self.fail(TypeErrorKind::UntypedChannel(chan.clone()));
        };
        let mismatch = || TypeErrorKind::ChannelTypeMismatch {
            chan: chan.clone(),
            expected: format!("a branching from `{partner}`"),
            found: ty.clone(),
        };
        let Local::Branch { partner: tp, arms: tarms } = ty.unfold() else {
            return self.fail(mismatch());
        };
        if tp != partner {
            return self.fail(mismatch());
        }
        let found = sorted_labels(arms.iter().map(|a| &a.label));
        let expected = sorted_labels(tarms.iter().map(|a| &a.label));
        if found != expected {
            return self.fail(TypeErrorKind::LabelSetMismatch {
                chan: chan.clone(),
                found,
                expected,
            });
        }
        for arm in arms {
            let tarm = tarms.iter().find(|t| t.label == arm.label).expect("labels checked");
            let (binder, cont) = if delta.names().contains(&arm.binder) {
                let mut avoid = delta.names();
                avoid.extend(arm.cont.all_names());
                let fresh = fresh_name(&arm.binder, &avoid);
                let cont = arm.cont.rename_name(&arm.binder, &fresh);
                (fresh, cont)
            } else {
                (arm.binder.clone(), arm.cont.clone())
            };
            let mut inner = env.clone();
            inner.vars.insert(binder.clone(), tarm.sort);
            let mut d = delta.clone();
            d.set(chan.clone(), tarm.cont.clone());
            self.check(&inner, &cont, d.clone())?;
            let sorting = self.recorded.is_some().then(|| self.sorting_of(env, &cont)).flatten();
            if let (Some(recorded), Some(sorting)) = (self.recorded.as_mut(), sorting) {
                recorded.push(Judgment {
                    sorting,
                    binder: (binder, tarm.sort),
                    process: cont,
                    typing: d,
                });
            }
        }
        Ok(())
    }

    fn sorting_of(&self, env: &Env, p: &Process) -> Option<Sorting> {
        let mut s = Sorting::new();
        for (x, sort) in &env.vars {
            s.insert_var(x.clone(), *sort).ok()?;
        }
        for (x, idx) in &env.procs {
            if let Some(sig) = &self.defs[*idx].sig {
                s.insert_proc_var(x.clone(), sig.clone()).ok()?;
            }
        }
        p.free_proc_vars().iter().all(|x| s.proc_var(x).is_some()).then_some(s)
    }

    fn restrict(
        &mut self,
        env: &Env,
        session: &str,
        annotation: Option<&Annotation>,
        body: &Process,
        delta: Typing,
    ) -> Result<(), TypeError> {
        let g = match annotation {
            None => return self.fail(TypeErrorKind::MissingAnnotation(session.into())),
            Some(Annotation::Path(path)) => {
                return self.fail(TypeErrorKind::UnresolvedAnnotation {
                    session: session.into(),
                    path: path.clone(),
                })
            }
            Some(Annotation::Global(g)) => g,
        };
        if let Err(e) = g.validate() {
            return self.fail(TypeErrorKind::AnnotationNotWellFormed {
                session: session.into(),
                detail: e.to_string(),
            });
        }
        let (name, body) = rename_apart(session, body, delta.names());
        let delta = match extend_with_projections(&name, g, delta) {
            Ok(d) => d,
            Err(kind) => return self.fail(*kind),
        };
        self.check(env, &body, delta)?;
        let report = well_formed(g);
        if !report.ok {
            return self.fail(TypeErrorKind::AnnotationNotWellFormed {
                session: session.into(),
                detail: describe_report(&report),
            });
        }
        Ok(())
    }

    fn resolve(&mut self, idx: usize, sig: Signature) -> Result<(), TypeError> {
        self.defs[idx].sig = Some(sig.clone());
        let entry = &self.defs[idx];
        let Some(body) = entry.body.clone() else {
            return Ok(());
        };
        let mut inner = Env {
            vars: entry.vars.clone(),
            procs: entry.procs.clone(),
        };
        let mut d = Typing::new();
        for (x, pt) in entry.params.clone().into_iter().zip(sig.params) {
            match pt {
                ParamType::Value(s) => {
                    inner.vars.insert(x, s);
                }
                ParamType::Chan(t) => {
                    inner.vars.remove(&x);
                    if let Err(c) = d.insert(Channel::Var(x), t) {
                        return self.fail(TypeErrorKind::NonDisjointTyping(c));
                    }
                }
            }
        }
        self.rule("TDef", |c| c.check(&inner, &body, d))
    }

    fn call(&mut self, env: &Env, name: &str, args: &[Term], delta: Typing) -> Result<(), TypeError> {
        let Some(&idx) = env.procs.get(name) else {
            return self.fail(TypeErrorKind::UnknownProcVar(name.into()));
        };
        let entry = &self.defs[idx];
        let arity = match (&entry.body, &entry.sig) {
            (None, Some(sig)) => sig.params.len(),
            _ => entry.params.len(),
        };
        if arity != args.len() {
            return self.fail(TypeErrorKind::ArityMismatch {
                name: name.into(),
                expected: arity,
                found: args.len(),
            });
        }
        let kinds = args
            .iter()
            .map(|a| self.arg(env, &delta, a))
            .collect::<Result<Vec<_>, _>>()?;
        if self.defs[idx].sig.is_none() {
            let mut params = Vec::new();
            for (i, k) in kinds.iter().enumerate() {
                params.push(match k {
                    Arg::Value(s) => ParamType::Value(*s),
                    Arg::Chan(c) => match delta.get(c) {
                        Some(t) => ParamType::Chan(t.clone()),
                        None => return self.fail(TypeErrorKind::UntypedChannel(c.clone())),
                    },
                    Arg::Session(_) => {
                        return self.fail(TypeErrorKind::SortMismatch {
                            context: format!("argument {} of `{name}`", i + 1),
                            expected: "a value or a channel".into(),
                            found: k.describe(),
                        })
                    }
                });
            }
            self.resolve(idx, Signature::new(params))?;
        }
        let sig = self.defs[idx].sig.clone().expect("signature resolved");
        let mut rest = delta.clone();
        for (i, (k, pt)) in kinds.iter().zip(&sig.params).enumerate() {
            let context = || format!("argument {} of `{name}`", i + 1);
            match (k, pt) {
                (Arg::Value(s), ParamType::Value(e)) if fits(*s, *e) => {}
                (Arg::Chan(c), ParamType::Chan(t)) => {
                    let Some(ct) = rest.remove(c) else {
                        return self.fail(if delta.contains(c) {
                            TypeErrorKind::NonDisjointTyping(c.clone())
                        } else {
                            TypeErrorKind::UntypedChannel(c.clone())
                        });
                    };
                    if !equi_eq(&ct, t) {
                        return self.fail(TypeErrorKind::ChannelTypeMismatch {
                            chan: c.clone(),
                            expected: print_local(t),
                            found: ct,
                        });
                    }
                }
                (_, ParamType::Value(e)) => {
                    return self.fail(TypeErrorKind::SortMismatch {
                        context: context(),
                        expected: e.to_string(),
                        found: k.describe(),
                    })
                }
                (_, ParamType::Chan(t)) => {
                    return self.fail(TypeErrorKind::SortMismatch {
                        context: context(),
                        expected: format!("a channel of type {}", print_local(t)),
                        found: k.describe(),
                    })
                }
            }
        }
        let open = rest.non_end();
        if !open.is_empty() {
            return self.fail(TypeErrorKind::ResidualNotEndOnly(open));
        }
        Ok(())
    }
}

/// Renames a restricted name that occurs in `taken`.
fn rename_apart(session: &str, body: &Process, taken: BTreeSet<String>) -> (String, Process) {
    if !taken.contains(session) {
        return (session.into(), body.clone());
    }
    let mut avoid = taken;
    avoid.extend(body.all_names());
    let fresh = fresh_name(session, &avoid);
    let body = body.rename_name(session, &fresh);
    (fresh, body)
}

fn extend_with_projections(session: &str, g: &GlobalType, mut delta: Typing) -> Result<Typing, Box<TypeErrorKind>> {
    for r in g.roles() {
        let t = project(g, &r).map_err(|e| {
            Box::new(TypeErrorKind::ProjectionMismatch {
                session: session.into(),
                role: r.clone(),
                detail: e.to_string(),
            })
        })?;
        delta
            .insert(Channel::role(session, r), t)
            .map_err(|c| Box::new(TypeErrorKind::NonDisjointTyping(c)))?;
    }
    Ok(delta)
}

fn describe_report(r: &WellFormedReport) -> String {
    if let Some(e) = &r.term_error {
        return e.to_string();
    }
    if let Some((role, Err(e))) = r.per_role.iter().find(|(_, p)| p.is_err()) {
        return format!("projection on `{role}`: {e}");
    }
    let sets: Vec<String> = r
        .bad_interval_sets
        .iter()
        .map(|i| {
            let deltas: Vec<String> = i.deltas.iter().map(crate::syntax::interval_text).collect();
            format!(
                "interval set {{{}}} of {} -> {} is {}",
                deltas.join(", "),
                i.from,
                i.to,
                if i.proper { "not reachable" } else { "not proper" }
            )
        })
        .collect();
    sets.join("; ")
}

/// Checks `Γ ⊢ P ▷ Δ`.
pub fn check_against(gamma: &Sorting, p: &Process, delta: &Typing, mode: CheckMode) -> Result<(), TypeError> {
    let (mut c, env) = Checker::new(gamma, mode, false);
    c.check(&env, p, delta.clone())
}

/// Reconstructs the typing of a process whose channels are all bound by
/// annotated restrictions; that typing is empty.
pub fn type_check(gamma: &Sorting, p: &Process, mode: CheckMode) -> Result<Typing, TypeError> {
    check_against(gamma, p, &Typing::new(), mode)?;
    Ok(Typing::new())
}

/// Like [`check_against`], also returning the judgments derived at every
/// branching arm.
pub fn check_recording(gamma: &Sorting, p: &Process, delta: &Typing, mode: CheckMode) -> Result<Vec<Judgment>, TypeError> {
    let (mut c, env) = Checker::new(gamma, mode, true);
    c.check(&env, p, delta.clone())?;
    Ok(c.recorded.unwrap_or_default())
}

/// Strips the outermost annotated restrictions of `p`, adding the
/// projections of their annotations to `delta`. Unannotated restrictions
/// are kept in place.
pub fn open_restrictions(p: &Process, delta: &Typing) -> Result<(Process, Typing), TypeError> {
    let mut kept = Vec::new();
    let mut delta = delta.clone();
    let mut cur = p.clone();
    loop {
        match cur {
            Process::Restrict {
                session,
                annotation: Some(Annotation::Global(g)),
                body,
            } => {
                let mut taken = delta.names();
                taken.extend(kept.iter().map(|(s, _): &(String, _)| s.clone()));
                let (name, body) = rename_apart(&session, &body, taken);
                delta = extend_with_projections(&name, &g, delta).map_err(|kind| TypeError {
                    kind,
                    rules: alloc::vec!["TRes"],
                })?;
                cur = body;
            }
            Process::Restrict {
                session,
                annotation,
                body,
            } => {
                kept.push((session, annotation));
                cur = *body;
            }
            other => {
                cur = other;
                break;
            }
        }
    }
    for (session, annotation) in kept.into_iter().rev() {
        cur = Process::Restrict {
            session,
            annotation,
            body: alloc::boxed::Box::new(cur),
        };
    }
    Ok((cur, delta))
}
