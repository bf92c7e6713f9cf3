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

//! Property harnesses: substitution, weakening and strengthening of the
//! typing judgment, invariance under structural congruence, and
//! intersection of typings.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{check_against, check_recording, CheckMode, ParamType, Signature, Sorting, TypeError, Typing};
use crate::ast::{fresh_name, Channel, Process, Subst, Term, Value};
use crate::dynamics::{congruence_rewrites, Axiom, Direction};
use crate::syntax::print_process;
use crate::typesys::{intersect_local, IntersectError, Local, Sort};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LemmaProperty {
    Substitution,
    TypeWeakening,
    SortWeakening,
    SortStrengthening,
    Congruence(Axiom, Direction),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    pub property: LemmaProperty,
    /// The process that was re-checked, printed.
    pub subject: String,
    pub failure: Option<String>,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn failures(&self) -> impl Iterator<Item = &LemmaCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn count(&self, property: impl Fn(LemmaProperty) -> bool) -> usize {
        self.checks.iter().filter(|c| property(c.property)).count()
    }

    fn record(&mut self, property: LemmaProperty, subject: &Process, outcome: Result<(), String>) {
        self.checks.push(LemmaCheck {
            property,
            subject: print_process(subject),
            failure: outcome.err(),
        });
    }
}

fn sample(sort: Sort) -> Term {
    Term::Val(match sort {
        Sort::Nat => Value::Int(1),
        Sort::Int => Value::Int(-1),
        Sort::Bool => Value::Bool(true),
        Sort::Str => Value::Str("v".into()),
    })
}

fn verdict(r: Result<(), TypeError>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Runs the substitution, weakening and strengthening properties on the
/// derivation of `Γ ⊢ P ▷ Δ` and on every judgment met at a branching arm.
pub fn verify_lemma_properties(
    gamma: &Sorting,
    p: &Process,
    delta: &Typing,
    mode: CheckMode,
) -> Result<LemmaReport, TypeError> {
    let judgments = check_recording(gamma, p, delta, mode)?;
    let mut report = LemmaReport::default();
    let mut subjects: Vec<(Sorting, Process, Typing)> = alloc::vec![(gamma.clone(), p.clone(), delta.clone())];
    for j in judgments {
        let (x, sort) = &j.binder;
        let s: Subst = [(x.clone(), sample(*sort))].into();
        match j.process.substitute(&s) {
            Ok(q) => {
                let r = check_against(&j.sorting, &q, &j.typing, mode);
                report.record(LemmaProperty::Substitution, &q, verdict(r));
            }
            Err(e) => report.record(LemmaProperty::Substitution, &j.process, Err(e.to_string())),
        }
        let mut with_binder = j.sorting.clone();
        if with_binder.insert_var(x.clone(), *sort).is_ok() {
            subjects.push((with_binder, j.process, j.typing));
        }
    }
    for (g, q, d) in subjects {
        let mut avoid: BTreeSet<String> = q.all_names();
        avoid.extend(d.names());
        avoid.extend(g.vars().keys().cloned());
        avoid.extend(g.proc_vars().keys().cloned());

        let s = fresh_name("w", &avoid);
        let mut wider = d.clone();
        wider.set(Channel::role(s, "r"), Local::End);
        report.record(LemmaProperty::TypeWeakening, &q, verdict(check_against(&g, &q, &wider, mode)));

        let x = fresh_name("X", &avoid);
        let mut g_proc = g.clone();
        let extra = Signature::new(alloc::vec![ParamType::Value(Sort::Nat), ParamType::Chan(Local::End)]);
        if g_proc.insert_proc_var(x.clone(), extra).is_ok() {
            report.record(LemmaProperty::SortWeakening, &q, verdict(check_against(&g_proc, &q, &d, mode)));
        }
        let v = fresh_name("v", &avoid);
        let mut g_var = g.clone();
        if g_var.insert_var(v, Sort::Bool).is_ok() {
            report.record(LemmaProperty::SortWeakening, &q, verdict(check_against(&g_var, &q, &d, mode)));
        }

        let free = q.free_proc_vars();
        let mut stripped = g_proc.clone();
        for y in g_proc.proc_vars().keys().filter(|y| !free.contains(*y)) {
            stripped.remove_proc_var(y);
        }
        report.record(LemmaProperty::SortStrengthening, &q, verdict(check_against(&stripped, &q, &d, mode)));
    }
    Ok(report)
}

/// Checks `Γ ⊢ P′ ▷ Δ` for every one-step congruence rewrite `P′` of `P`.
pub fn verify_congruence_preservation(
    gamma: &Sorting,
    p: &Process,
    delta: &Typing,
    mode: CheckMode,
) -> Result<LemmaReport, TypeError> {
    check_against(gamma, p, delta, mode)?;
    let mut report = LemmaReport::default();
    for rw in congruence_rewrites(p) {
        let r = check_against(gamma, &rw.result, delta, mode);
        report.record(LemmaProperty::Congruence(rw.axiom, rw.direction), &rw.result, verdict(r));
    }
    Ok(report)
}

/// `Δ1 ∩ Δ2`: pointwise intersection of intervals over equal domains.
pub fn intersect_typing(d1: &Typing, d2: &Typing) -> Result<Typing, IntersectError> {
    if d1.len() != d2.len() {
        return Err(IntersectError::DomainMismatch);
    }
    d1.iter()
        .map(|(c, t1)| {
            let t2 = d2.get(c).ok_or(IntersectError::DomainMismatch)?;
            Ok((c.clone(), intersect_local(t1, t2)?))
        })
        .collect()
}

/// `Γ1 ∩ Γ2`: equal value sorts, and signatures intersected parameter-wise.
pub fn intersect_sorting(g1: &Sorting, g2: &Sorting) -> Result<Sorting, IntersectError> {
    if g1.vars() != g2.vars() || g1.proc_vars().len() != g2.proc_vars().len() {
        return Err(IntersectError::DomainMismatch);
    }
    let mut out = Sorting::new();
    for (x, s) in g1.vars() {
        out.insert_var(x.clone(), *s).map_err(|_| IntersectError::DomainMismatch)?;
    }
    for (x, sig1) in g1.proc_vars() {
        let sig2 = g2.proc_var(x).ok_or(IntersectError::DomainMismatch)?;
        if sig1.params.len() != sig2.params.len() {
            return Err(IntersectError::ShapeMismatch);
        }
        let params = sig1
            .params
            .iter()
            .zip(&sig2.params)
            .map(|pair| match pair {
                (ParamType::Value(a), ParamType::Value(b)) if a == b => Ok(ParamType::Value(*a)),
                (ParamType::Chan(a), ParamType::Chan(b)) => Ok(ParamType::Chan(intersect_local(a, b)?)),
                _ => Err(IntersectError::ShapeMismatch),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.insert_proc_var(x.clone(), Signature::new(params))
            .map_err(|_| IntersectError::DomainMismatch)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectionError {
    #[error("premise does not hold: {0}")]
    Premise(TypeError),
    #[error("intersection undefined: {0}")]
    Undefined(IntersectError),
    #[error("process does not check against the intersection: {0}")]
    Recheck(TypeError),
}

/// Given `Γ1 ⊢ P ▷ Δ1` and `Γ2 ⊢ P ▷ Δ2`, builds `Γ1 ∩ Γ2` and `Δ1 ∩ Δ2` and
/// checks `P` against them.
pub fn verify_intersection(
    p: &Process,
    (g1, d1): (&Sorting, &Typing),
    (g2, d2): (&Sorting, &Typing),
    mode: CheckMode,
) -> Result<(Sorting, Typing), IntersectionError> {
    check_against(g1, p, d1, mode).map_err(IntersectionError::Premise)?;
    check_against(g2, p, d2, mode).map_err(IntersectionError::Premise)?;
    let g = intersect_sorting(g1, g2).map_err(IntersectionError::Undefined)?;
    let d = intersect_typing(d1, d2).map_err(IntersectionError::Undefined)?;
    check_against(&g, p, &d, mode).map_err(IntersectionError::Recheck)?;
    Ok((g, d))
}
