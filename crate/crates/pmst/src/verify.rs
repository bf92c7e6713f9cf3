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

//! The property harness run by `pmst verify`.

use pmst_core::analysis::{total_probability, TotalProbability};
use pmst_core::checker::{
    check_deadlock_freedom, find_stuck_states, intersect_typing, open_restrictions, type_check,
    verify_congruence_preservation, verify_intersection, verify_lemma_properties, verify_subject_reduction, CheckMode,
    DeadlockVerdict, Sorting, TypeErrorKind, Typing,
};
use pmst_core::dynamics::normal_form;
use pmst_core::typesys::{classify_interval_set, well_formed, IntersectError};
use pmst_core::{Interval, Prob};

use crate::corpus;

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub mode: CheckMode,
    /// Depth of the subject reduction exploration.
    pub depth: usize,
    /// Step bound of the deadlock exploration.
    pub bound: usize,
    /// Largest `k` of the total probability audit.
    pub k: usize,
    pub cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            mode: CheckMode::Subset,
            depth: 5,
            bound: 64,
            k: 6,
            cap: pmst_core::analysis::DEFAULT_EXPLOSION_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn outcome(name: impl Into<String>, r: Result<String, String>) -> Outcome {
    let (pass, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome { name: name.into(), pass, detail }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs every harness over the embedded corpus, in a fixed order.
pub fn verify_corpus(cfg: &VerifyConfig) -> Vec<Outcome> {
    let mut out = vec![
        outcome("interval classification", interval_classification()),
        outcome("well-formedness of ga_all01/ga_unreachable", well_formedness()),
    ];
    for name in corpus::TYPED {
        out.push(outcome(format!("{name}: type check"), typed(name, cfg)));
        out.push(outcome(format!("{name}: subject reduction"), subject_reduction(name, cfg)));
        out.push(outcome(format!("{name}: deadlock freedom"), deadlock_freedom(name, cfg)));
        out.push(outcome(format!("{name}: lemma properties"), lemmas(name, cfg)));
        out.push(outcome(format!("{name}: total probability"), total(name, cfg)));
    }
    out.push(outcome("system_simple_badquit.mps: rejected", badquit(cfg)));
    out.push(outcome(format!("{}: stuck state", corpus::DEADLOCK_COUNTEREXAMPLE), counterexample(cfg)));
    out.push(outcome("intersection of erase-equal typings", intersection(cfg)));
    out
}

fn interval_classification() -> Result<String, String> {
    let full = Interval::full();
    let high = Interval::new(Prob::new(19, 20).unwrap(), Prob::one()).unwrap();
    let a = classify_interval_set(&[full.clone(), full.clone(), full.clone(), full.clone()]);
    let b = classify_interval_set(&[full, high]);
    if a.proper && a.reachable && b.proper && !b.reachable {
        Ok("{[0,1]}x4 proper and reachable; {[0,1],[0.95,1]} proper, not reachable".into())
    } else {
        Err(format!("got {a:?} and {b:?}"))
    }
}

fn well_formedness() -> Result<String, String> {
    let ok = well_formed(&corpus::global("ga_all01.gty").map_err(err)?);
    let bad = well_formed(&corpus::global("ga_unreachable.gty").map_err(err)?);
    let outer_flagged = bad.bad_interval_sets.iter().any(|i| i.path.is_empty() && i.proper && !i.reachable);
    if ok.ok && !bad.ok && outer_flagged {
        Ok("ga_all01 well-formed; ga_unreachable flags its outer interval set".into())
    } else {
        Err(format!("ga_all01 ok={}, ga_unreachable ok={} outer flagged={outer_flagged}", ok.ok, bad.ok))
    }
}

fn typed(name: &str, cfg: &VerifyConfig) -> Result<String, String> {
    let p = corpus::system(name).map_err(err)?;
    type_check(&Sorting::new(), &p, cfg.mode).map_err(err)?;
    let (_, delta) = open_restrictions(&p, &Typing::new()).map_err(err)?;
    Ok(format!("typed; sessions {delta}"))
}

fn subject_reduction(name: &str, cfg: &VerifyConfig) -> Result<String, String> {
    let p = corpus::system(name).map_err(err)?;
    let r = verify_subject_reduction(&Sorting::new(), &p, cfg.depth, cfg.mode).map_err(err)?;
    if let Some(v) = r.violations.first() {
        return Err(format!("{} violations; first after {:?} on {}", r.violations.len(), v.trace, v.label));
    }
    let bad = r.matched.iter().filter(|m| m.delta.as_ref().is_some_and(|d| !d.contains_rational(&m.scaled))).count();
    if bad > 0 {
        return Err(format!("{bad} matched steps outside their interval"));
    }
    Ok(format!("{} states, {} steps, depth {}", r.states, r.steps, r.depth))
}

fn deadlock_freedom(name: &str, cfg: &VerifyConfig) -> Result<String, String> {
    let p = corpus::system(name).map_err(err)?;
    match check_deadlock_freedom(&p, cfg.bound, cfg.mode) {
        DeadlockVerdict::DeadlockFree { states } => Ok(format!("{states} states, every stuck state is 0")),
        v => Err(format!("{v:?}")),
    }
}

fn lemmas(name: &str, cfg: &VerifyConfig) -> Result<String, String> {
    let p = corpus::system(name).map_err(err)?;
    let g = Sorting::new();
    let mut checks = 0;
    let mut failures = Vec::new();
    let (open, delta) = open_restrictions(&normal_form(&p), &Typing::new()).map_err(err)?;
    for r in [
        verify_lemma_properties(&g, &p, &Typing::new(), cfg.mode),
        verify_congruence_preservation(&g, &p, &Typing::new(), cfg.mode),
        verify_congruence_preservation(&g, &open, &delta, cfg.mode),
    ] {
        let r = r.map_err(err)?;
        checks += r.checks.len();
        failures.extend(r.failures().map(|c| format!("{:?} on {}: {}", c.property, c.subject, c.failure.clone().unwrap_or_default())));
    }
    match failures.first() {
        None => Ok(format!("{checks} transformations preserve typing")),
        Some(f) => Err(format!("{} of {checks} failed; first: {f}", failures.len())),
    }
}

fn total(name: &str, cfg: &VerifyConfig) -> Result<String, String> {
    let p = corpus::system(name).map_err(err)?;
    let mut computed = 0;
    for k in 1..=cfg.k {
        match total_probability(&p, k, cfg.cap).map_err(err)? {
            TotalProbability::Sum(s) if s == *Prob::one().as_rational() => computed += 1,
            TotalProbability::Sum(s) => return Err(format!("k={k}: sum {}", pmst_core::prob::render(&s))),
            TotalProbability::NotComputed => {}
        }
    }
    Ok(format!("sum is 1/1 for {computed} of k=1..{}", cfg.k))
}

fn badquit(cfg: &VerifyConfig) -> Result<String, String> {
    let p = corpus::system("system_simple_badquit.mps").map_err(err)?;
    match type_check(&Sorting::new(), &p, cfg.mode) {
        Err(e) if matches!(*e.kind, TypeErrorKind::ProbOutsideInterval { .. }) => Ok(e.to_string()),
        Err(e) => Err(format!("unexpected error {e}")),
        Ok(_) => Err("accepted".into()),
    }
}

fn counterexample(cfg: &VerifyConfig) -> Result<String, String> {
    let p = corpus::system(corpus::DEADLOCK_COUNTEREXAMPLE).map_err(err)?;
    if type_check(&Sorting::new(), &p, cfg.mode).is_ok() {
        return Err("unexpectedly well typed".into());
    }
    let e = find_stuck_states(&p, cfg.bound).map_err(err)?;
    match e.stuck.first() {
        Some(s) => Ok(format!("stuck at {}", pmst_core::syntax::print_process(&s.state))),
        None => Err("no stuck state found".into()),
    }
}

fn intersection(cfg: &VerifyConfig) -> Result<String, String> {
    let open = |gty: &str| -> Result<_, String> {
        let p = corpus::system_with("system_simple.mps", Some(gty)).map_err(err)?;
        open_restrictions(&p, &Typing::new()).map_err(err)
    };
    let (body, da) = open("ga_variant_a.gty")?;
    let (_, db) = open("ga_variant_b.gty")?;
    let (_, dd) = open("ga_variant_disjoint.gty")?;
    let g = Sorting::new();
    let (_, both) = verify_intersection(&body, (&g, &da), (&g, &db), cfg.mode).map_err(err)?;
    match intersect_typing(&db, &dd) {
        Err(IntersectError::EmptyInterval(l)) => Ok(format!("variants a and b meet in {both}; b and disjoint undefined at {l}")),
        other => Err(format!("disjoint variants gave {other:?}")),
    }
}
