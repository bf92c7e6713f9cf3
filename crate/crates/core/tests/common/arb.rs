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

//! Generator of well-scoped processes whose printed form parses back.

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

use pmst_core::ast::{Annotation, BranchArm, Channel, Process, SelectBranch, Term, Value};
use pmst_core::{parse_global_type, Prob};

const VARS: [&str; 3] = ["x0", "x1", "x2"];
const SESSIONS: [&str; 2] = ["s0", "s1"];
const ROLES: [&str; 3] = ["rA", "rB", "rC"];
const LABELS: [&str; 4] = ["l0", "l1", "l2", "l3"];

#[derive(Clone, Debug, Default)]
pub struct Scope {
    vars: Vec<String>,
    sessions: Vec<String>,
}

fn arb_prob() -> impl Strategy<Value = Prob> {
    (1u64..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| Prob::new(n, d).unwrap()))
}

fn arb_channel(scope: &Scope) -> BoxedStrategy<Channel> {
    let mut sessions: Vec<String> = scope.sessions.clone();
    sessions.push("k".into());
    let role = (select(sessions), select(ROLES.to_vec())).prop_map(|(s, r)| Channel::role(s, r));
    if scope.vars.is_empty() {
        role.boxed()
    } else {
        prop_oneof![role, select(scope.vars.clone()).prop_map(Channel::Var)].boxed()
    }
}

fn arb_term(scope: &Scope) -> BoxedStrategy<Term> {
    let mut options: Vec<BoxedStrategy<Term>> = vec![
        (-5i64..40).prop_map(Term::int).boxed(),
        any::<bool>().prop_map(|b| Term::Val(Value::Bool(b))).boxed(),
        "[a-z \"\\\\]{0,6}".prop_map(Term::str).boxed(),
        arb_channel(scope).prop_map(Term::Chan).boxed(),
    ];
    if !scope.sessions.is_empty() {
        options.push(select(scope.sessions.clone()).prop_map(|s| Term::Val(Value::Session(s))).boxed());
    }
    proptest::strategy::Union::new(options).boxed()
}

fn arb_annotation() -> impl Strategy<Value = Option<Annotation>> {
    let g = parse_global_type("rec t . rA -> rB { [0,1]: l0(nat). t, 1/2: l1(bool). rB -> rC { 1: l2(string). end } }")
        .unwrap();
    prop_oneof![
        Just(None),
        Just(Some(Annotation::Path("g.gty".into()))),
        Just(Some(Annotation::Global(g))),
    ]
}

pub fn arb_process(scope: Scope, depth: u32) -> BoxedStrategy<Process> {
    let call = (select(vec!["X0", "X1"]), vec(arb_term(&scope), 0..3))
        .prop_map(|(n, args)| Process::Call { name: n.into(), args });
    if depth == 0 {
        return prop_oneof![Just(Process::Nil), call].boxed();
    }
    let d = depth - 1;
    let select_p = {
        let scope = scope.clone();
        (arb_channel(&scope), select(ROLES.to_vec()), subsequence(LABELS.to_vec(), 1..=3))
            .prop_flat_map(move |(chan, partner, labels)| {
                let branches: Vec<_> = labels
                    .into_iter()
                    .map(|l| {
                        (arb_prob(), arb_term(&scope), arb_process(scope.clone(), d)).prop_map(move |(prob, payload, cont)| {
                            SelectBranch { prob, label: l.into(), payload, cont }
                        })
                    })
                    .collect();
                branches.prop_map(move |branches| Process::Select { chan: chan.clone(), partner: partner.into(), branches })
            })
    };
    let branch_p = {
        let scope = scope.clone();
        (arb_channel(&scope), select(ROLES.to_vec()), subsequence(LABELS.to_vec(), 1..=3))
            .prop_flat_map(move |(chan, partner, labels)| {
                let arms: Vec<_> = labels
                    .into_iter()
                    .map(|l| {
                        let scope = scope.clone();
                        select(VARS.to_vec()).prop_flat_map(move |x| {
                            let mut inner = scope.clone();
                            inner.vars.push(x.into());
                            arb_process(inner, d).prop_map(move |cont| BranchArm { label: l.into(), binder: x.into(), cont })
                        })
                    })
                    .collect();
                arms.prop_map(move |arms| Process::Branch { chan: chan.clone(), partner: partner.into(), arms })
            })
    };
    let restrict_p = {
        let scope = scope.clone();
        (select(SESSIONS.to_vec()), arb_annotation()).prop_flat_map(move |(s, annotation)| {
            let mut inner = scope.clone();
            inner.sessions.push(s.into());
            arb_process(inner, d).prop_map(move |body| Process::Restrict {
                session: s.into(),
                annotation: annotation.clone(),
                body: Box::new(body),
            })
        })
    };
    let def_p = {
        let scope = scope.clone();
        (select(vec!["X0", "X1"]), subsequence(VARS.to_vec(), 0..=2)).prop_flat_map(move |(name, params)| {
            let body_scope = Scope { vars: params.iter().map(|p| p.to_string()).collect(), sessions: scope.sessions.clone() };
            (arb_process(body_scope, d), arb_process(scope.clone(), d)).prop_map(move |(body, sc)| {
                Process::def(name, params.iter().map(|p| p.to_string()).collect(), body, sc)
            })
        })
    };
    let par_p = (arb_process(scope.clone(), d), arb_process(scope.clone(), d)).prop_map(|(a, b)| Process::par(a, b));
    prop_oneof![1 => Just(Process::Nil), 1 => call, 3 => select_p, 3 => branch_p, 2 => restrict_p, 2 => def_p, 2 => par_p]
        .boxed()
}
