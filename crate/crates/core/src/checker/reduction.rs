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

//! Labelled reduction of typings and the subject reduction harness.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use super::{check_against, open_restrictions, CheckMode, HarnessError, Sorting, TypeError, Typing};
use crate::ast::{Channel, Process};
use crate::dynamics::{next_proc, normal_form, redex_steps, Redex, TransitionLabel};
use crate::prob::{Prob, Rational};
use crate::typesys::{Interval, Local};

/// `Δ ⇒tl_δ Δ′`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeStep {
    pub label: TransitionLabel,
    /// The session whose endpoints moved.
    pub session: String,
    pub delta: Interval,
    pub target: Typing,
}

/// All reductions of `delta` with label `tl`: a selection of `s[r1]` towards
/// `r2` meets a branching of `s[r2]` from `r1` on the same label. Other
/// entries are carried over unchanged.
pub fn type_step(delta: &Typing, tl: &TransitionLabel) -> Vec<TypeStep> {
    let TransitionLabel::Comm { from, to, label } = tl else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (c1, t1) in delta.iter() {
        let Channel::Role { session, role } = c1 else {
            continue;
        };
        if role != from {
            continue;
        }
        let c2 = Channel::role(session.clone(), to.clone());
        let Some(t2) = delta.get(&c2) else {
            continue;
        };
        let (Local::Select { partner: p1, arms: sel }, Local::Branch { partner: p2, arms: rcv }) = (t1.unfold(), t2.unfold())
        else {
            continue;
        };
        if p1 != *to || p2 != *from {
            continue;
        }
        let (Some(s), Some(r)) = (sel.iter().find(|a| a.label == *label), rcv.iter().find(|a| a.label == *label)) else {
            continue;
        };
        let mut target = delta.clone();
        target.set(c1.clone(), s.cont.clone());
        target.set(c2, r.cont.clone());
        out.push(TypeStep {
            label: tl.clone(),
            session: session.clone(),
            delta: s.annot.clone(),
            target,
        });
    }
    out
}

/// A process step for which a successor typing was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedStep {
    pub trace: Vec<TransitionLabel>,
    pub label: TransitionLabel,
    pub prob: Prob,
    pub next_proc: usize,
    /// `p · nextProc(P)`
    pub scaled: Rational,
    /// The interval of the matched type step; `None` when `Δ′ = Δ`.
    pub delta: Option<Interval>,
}

/// A process step whose successor re-checks under no admissible typing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Labels from the root to the source state.
    pub trace: Vec<TransitionLabel>,
    pub label: TransitionLabel,
    pub prob: Prob,
    pub source: Process,
    pub target: Process,
    pub typing: Typing,
    pub error: Option<TypeError>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubjectReductionReport {
    pub depth: usize,
    pub states: usize,
    pub steps: usize,
    pub matched: Vec<MatchedStep>,
    pub violations: Vec<Violation>,
}

impl SubjectReductionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Explores the steps of `p` breadth first up to `depth` and checks that
/// every successor is typed by `Δ` or by a type step whose interval contains
/// `p · nextProc`. Annotated restrictions exposed at top level are opened
/// into the typing, so that communication steps move it.
pub fn verify_subject_reduction(
    gamma: &Sorting,
    p: &Process,
    depth: usize,
    mode: CheckMode,
) -> Result<SubjectReductionReport, HarnessError> {
    check_against(gamma, p, &Typing::new(), mode)?;
    let (root, delta) = open_restrictions(&normal_form(p), &Typing::new())?;
    check_against(gamma, &root, &delta, mode)?;
    let mut report = SubjectReductionReport {
        depth,
        ..Default::default()
    };
    let mut seen: BTreeSet<(Process, Typing)> = BTreeSet::new();
    seen.insert((root.clone(), delta.clone()));
    let mut queue = VecDeque::from([(root, delta, Vec::new())]);
    while let Some((state, delta, trace)) = queue.pop_front() {
        report.states += 1;
        if trace.len() >= depth {
            continue;
        }
        let m = next_proc(&state);
        for rs in redex_steps(&state)? {
            report.steps += 1;
            let scaled = rs.step.prob.scale(m);
            let mut candidates: Vec<(Option<Interval>, Typing)> = Vec::new();
            if let Redex::Com { session, .. } = &rs.redex {
                for ts in type_step(&delta, &rs.step.label) {
                    if ts.session == *session && ts.delta.contains_rational(&scaled) {
                        candidates.push((Some(ts.delta), ts.target));
                    }
                }
            }
            candidates.push((None, delta.clone()));
            let mut error = None;
            let mut found = None;
            for (iv, cand) in candidates {
                let attempt = open_restrictions(&rs.step.target, &cand)
                    .and_then(|(t, d)| check_against(gamma, &t, &d, mode).map(|_| (t, d)));
                match attempt {
                    Ok(ok) => {
                        found = Some((iv, ok));
                        break;
                    }
                    Err(e) => error = Some(e),
                }
            }
            let mut next_trace = trace.clone();
            next_trace.push(rs.step.label.clone());
            match found {
                Some((iv, (t, d))) => {
                    report.matched.push(MatchedStep {
                        trace: trace.clone(),
                        label: rs.step.label.clone(),
                        prob: rs.step.prob.clone(),
                        next_proc: m,
                        scaled,
                        delta: iv,
                    });
                    if seen.insert((t.clone(), d.clone())) {
                        queue.push_back((t, d, next_trace));
                    }
                }
                None => report.violations.push(Violation {
                    trace: trace.clone(),
                    label: rs.step.label,
                    prob: rs.step.prob,
                    source: state.clone(),
                    target: rs.step.target,
                    typing: delta.clone(),
                    error,
                }),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_global_type, parse_local_type, parse_process};
    use crate::typesys::project;

    fn role(s: &str, r: &str) -> Channel {
        Channel::role(s, r)
    }

    fn two_label_typing() -> Typing {
        [
            (
                role("s", "r1"),
                parse_local_type("r2 (+) { [0,1]: !a(nat). end, [0,1]: !b(nat). end }").unwrap(),
            ),
            (role("s", "r2"), parse_local_type("r1 & { ?a(nat). end, ?b(nat). end }").unwrap()),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn empty_typing_has_no_steps() {
        assert!(type_step(&Typing::new(), &TransitionLabel::Eps).is_empty());
        let tl = TransitionLabel::Comm {
            from: "r1".into(),
            to: "r2".into(),
            label: "a".into(),
        };
        assert!(type_step(&Typing::new(), &tl).is_empty());
    }

    #[test]
    fn communication_rule_and_framing() {
        let tl = TransitionLabel::Comm {
            from: "r1".into(),
            to: "r2".into(),
            label: "a".into(),
        };
        let steps = type_step(&two_label_typing(), &tl);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].delta, Interval::full());
        assert!(steps[0].target.iter().all(|(_, t)| t.is_end()));

        let mut framed = two_label_typing();
        framed.insert(role("s", "r3"), Local::End).unwrap();
        let steps = type_step(&framed, &tl);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].target.get(&role("s", "r3")), Some(&Local::End));
        assert_eq!(steps[0].target.len(), 3);
    }

    #[test]
    fn recursive_types_unfold_before_matching() {
        let g = parse_global_type("rec t . r1 -> r2 { [0,1]: a(nat). t, [0,1]: b(nat). end }").unwrap();
        let delta: Typing = ["r1", "r2"]
            .into_iter()
            .map(|r| (role("s", r), project(&g, r).unwrap()))
            .collect();
        let tl = TransitionLabel::Comm {
            from: "r1".into(),
            to: "r2".into(),
            label: "a".into(),
        };
        let steps = type_step(&delta, &tl);
        assert_eq!(steps.len(), 1);
        for (c, t) in steps[0].target.iter() {
            assert!(crate::typesys::equi_eq(t, delta.get(c).unwrap()));
        }
    }

    #[test]
    fn nil_is_vacuous() {
        let r = verify_subject_reduction(&Sorting::new(), &Process::Nil, 5, CheckMode::Subset).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.steps, 0);
    }

    #[test]
    fn two_branch_com() {
        let p = parse_process(
            "new s : < r1 -> r2 { [0,1]: yes(nat). end, [0,1]: no(nat). end } > . \
             (s[r1][r2](+){ 0.6: yes(1). 0, 0.4: no(2). 0 } | s[r2][r1]&{ yes(x). 0, no(x). 0 })",
        )
        .unwrap();
        let r = verify_subject_reduction(&Sorting::new(), &p, 3, CheckMode::Subset).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!(r.matched.len(), 2);
        let yes = r
            .matched
            .iter()
            .find(|m| matches!(&m.label, TransitionLabel::Comm { label, .. } if label == "yes"))
            .unwrap();
        assert_eq!(yes.next_proc, 1);
        assert_eq!(yes.scaled, crate::prob::parse_rational("3/5").unwrap());
        assert_eq!(yes.delta, Some(Interval::full()));
    }

    #[test]
    fn ill_typed_root_is_reported() {
        let p = parse_process("s[a][b]&{ l(x). 0 }").unwrap();
        assert!(matches!(
            verify_subject_reduction(&Sorting::new(), &p, 2, CheckMode::Subset),
            Err(HarnessError::Type(_))
        ));
    }
}
