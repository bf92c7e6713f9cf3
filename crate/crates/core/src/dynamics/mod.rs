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

//! Structural congruence and the probabilistic transition relation.
//!
//! Steps are computed on normal forms. Every enabled redex (a matching
//! selection/branching pair, or a call of a definition in scope) is
//! scheduled with probability `1/m`, where `m` is [`next_proc`], and a
//! selection branch `k` then fires with its declared probability `p_k`.

mod congruence;
mod rewrite;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{instantiate, Channel, Process, Subst, SubstError};
use crate::prob::{Prob, Rational};

pub(crate) use congruence::Block;
pub use congruence::{congruent, normal_form};
pub use rewrite::{congruence_rewrites, Axiom, Direction, Rewrite};

/// `Comm` sorts before `Eps`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransitionLabel {
    Comm { from: String, to: String, label: String },
    Eps,
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionLabel::Comm { from, to, label } => write!(f, "({from},{to},{label})"),
            TransitionLabel::Eps => f.write_str("eps"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub label: TransitionLabel,
    pub prob: Prob,
    /// Normal form of the successor.
    pub target: Process,
}

/// The redex a step fires.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Redex {
    Com { session: String, from: String, to: String },
    Call { name: String },
}

/// A step attributed to a single redex, before merging.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RedexStep {
    pub redex: Redex,
    pub step: Step,
}

/// A selection/branching pair or call that matches a rule's shape but not
/// its side condition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Disabled {
    /// Selection labels missing from the matching branching.
    CommMismatch {
        session: String,
        from: String,
        to: String,
        missing: Vec<String>,
    },
    CallArity { name: String, expected: usize, found: usize },
}

impl fmt::Display for Disabled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disabled::CommMismatch { session, from, to, missing } => write!(
                f,
                "{session}[{from}] selects label(s) {} not offered by {session}[{to}]",
                missing.join(", ")
            ),
            Disabled::CallArity { name, expected, found } => {
                write!(f, "call of `{name}` with {found} argument(s), definition takes {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error(transparent)]
    Subst(#[from] SubstError),
}

enum Kind {
    Com(usize, usize),
    Call(usize, usize),
}

fn redexes(block: &Block) -> (Vec<Kind>, Vec<Disabled>) {
    let mut found = Vec::new();
    let mut disabled = Vec::new();
    for (i, a) in block.atoms.iter().enumerate() {
        match a {
            Process::Select {
                chan: Channel::Role { session, role: r1 },
                partner: r2,
                branches,
            } => {
                for (j, b) in block.atoms.iter().enumerate() {
                    let Process::Branch {
                        chan: Channel::Role { session: s2, role: q2 },
                        partner: q1,
                        arms,
                    } = b
                    else {
                        continue;
                    };
                    if s2 != session || q2 != r2 || q1 != r1 {
                        continue;
                    }
                    let missing: Vec<String> = branches
                        .iter()
                        .filter(|br| !arms.iter().any(|a| a.label == br.label))
                        .map(|br| br.label.clone())
                        .collect();
                    if missing.is_empty() {
                        found.push(Kind::Com(i, j));
                    } else {
                        disabled.push(Disabled::CommMismatch {
                            session: session.clone(),
                            from: r1.clone(),
                            to: r2.clone(),
                            missing,
                        });
                    }
                }
            }
            Process::Call { name, args } => {
                if let Some(d) = block.defs.iter().position(|d| d.name == *name) {
                    let expected = block.defs[d].params.len();
                    if expected == args.len() {
                        found.push(Kind::Call(i, d));
                    } else {
                        disabled.push(Disabled::CallArity {
                            name: name.clone(),
                            expected,
                            found: args.len(),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    (found, disabled)
}

/// Number of enabled communication and call redexes of `normal_form(p)`.
pub fn next_proc(p: &Process) -> usize {
    redexes(&Block::of(&normal_form(p))).0.len()
}

/// Redexes of `normal_form(p)` whose side condition fails.
pub fn disabled_redexes(p: &Process) -> Vec<Disabled> {
    redexes(&Block::of(&normal_form(p))).1
}

fn successor(block: &Block, replace: &[(usize, Process)]) -> Process {
    let mut b = block.clone();
    for (i, q) in replace {
        b.atoms[*i] = q.clone();
    }
    normal_form(&b.build())
}

/// One step per redex and selection branch, with probability `p_k / m`.
/// Zero-probability branches are omitted. Ordered by redex, then step.
pub fn redex_steps(p: &Process) -> Result<Vec<RedexStep>, StepError> {
    let block = Block::of(&normal_form(p));
    let (found, _) = redexes(&block);
    let m = found.len();
    let mut out = Vec::new();
    for kind in found {
        match kind {
            Kind::Com(i, j) => {
                let (
                    Process::Select {
                        chan: Channel::Role { session, role: from },
                        partner: to,
                        branches,
                    },
                    Process::Branch { arms, .. },
                ) = (&block.atoms[i], &block.atoms[j])
                else {
                    unreachable!("communication redex on non-matching atoms")
                };
                for br in branches.iter().filter(|b| !b.prob.is_zero()) {
                    let arm = arms.iter().find(|a| a.label == br.label).expect("J is a subset of I");
                    let s: Subst = [(arm.binder.clone(), br.payload.clone())].into();
                    let received = arm.cont.substitute(&s)?;
                    out.push(RedexStep {
                        redex: Redex::Com {
                            session: session.clone(),
                            from: from.clone(),
                            to: to.clone(),
                        },
                        step: Step {
                            label: TransitionLabel::Comm {
                                from: from.clone(),
                                to: to.clone(),
                                label: br.label.clone(),
                            },
                            prob: br.prob.div_count(m),
                            target: successor(&block, &[(i, br.cont.clone()), (j, received)]),
                        },
                    });
                }
            }
            Kind::Call(i, d) => {
                let def = &block.defs[d];
                let Process::Call { name, args } = &block.atoms[i] else {
                    unreachable!("call redex on a non-call atom")
                };
                let body = instantiate(name, &def.params, args, &def.body)?;
                out.push(RedexStep {
                    redex: Redex::Call { name: name.clone() },
                    step: Step {
                        label: TransitionLabel::Eps,
                        prob: Prob::one().div_count(m),
                        target: successor(&block, &[(i, body)]),
                    },
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The step distribution of `p`. Steps with equal labels and congruent
/// targets are merged by adding their probabilities; the result is ordered
/// by label, then target. Empty iff `p` is stuck.
pub fn enabled_steps(p: &Process) -> Result<Vec<Step>, StepError> {
    let mut merged: BTreeMap<(TransitionLabel, Process), Rational> = BTreeMap::new();
    for rs in redex_steps(p)? {
        *merged.entry((rs.step.label, rs.step.target)).or_default() += rs.step.prob.as_rational();
    }
    Ok(merged
        .into_iter()
        .map(|((label, target), r)| Step {
            label,
            prob: Prob::from_rational(r).expect("step probabilities sum to at most one"),
            target,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;
    use num_traits::One;

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    const TWO: &str =
        "s[rA][rB](+){ 0.6: yes(ok). 0, 0.4: no(ok). 0 } | s[rB][rA]&{ yes(x). 0, no(x). 0, unsure(x). 0 }";

    #[test]
    fn nil_is_stuck() {
        assert_eq!(next_proc(&Process::Nil), 0);
        assert!(enabled_steps(&Process::Nil).unwrap().is_empty());
    }

    #[test]
    fn single_com_redex() {
        assert_eq!(next_proc(&p("s[rA][rB](+){ 1: l(v). 0 } | s[rB][rA]&{ l(x). 0 }")), 1);
    }

    #[test]
    fn two_branch_com() {
        let steps = redex_steps(&p(TWO)).unwrap();
        assert_eq!(steps.len(), 2);
        let probs: Vec<String> = steps.iter().map(|s| alloc::format!("{}", s.step.prob)).collect();
        assert_eq!(probs, ["2/5", "3/5"]);
        assert!(steps.iter().all(|s| s.step.target == Process::Nil));
        // Both targets are congruent to 0, but labels differ: no merging.
        let merged = enabled_steps(&p(TWO)).unwrap();
        assert_eq!(merged.len(), 2);
        let total: Rational = merged.iter().map(|s| s.prob.as_rational().clone()).sum();
        assert!(total.is_one());
    }

    #[test]
    fn call_unfolds() {
        let steps = enabled_steps(&p("def X(y) = 0 in (X(v) | 0)")).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].label, TransitionLabel::Eps);
        assert!(steps[0].prob.is_one());
        assert_eq!(steps[0].target, Process::Nil);
    }

    #[test]
    fn uniform_scheduler_and_merging() {
        // Two identical independent redexes: same label, congruent targets.
        let one = "s[a][b](+){ 1: l(1). 0 } | s[b][a]&{ l(x). 0 }";
        let q = p(&alloc::format!("({one}) | ({one})"));
        assert_eq!(next_proc(&q), 4);
        let steps = enabled_steps(&q).unwrap();
        assert_eq!(steps.len(), 1);
        assert!(steps[0].prob.is_one());
        assert_eq!(redex_steps(&q).unwrap().len(), 4);
    }

    #[test]
    fn mismatch_disables() {
        let q = p("s[a][b](+){ 1/2: l(1). 0, 1/2: m(1). 0 } | s[b][a]&{ l(x). 0 }");
        assert_eq!(next_proc(&q), 0);
        assert!(matches!(&disabled_redexes(&q)[..], [Disabled::CommMismatch { missing, .. }] if missing == &["m"]));
        let q = p("def X(y) = 0 in X()");
        assert_eq!(next_proc(&q), 0);
        assert!(matches!(&disabled_redexes(&q)[..], [Disabled::CallArity { .. }]));
    }

    #[test]
    fn received_session_becomes_channel() {
        let q = p("new k . (s[a][b](+){ 1: l(k). k[c][d](+){ 1: m(1). 0 } } | s[b][a]&{ l(x). x[d][c]&{ m(z). 0 } })");
        let steps = enabled_steps(&q).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(next_proc(&steps[0].target), 1);
        let steps = enabled_steps(&steps[0].target).unwrap();
        assert_eq!(steps[0].target, Process::Nil);
    }
}
