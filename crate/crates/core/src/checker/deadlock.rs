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

//! Deadlock detection by exhaustive exploration.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{type_check, CheckMode, Sorting};
use crate::ast::{Annotation, Channel, Process};
use crate::dynamics::{enabled_steps, normal_form, Block, StepError, TransitionLabel};

/// A reachable state with no enabled step that is not `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StuckState {
    pub state: Process,
    pub trace: Vec<TransitionLabel>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Exploration {
    /// Distinct normal forms visited.
    pub states: usize,
    /// Whether a reachable `0` was found.
    pub reaches_nil: bool,
    pub stuck: Vec<StuckState>,
    /// `false` when some state at the bound still had enabled steps.
    pub complete: bool,
}

/// Breadth-first search over normal forms up to `bound` steps, collecting
/// stuck states other than `0`. Uses only the operational semantics.
pub fn find_stuck_states(p: &Process, bound: usize) -> Result<Exploration, StepError> {
    let root = normal_form(p);
    let mut seen = BTreeSet::from([root.clone()]);
    let mut queue = VecDeque::from([(root, Vec::new())]);
    let mut out = Exploration {
        complete: true,
        ..Default::default()
    };
    while let Some((state, trace)) = queue.pop_front() {
        out.states += 1;
        let steps = enabled_steps(&state)?;
        if steps.is_empty() {
            if state.is_nil() {
                out.reaches_nil = true;
            } else {
                out.stuck.push(StuckState { state, trace });
            }
            continue;
        }
        if trace.len() >= bound {
            out.complete = false;
            continue;
        }
        for s in steps {
            if seen.insert(s.target.clone()) {
                let mut t = trace.clone();
                t.push(s.label);
                queue.push_back((s.target, t));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeadlockVerdict {
    /// Every reachable stuck state is `0`.
    DeadlockFree { states: usize },
    Deadlock(StuckState),
    /// The bound was reached before the state space was exhausted.
    Inconclusive { states: usize },
    NotApplicable(String),
}

/// Requires a single annotated session `(νs:G)(P_1 | … | P_n)` where each
/// `P_i` uses only its own endpoint `s[r_i]`.
fn single_session_shape(nf: &Process) -> Result<(), String> {
    if nf.is_nil() {
        return Ok(());
    }
    let block = Block::of(nf);
    let [(s, Some(Annotation::Global(_)))] = block.restrictions.as_slice() else {
        return Err("expected exactly one annotated session restriction".into());
    };
    let endpoint_of = |p: &Process| -> Result<Option<String>, String> {
        let mut role = None;
        for c in p.free_channels() {
            match c {
                Channel::Role { session, role: r } if session == *s => {
                    if role.as_ref().is_some_and(|x| *x != r) {
                        return Err("a component uses more than one endpoint".into());
                    }
                    role = Some(r);
                }
                other => return Err(format!("component uses channel {}", super::chan_text(&other))),
            }
        }
        Ok(role)
    };
    let mut roles = BTreeSet::new();
    for a in &block.atoms {
        if let Some(r) = endpoint_of(a)? {
            if !roles.insert(r.clone()) {
                return Err(format!("endpoint {s}[{r}] is used by two components"));
            }
        }
    }
    for d in &block.defs {
        let closed = Process::def(d.name.clone(), d.params.clone(), d.body.clone(), Process::Nil);
        if endpoint_of(&closed)?.is_some() {
            return Err(format!("definition `{}` uses a session endpoint directly", d.name));
        }
    }
    Ok(())
}

/// Checks that `p` is typed under empty environments, has the single
/// session shape, and that all its stuck states within `bound` steps are
/// `0`.
pub fn check_deadlock_freedom(p: &Process, bound: usize, mode: CheckMode) -> DeadlockVerdict {
    if let Err(e) = type_check(&Sorting::new(), p, mode) {
        return DeadlockVerdict::NotApplicable(format!("not well typed: {e}"));
    }
    if let Err(why) = single_session_shape(&normal_form(p)) {
        return DeadlockVerdict::NotApplicable(why);
    }
    match find_stuck_states(p, bound) {
        Err(e) => DeadlockVerdict::NotApplicable(e.to_string()),
        Ok(x) => match x.stuck.into_iter().next() {
            Some(s) => DeadlockVerdict::Deadlock(s),
            None if x.complete => DeadlockVerdict::DeadlockFree { states: x.states },
            None => DeadlockVerdict::Inconclusive { states: x.states },
        },
    }
}
