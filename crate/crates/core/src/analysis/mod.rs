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

//! Evolution paths, k-step reachable sets with exact probability mass, and
//! a seeded Monte Carlo simulator.

mod simulate;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::ast::Process;
use crate::dynamics::{enabled_steps, normal_form, Step, StepError};
use crate::prob::{Prob, Rational};

pub use simulate::{simulate, AuditEntry, IntervalAudit, SimulationConfig, SimulationReport};

/// Default bound on the number of paths or states an analysis may hold.
pub const DEFAULT_EXPLOSION_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("exploration exceeded the limit of {limit} paths or states")]
    ExplosionGuard { limit: usize },
    #[error(transparent)]
    Step(#[from] StepError),
}

/// `P0 -tl1->p1 P1 … -tlk->pk Pk`, with states in normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EvolutionPath {
    pub origin: Process,
    pub steps: Vec<Step>,
}

impl EvolutionPath {
    /// Product of the step probabilities.
    pub fn prob(&self) -> Prob {
        self.steps.iter().fold(Prob::one(), |acc, s| acc.mul(&s.prob))
    }

    pub fn last(&self) -> &Process {
        self.steps.last().map_or(&self.origin, |s| &s.target)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Every path from `p` that has length `depth` or ends in a stuck state
/// earlier. Steps with equal labels and congruent targets are already
/// merged, so no two returned paths are identical.
pub fn enumerate_paths(p: &Process, depth: usize, cap: usize) -> Result<Vec<EvolutionPath>, AnalysisError> {
    let origin = normal_form(p);
    let mut done = Vec::new();
    let mut frontier = vec![EvolutionPath {
        origin,
        steps: Vec::new(),
    }];
    for _ in 0..depth {
        let mut next = Vec::new();
        for path in frontier {
            let steps = enabled_steps(path.last())?;
            if steps.is_empty() {
                done.push(path);
                continue;
            }
            for s in steps {
                let mut longer = path.clone();
                longer.steps.push(s);
                next.push(longer);
            }
            if next.len() + done.len() > cap {
                return Err(AnalysisError::ExplosionGuard { limit: cap });
            }
        }
        frontier = next;
    }
    done.extend(frontier);
    done.sort();
    Ok(done)
}

/// A state of `Reach_k` with the probability of reaching it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReachEntry {
    /// Normal form representative.
    pub state: Process,
    pub mass: Prob,
    /// `true` iff the state has no enabled step.
    pub absorbed: bool,
}

/// The distribution after `k` steps, stuck states carried forward.
/// Empty when `p` itself is stuck.
pub fn reach(p: &Process, k: usize, cap: usize) -> Result<Vec<ReachEntry>, AnalysisError> {
    let mut cache: BTreeMap<Process, Vec<Step>> = BTreeMap::new();
    let mut steps_of = |q: &Process| -> Result<Vec<Step>, AnalysisError> {
        if let Some(s) = cache.get(q) {
            return Ok(s.clone());
        }
        let s = enabled_steps(q)?;
        cache.insert(q.clone(), s.clone());
        Ok(s)
    };
    let root = normal_form(p);
    if steps_of(&root)?.is_empty() {
        return Ok(Vec::new());
    }
    let mut dist: BTreeMap<Process, Rational> = BTreeMap::from([(root, Rational::from_integer(1u32.into()))]);
    for _ in 0..k {
        let mut next: BTreeMap<Process, Rational> = BTreeMap::new();
        for (q, mass) in dist {
            let steps = steps_of(&q)?;
            if steps.is_empty() {
                *next.entry(q).or_default() += mass;
                continue;
            }
            for s in steps {
                *next.entry(s.target).or_default() += &mass * s.prob.as_rational();
            }
            if next.len() > cap {
                return Err(AnalysisError::ExplosionGuard { limit: cap });
            }
        }
        dist = next;
    }
    dist.into_iter()
        .map(|(state, mass)| {
            let absorbed = steps_of(&state)?.is_empty();
            Ok(ReachEntry {
                state,
                mass: Prob::from_rational(mass).expect("masses stay in [0, 1]"),
                absorbed,
            })
        })
        .collect()
}

/// Sum of the masses of `Reach_k(P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TotalProbability {
    Sum(Rational),
    /// `Reach_k(P)` is empty.
    NotComputed,
}

pub fn total_probability(p: &Process, k: usize, cap: usize) -> Result<TotalProbability, AnalysisError> {
    let entries = reach(p, k, cap)?;
    if entries.is_empty() {
        return Ok(TotalProbability::NotComputed);
    }
    Ok(TotalProbability::Sum(crate::prob::sum(entries.iter().map(|e| &e.mass))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    const COM: &str = "new s : < r1 -> r2 { [0,1]: yes(nat). end, [0,1]: no(nat). end } > . \
        (s[r1][r2](+){ 0.6: yes(1). 0, 0.4: no(2). s[r2][r1]&{ z(x). 0 } } | s[r2][r1]&{ yes(x). 0, no(x). 0 })";

    fn r(s: &str) -> Rational {
        crate::prob::parse_rational(s).unwrap()
    }

    #[test]
    fn nil_has_one_empty_path_and_no_reach() {
        let paths = enumerate_paths(&Process::Nil, 3, DEFAULT_EXPLOSION_CAP).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(paths[0].is_empty() && paths[0].prob().is_one());
        assert!(reach(&Process::Nil, 1, DEFAULT_EXPLOSION_CAP).unwrap().is_empty());
        assert_eq!(
            total_probability(&Process::Nil, 1, DEFAULT_EXPLOSION_CAP).unwrap(),
            TotalProbability::NotComputed
        );
    }

    #[test]
    fn two_branches() {
        let p = parse_process(COM).unwrap();
        let paths = enumerate_paths(&p, 1, DEFAULT_EXPLOSION_CAP).unwrap();
        let mut probs: Vec<Rational> = paths.iter().map(|x| x.prob().into_rational()).collect();
        probs.sort();
        assert_eq!(probs, vec![r("2/5"), r("3/5")]);
        for k in 1..=3 {
            let entries = reach(&p, k, DEFAULT_EXPLOSION_CAP).unwrap();
            assert_eq!(entries.len(), 2);
            assert!(entries.iter().all(|e| e.absorbed));
            assert_eq!(total_probability(&p, k, DEFAULT_EXPLOSION_CAP).unwrap(), TotalProbability::Sum(r("1")));
        }
    }

    #[test]
    fn guard_trips() {
        let p = parse_process(COM).unwrap();
        assert_eq!(
            enumerate_paths(&p, 1, 1),
            Err(AnalysisError::ExplosionGuard { limit: 1 })
        );
    }
}
