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

//! Seeded Monte Carlo simulation.
//!
//! Trial `i` draws from a ChaCha8 generator seeded with the run seed and
//! positioned on stream `i`, so each trial is reproducible on its own.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AnalysisError;
use crate::ast::Process;
use crate::dynamics::{enabled_steps, normal_form, TransitionLabel};
use crate::prob::{Prob, Rational};
use crate::typesys::{GlobalType, Interval};

/// Slack added to the 3σ binomial band.
const MARGIN_SLACK: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
    /// Steps after which a trial is cut off.
    pub max_steps: usize,
    /// Distinct states the simulator may memoize.
    pub cap: usize,
    /// When present, the label of each trace's first communication is
    /// compared with the intervals of this type's outermost interaction.
    pub global: Option<GlobalType>,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimulationConfig {
            trials,
            seed,
            max_steps: 1000,
            cap: super::DEFAULT_EXPLOSION_CAP,
            global: None,
        }
    }
}

/// Empirical first-step frequency of a label against its declared
/// probability.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub label: TransitionLabel,
    pub declared: Prob,
    pub empirical: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Frequency of a label among first communications between the same two
/// roles, against a declared interval.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalAudit {
    pub label: TransitionLabel,
    pub delta: Interval,
    /// Traces whose first communication is between the interaction's roles.
    pub samples: u64,
    pub empirical: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    pub seed: u64,
    /// Occurrences of each label at each step index.
    pub label_counts: BTreeMap<(usize, TransitionLabel), u64>,
    pub first_step: Vec<AuditEntry>,
    pub interval_audit: Vec<IntervalAudit>,
    /// Trials that ended in `0`.
    pub reached_nil: u64,
    /// Trials cut off by the step limit.
    pub truncated: u64,
}

impl SimulationReport {
    /// `label_counts` divided by the number of trials.
    pub fn label_freq(&self) -> BTreeMap<(usize, TransitionLabel), f64> {
        self.label_counts
            .iter()
            .map(|(k, c)| (k.clone(), *c as f64 / self.trials as f64))
            .collect()
    }

    pub fn all_pass(&self) -> bool {
        self.first_step.iter().all(|a| a.pass) && self.interval_audit.iter().all(|a| a.pass)
    }
}

enum Sampler {
    /// Cumulative weights over a common denominator.
    Exact { total: u64, cumulative: Vec<u64> },
    Float { cumulative: Vec<f64> },
}

impl Sampler {
    fn new(probs: &[&Prob]) -> Sampler {
        let lcm = probs.iter().fold(num_bigint::BigUint::from(1u32), |acc, p| acc.lcm(p.denom()));
        let weights: Option<Vec<u64>> = probs.iter().map(|p| (p.numer() * (&lcm / p.denom())).to_u64()).collect();
        match (lcm.to_u64(), weights) {
            (Some(total), Some(w)) => Sampler::Exact {
                total,
                cumulative: w
                    .iter()
                    .scan(0u64, |acc, x| {
                        *acc += x;
                        Some(*acc)
                    })
                    .collect(),
            },
            _ => Sampler::Float {
                cumulative: probs
                    .iter()
                    .scan(0.0, |acc, p| {
                        *acc += p.to_f64();
                        Some(*acc)
                    })
                    .collect(),
            },
        }
    }

    /// Index of the drawn step; `None` for the mass not covered by any step.
    fn draw(&self, rng: &mut ChaCha8Rng) -> Option<usize> {
        match self {
            Sampler::Exact { total, cumulative } => {
                let u = rng.random_range(0..*total);
                cumulative.iter().position(|c| u < *c)
            }
            Sampler::Float { cumulative } => {
                let u: f64 = rng.random();
                cumulative.iter().position(|c| u < *c)
            }
        }
    }
}

struct Node {
    edges: Vec<(TransitionLabel, usize)>,
    sampler: Sampler,
}

#[derive(Default)]
struct Graph {
    ids: BTreeMap<Process, usize>,
    states: Vec<Process>,
    nodes: Vec<Option<Node>>,
}

impl Graph {
    fn intern(&mut self, p: Process, cap: usize) -> Result<usize, AnalysisError> {
        if let Some(id) = self.ids.get(&p) {
            return Ok(*id);
        }
        if self.states.len() >= cap {
            return Err(AnalysisError::ExplosionGuard { limit: cap });
        }
        let id = self.states.len();
        self.ids.insert(p.clone(), id);
        self.states.push(p);
        self.nodes.push(None);
        Ok(id)
    }

    fn node(&mut self, id: usize, cap: usize) -> Result<&Node, AnalysisError> {
        if self.nodes[id].is_none() {
            let steps = enabled_steps(&self.states[id])?;
            let sampler = Sampler::new(&steps.iter().map(|s| &s.prob).collect::<Vec<_>>());
            let mut edges = Vec::with_capacity(steps.len());
            for s in steps {
                edges.push((s.label, self.intern(s.target, cap)?));
            }
            self.nodes[id] = Some(Node { edges, sampler });
        }
        Ok(self.nodes[id].as_ref().expect("built"))
    }
}

fn band(p: f64, n: u64) -> f64 {
    3.0 * libm::sqrt(p * (1.0 - p) / n as f64) + MARGIN_SLACK
}

/// Runs `config.trials` independent traces of `p`, each until it is stuck
/// or has taken `config.max_steps` steps, sampling every step with its
/// exact probability.
pub fn simulate(p: &Process, config: &SimulationConfig) -> Result<SimulationReport, AnalysisError> {
    let mut graph = Graph::default();
    let root_state = normal_form(p);
    let root_steps = enabled_steps(&root_state)?;
    let root = graph.intern(root_state.clone(), config.cap)?;
    let mut first_comm: BTreeMap<TransitionLabel, u64> = BTreeMap::new();
    let mut report = SimulationReport {
        trials: config.trials,
        seed: config.seed,
        label_counts: BTreeMap::new(),
        first_step: Vec::new(),
        interval_audit: Vec::new(),
        reached_nil: 0,
        truncated: 0,
    };
    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial);
        let mut state = root;
        let mut finished = false;
        let mut seen_comm = false;
        for depth in 0..config.max_steps {
            let node = graph.node(state, config.cap)?;
            if node.edges.is_empty() {
                finished = true;
                break;
            }
            let Some(i) = node.sampler.draw(&mut rng) else {
                finished = true;
                break;
            };
            let (label, target) = node.edges[i].clone();
            if !seen_comm && matches!(label, TransitionLabel::Comm { .. }) {
                seen_comm = true;
                *first_comm.entry(label.clone()).or_default() += 1;
            }
            *report.label_counts.entry((depth, label)).or_default() += 1;
            state = target;
        }
        if !finished && !graph.node(state, config.cap)?.edges.is_empty() {
            report.truncated += 1;
        }
        if graph.states[state].is_nil() {
            report.reached_nil += 1;
        }
    }

    let mut declared: BTreeMap<TransitionLabel, Rational> = BTreeMap::new();
    for s in &root_steps {
        *declared.entry(s.label.clone()).or_default() += s.prob.as_rational();
    }
    let n = config.trials.max(1);
    for (label, prob) in declared {
        let count = report.label_counts.get(&(0, label.clone())).copied().unwrap_or(0);
        let empirical = count as f64 / n as f64;
        let declared = Prob::from_rational(prob).expect("probabilities of a step distribution");
        let p = declared.to_f64();
        let margin = band(p, n);
        report.first_step.push(AuditEntry {
            pass: (empirical - p).abs() <= margin,
            label,
            declared,
            empirical,
            margin,
        });
    }
    if let Some(GlobalType::Interaction { from, to, branches }) = config.global.as_ref().map(GlobalType::unfold) {
        let between = |l: &TransitionLabel| matches!(l, TransitionLabel::Comm { from: f, to: t, .. } if *f == from && *t == to);
        let samples: u64 = first_comm.iter().filter(|(l, _)| between(l)).map(|(_, c)| c).sum();
        if samples > 0 {
            for b in &branches {
                let label = TransitionLabel::Comm { from: from.clone(), to: to.clone(), label: b.label.clone() };
                let empirical = first_comm.get(&label).copied().unwrap_or(0) as f64 / samples as f64;
                let margin = band(empirical, samples);
                let (lo, hi) = (b.delta.lower().to_f64(), b.delta.upper().to_f64());
                report.interval_audit.push(IntervalAudit {
                    label,
                    delta: b.delta.clone(),
                    samples,
                    empirical,
                    margin,
                    pass: lo - margin <= empirical && empirical <= hi + margin,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_global_type, parse_process};

    const COM: &str = "new s . (s[r1][r2](+){ 0.6: yes(1). 0, 0.4: no(2). 0 } | s[r2][r1]&{ yes(x). 0, no(x). 0 })";

    fn yes() -> TransitionLabel {
        TransitionLabel::Comm { from: "r1".into(), to: "r2".into(), label: "yes".into() }
    }

    #[test]
    fn nil_is_empty() {
        let r = simulate(&Process::Nil, &SimulationConfig::new(10, 1)).unwrap();
        assert!(r.label_counts.is_empty() && r.first_step.is_empty());
        assert_eq!(r.reached_nil, 10);
    }

    #[test]
    fn deterministic_and_calibrated() {
        let p = parse_process(COM).unwrap();
        let mut cfg = SimulationConfig::new(2000, 7);
        cfg.global = Some(parse_global_type("r1 -> r2 { [0.5,0.7]: yes(nat). end, [0.3,0.5]: no(nat). end }").unwrap());
        let a = simulate(&p, &cfg).unwrap();
        assert_eq!(a, simulate(&p, &cfg).unwrap());
        assert!(a.all_pass(), "{a:?}");
        assert_eq!(a.first_step.len(), 2);
        assert_eq!(a.interval_audit.len(), 2);
        assert_eq!(a.reached_nil, 2000);
        let freq = a.label_freq()[&(0, yes())];
        assert!((freq - 0.6).abs() < 0.05);
    }

    #[test]
    fn interval_audit_flags_outliers() {
        let p = parse_process(COM).unwrap();
        let mut cfg = SimulationConfig::new(2000, 7);
        cfg.global = Some(parse_global_type("r1 -> r2 { [0,0.2]: yes(nat). end, [0.8,1]: no(nat). end }").unwrap());
        let r = simulate(&p, &cfg).unwrap();
        assert!(r.first_step.iter().all(|a| a.pass));
        assert!(r.interval_audit.iter().all(|a| !a.pass));
    }

    #[test]
    fn step_limit_truncates() {
        let p = parse_process("def X() = X() in X()").unwrap();
        let mut cfg = SimulationConfig::new(3, 0);
        cfg.max_steps = 5;
        let r = simulate(&p, &cfg).unwrap();
        assert_eq!(r.truncated, 3);
        assert_eq!(r.label_counts[&(4, TransitionLabel::Eps)], 3);
    }
}
