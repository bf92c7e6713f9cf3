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

//! Well-formedness of global types.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{classify_interval_set, project, GlobalType, Interval, LocalType, ProjectionError, TypeTermError};

/// An interaction whose interval set is not reachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSetIssue {
    /// Labels leading from the root to the interaction.
    pub path: Vec<String>,
    pub from: String,
    pub to: String,
    pub labels: Vec<String>,
    pub deltas: Vec<Interval>,
    pub proper: bool,
    pub reachable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellFormedReport {
    pub ok: bool,
    pub term_error: Option<TypeTermError>,
    pub per_role: BTreeMap<String, Result<LocalType, ProjectionError>>,
    pub bad_interval_sets: Vec<IntervalSetIssue>,
}

pub fn well_formed(g: &GlobalType) -> WellFormedReport {
    let term_error = g.validate().err();
    let per_role: BTreeMap<_, _> = g.roles().into_iter().map(|r| {
        let p = project(g, &r);
        (r, p)
    }).collect();
    let mut bad_interval_sets = Vec::new();
    collect_issues(g, &mut Vec::new(), &mut bad_interval_sets);
    let ok = term_error.is_none() && per_role.values().all(Result::is_ok) && bad_interval_sets.is_empty();
    WellFormedReport {
        ok,
        term_error,
        per_role,
        bad_interval_sets,
    }
}

fn collect_issues(g: &GlobalType, path: &mut Vec<String>, out: &mut Vec<IntervalSetIssue>) {
    match g {
        GlobalType::Interaction { from, to, branches } => {
            let deltas: Vec<Interval> = branches.iter().map(|b| b.delta.clone()).collect();
            let class = classify_interval_set(&deltas);
            if !class.reachable {
                out.push(IntervalSetIssue {
                    path: path.clone(),
                    from: from.clone(),
                    to: to.clone(),
                    labels: branches.iter().map(|b| b.label.clone()).collect(),
                    deltas,
                    proper: class.proper,
                    reachable: class.reachable,
                });
            }
            for b in branches {
                path.push(b.label.to_string());
                collect_issues(&b.cont, path, out);
                path.pop();
            }
        }
        GlobalType::Rec { body, .. } => collect_issues(body, path, out),
        GlobalType::Var(_) | GlobalType::End => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_global_type;

    #[test]
    fn end_is_well_formed() {
        let r = well_formed(&GlobalType::End);
        assert!(r.ok && r.per_role.is_empty());
    }

    #[test]
    fn unreachable_outer_set() {
        let g = parse_global_type(
            "rB -> rA { [0,1]: talk(string). end, [0.95,1]: quit(string). end }",
        )
        .unwrap();
        let r = well_formed(&g);
        assert!(!r.ok);
        assert_eq!(r.bad_interval_sets.len(), 1);
        assert!(r.bad_interval_sets[0].path.is_empty());
        assert!(r.bad_interval_sets[0].proper);
    }

    #[test]
    fn projection_failure_reported() {
        let g = parse_global_type(
            "rA -> rB { [0,1]: a(nat). rB -> rC { 1: x(nat). end }, [0,1]: b(nat). end }",
        )
        .unwrap();
        let r = well_formed(&g);
        assert!(!r.ok);
        assert!(r.per_role["rC"].is_err());
        assert!(r.per_role["rA"].is_ok());
    }
}
