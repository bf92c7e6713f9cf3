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

//! Projection of global types onto roles.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::{equi_eq, GlobalType, Local, LocalType, ReceiveArm, SelectArm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectionError {
    #[error("projection onto `{role}` undefined: branches of {from} -> {to} project to different types")]
    NonMergeableBranches { role: String, from: String, to: String },
    #[error("projection undefined: role `{0}` communicates with itself")]
    SelfCommunication(String),
}

/// `G` restricted to role `r`. The sender of an interaction sees a selection
/// towards the receiver, the receiver a branching from the sender, and other
/// roles the common projection of all continuations.
pub fn project(g: &GlobalType, r: &str) -> Result<LocalType, ProjectionError> {
    match g {
        GlobalType::Interaction { from, to, branches } => {
            if from == to {
                return Err(ProjectionError::SelfCommunication(from.clone()));
            }
            if r == from {
                let arms = branches
                    .iter()
                    .map(|b| {
                        Ok(SelectArm {
                            annot: b.delta.clone(),
                            label: b.label.clone(),
                            sort: b.sort,
                            cont: project(&b.cont, r)?,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Local::Select { partner: to.clone(), arms })
            } else if r == to {
                let arms = branches
                    .iter()
                    .map(|b| {
                        Ok(ReceiveArm {
                            label: b.label.clone(),
                            sort: b.sort,
                            cont: project(&b.cont, r)?,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Local::Branch { partner: from.clone(), arms })
            } else {
                let projs = branches
                    .iter()
                    .map(|b| project(&b.cont, r))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut projs = projs.into_iter();
                let first = projs.next().unwrap_or(Local::End);
                if projs.all(|p| equi_eq(&first, &p)) {
                    Ok(first)
                } else {
                    Err(ProjectionError::NonMergeableBranches {
                        role: r.into(),
                        from: from.clone(),
                        to: to.clone(),
                    })
                }
            }
        }
        GlobalType::Rec { var, body } => {
            let body = project(body, r)?;
            match &body {
                Local::End => Ok(Local::End),
                Local::Var(t) if t == var => Ok(Local::End),
                _ => Ok(Local::Rec {
                    var: var.clone(),
                    body: Box::new(body),
                }),
            }
        }
        GlobalType::Var(t) => Ok(Local::Var(t.clone())),
        GlobalType::End => Ok(Local::End),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_global_type, parse_local_type};

    #[test]
    fn end_projects_to_end() {
        assert_eq!(project(&GlobalType::End, "r"), Ok(Local::End));
    }

    #[test]
    fn sender_and_receiver() {
        let g = parse_global_type("rA -> rB { [0,1]: a(nat). end, 1/2: b(bool). end }").unwrap();
        assert_eq!(
            project(&g, "rA").unwrap(),
            parse_local_type("rB (+) { [0,1]: !a(nat). end, 1/2: !b(bool). end }").unwrap()
        );
        assert_eq!(
            project(&g, "rB").unwrap(),
            parse_local_type("rA & { ?a(nat). end, ?b(bool). end }").unwrap()
        );
        assert_eq!(project(&g, "rC").unwrap(), Local::End);
    }

    #[test]
    fn non_participant_needs_equal_branches() {
        let g = parse_global_type(
            "rA -> rB { [0,1]: a(nat). rB -> rC { 1: x(nat). end }, [0,1]: b(nat). rB -> rC { 1: y(nat). end } }",
        )
        .unwrap();
        assert!(matches!(
            project(&g, "rC"),
            Err(ProjectionError::NonMergeableBranches { .. })
        ));
        let g = parse_global_type(
            "rA -> rB { [0,1]: a(nat). rB -> rC { 1: x(nat). end }, [0,1]: b(nat). rB -> rC { 1: x(nat). end } }",
        )
        .unwrap();
        assert_eq!(
            project(&g, "rC").unwrap(),
            parse_local_type("rB & { ?x(nat). end }").unwrap()
        );
    }

    #[test]
    fn recursion_collapses_when_absent() {
        let g = parse_global_type("rec t . rA -> rB { 1: a(nat). t }").unwrap();
        assert_eq!(project(&g, "rC").unwrap(), Local::End);
        assert_eq!(
            project(&g, "rA").unwrap(),
            parse_local_type("rec t . rB (+) { 1: !a(nat). t }").unwrap()
        );
    }
}
