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

//! Intersection of interval annotations on erase-equal local types.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Local, LocalType, ReceiveArm, SelectArm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectError {
    #[error("intervals for label `{0}` are disjoint")]
    EmptyInterval(String),
    #[error("local types differ after erasure")]
    ShapeMismatch,
    #[error("typings have different domains")]
    DomainMismatch,
}

/// Pointwise intersection of selection intervals. Both types must have the
/// same shape once intervals are erased; arms are matched by label and
/// recursion variables up to renaming.
pub fn intersect_local(t1: &LocalType, t2: &LocalType) -> Result<LocalType, IntersectError> {
    match (t1, t2) {
        (Local::End, Local::End) => Ok(Local::End),
        (Local::Var(a), Local::Var(b)) if a == b => Ok(Local::Var(a.clone())),
        (Local::Select { partner: p, arms: xs }, Local::Select { partner: q, arms: ys }) => {
            if p != q || xs.len() != ys.len() {
                return Err(IntersectError::ShapeMismatch);
            }
            let arms = xs
                .iter()
                .map(|x| {
                    let y = ys.iter().find(|y| y.label == x.label).ok_or(IntersectError::ShapeMismatch)?;
                    if x.sort != y.sort {
                        return Err(IntersectError::ShapeMismatch);
                    }
                    let annot = x
                        .annot
                        .intersect(&y.annot)
                        .ok_or_else(|| IntersectError::EmptyInterval(x.label.clone()))?;
                    Ok(SelectArm {
                        annot,
                        label: x.label.clone(),
                        sort: x.sort,
                        cont: intersect_local(&x.cont, &y.cont)?,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Local::Select { partner: p.clone(), arms })
        }
        (Local::Branch { partner: p, arms: xs }, Local::Branch { partner: q, arms: ys }) => {
            if p != q || xs.len() != ys.len() {
                return Err(IntersectError::ShapeMismatch);
            }
            let arms = xs
                .iter()
                .map(|x| {
                    let y = ys.iter().find(|y| y.label == x.label).ok_or(IntersectError::ShapeMismatch)?;
                    if x.sort != y.sort {
                        return Err(IntersectError::ShapeMismatch);
                    }
                    Ok(ReceiveArm {
                        label: x.label.clone(),
                        sort: x.sort,
                        cont: intersect_local(&x.cont, &y.cont)?,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Local::Branch { partner: p.clone(), arms })
        }
        (Local::Rec { var: a, body: b1 }, Local::Rec { var: b, body: b2 }) => {
            let b2 = if a == b {
                (**b2).clone()
            } else {
                if b1.free_vars().contains(b) || b2.free_vars().contains(a) {
                    return Err(IntersectError::ShapeMismatch);
                }
                b2.subst_var(b, &Local::Var(a.clone()))
            };
            Ok(Local::Rec {
                var: a.clone(),
                body: Box::new(intersect_local(b1, &b2)?),
            })
        }
        _ => Err(IntersectError::ShapeMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_local_type;

    fn lt(s: &str) -> LocalType {
        parse_local_type(s).unwrap()
    }

    #[test]
    fn narrows_intervals() {
        let a = lt("r (+) { [1/5,3/5]: !l(nat). end }");
        let b = lt("r (+) { [2/5,9/10]: !l(nat). end }");
        assert_eq!(intersect_local(&a, &b), Ok(lt("r (+) { [2/5,3/5]: !l(nat). end }")));
    }

    #[test]
    fn disjoint_is_undefined() {
        let a = lt("r (+) { [0,1/4]: !l(nat). end }");
        let b = lt("r (+) { [1/2,1]: !l(nat). end }");
        assert_eq!(intersect_local(&a, &b), Err(IntersectError::EmptyInterval("l".into())));
    }

    #[test]
    fn idempotent_and_shape_checked() {
        let t = lt("rec t . r & { ?a(nat). r (+) { [0,1/2]: !b(nat). t, [1/2,1]: !c(nat). end } }");
        assert_eq!(intersect_local(&t, &t), Ok(t.clone()));
        assert_eq!(
            intersect_local(&t, &lt("end")),
            Err(IntersectError::ShapeMismatch)
        );
        let u = lt("rec u . r & { ?a(nat). r (+) { [0,1]: !b(nat). u, [0,1]: !c(nat). end } }");
        assert_eq!(intersect_local(&t, &u), Ok(t));
    }
}
