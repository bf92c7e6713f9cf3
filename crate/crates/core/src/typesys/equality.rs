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

//! Equi-recursive equality of local types.

use alloc::collections::BTreeSet;
use alloc::vec;

use super::Local;

const PAIR_LIMIT: usize = 100_000;

/// Decides whether two local types denote the same infinite tree, treating
/// `rec t. T` as equal to its unfolding. Arms are matched by label.
pub fn equi_eq<A: Clone + Ord>(a: &Local<A>, b: &Local<A>) -> bool {
    let mut assumed: BTreeSet<(Local<A>, Local<A>)> = BTreeSet::new();
    let mut todo = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = todo.pop() {
        if x == y {
            continue;
        }
        if assumed.len() >= PAIR_LIMIT {
            return false;
        }
        if !assumed.insert((x.clone(), y.clone())) {
            continue;
        }
        match (x.unfold(), y.unfold()) {
            (Local::End, Local::End) => {}
            (Local::Var(s), Local::Var(t)) if s == t => {}
            (Local::Select { partner: p, arms: xs }, Local::Select { partner: q, arms: ys }) => {
                if p != q || xs.len() != ys.len() {
                    return false;
                }
                for xa in &xs {
                    let Some(ya) = ys.iter().find(|a| a.label == xa.label) else {
                        return false;
                    };
                    if xa.annot != ya.annot || xa.sort != ya.sort {
                        return false;
                    }
                    todo.push((xa.cont.clone(), ya.cont.clone()));
                }
            }
            (Local::Branch { partner: p, arms: xs }, Local::Branch { partner: q, arms: ys }) => {
                if p != q || xs.len() != ys.len() {
                    return false;
                }
                for xa in &xs {
                    let Some(ya) = ys.iter().find(|a| a.label == xa.label) else {
                        return false;
                    };
                    if xa.sort != ya.sort {
                        return false;
                    }
                    todo.push((xa.cont.clone(), ya.cont.clone()));
                }
            }
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_local_type;

    fn eq(a: &str, b: &str) -> bool {
        equi_eq(&parse_local_type(a).unwrap(), &parse_local_type(b).unwrap())
    }

    #[test]
    fn syntactic_and_alpha() {
        assert!(eq("end", "end"));
        assert!(eq("rec t . r & { ?a(nat). t }", "rec u . r & { ?a(nat). u }"));
        assert!(!eq("end", "r & { ?a(nat). end }"));
    }

    #[test]
    fn unfolding_is_equal() {
        assert!(eq(
            "rec t . r & { ?a(nat). t }",
            "r & { ?a(nat). rec t . r & { ?a(nat). t } }"
        ));
        assert!(eq(
            "rec t . r & { ?a(nat). r & { ?a(nat). t } }",
            "rec t . r & { ?a(nat). t }"
        ));
    }

    #[test]
    fn arm_order_irrelevant_but_intervals_matter() {
        assert!(eq(
            "r (+) { [0,1]: !a(nat). end, 1/2: !b(bool). end }",
            "r (+) { 1/2: !b(bool). end, [0,1]: !a(nat). end }"
        ));
        assert!(!eq("r (+) { [0,1]: !a(nat). end }", "r (+) { 1: !a(nat). end }"));
        assert!(!eq("r & { ?a(nat). end }", "r & { ?a(int). end }"));
        assert!(!eq("r & { ?a(nat). end }", "q & { ?a(nat). end }"));
    }
}
