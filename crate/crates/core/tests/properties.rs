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

//! Generated-input properties: printer/parser round trip, interval-set
//! classification and interval intersection.

mod common;

use common::arb::{arb_process, Scope};
use proptest::collection::vec;
use proptest::prelude::*;

use pmst_core::ast::struct_equal;
use pmst_core::prob::Rational;
use pmst_core::syntax::print_process;
use pmst_core::typesys::{classify_interval_set, intersect_local, IntersectError, Local, ReceiveArm, SelectArm};
use pmst_core::{parse_process, Interval, LocalType, Prob, Sort};

/// Interval with endpoints on the grid `k/10`.
fn arb_interval() -> impl Strategy<Value = Interval> {
    (0u64..=10, 0u64..=10).prop_map(|(a, b)| Interval::new(Prob::new(a.min(b), 10).unwrap(), Prob::new(a.max(b), 10).unwrap()).unwrap())
}

fn tenths(p: &Prob) -> u64 {
    let r = p.as_rational() * Rational::from_integer(10u32.into());
    assert!(r.is_integer());
    r.to_integer().try_into().unwrap()
}

/// Some point of the product of `sets` (grid values, in tenths) sums to `target`.
fn grid_sum(sets: &[(u64, u64)], target: u64) -> bool {
    match sets.split_first() {
        None => target == 0,
        Some((&(lo, hi), rest)) => (lo..=hi.min(target)).any(|v| grid_sum(rest, target - v)),
    }
}

/// Brute force: every endpoint of every interval is attained by a
/// distribution inside the set.
fn reachable_oracle(deltas: &[Interval]) -> bool {
    let tenths: Vec<(u64, u64)> = deltas.iter().map(|d| (tenths(d.lower()), tenths(d.upper()))).collect();
    !deltas.is_empty()
        && (0..tenths.len()).all(|i| {
            let others: Vec<_> = tenths.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect();
            let (lo, hi) = tenths[i];
            lo <= 10 && hi <= 10 && grid_sum(&others, 10 - lo) && grid_sum(&others, 10 - hi)
        })
}

fn proper_oracle(deltas: &[Interval]) -> bool {
    let lo: u64 = deltas.iter().map(|d| tenths(d.lower())).sum();
    let hi: u64 = deltas.iter().map(|d| tenths(d.upper())).sum();
    lo <= 10 && 10 <= hi
}

/// `rB (+) { a : !l0(nat). rB & { ?l1(nat). rB (+) { b : !l2(bool). end } }, c : !l3(int). end }`
fn shaped(a: Interval, b: Interval, c: Interval) -> LocalType {
    let inner = Local::Select {
        partner: "rB".into(),
        arms: vec![SelectArm { annot: b, label: "l2".into(), sort: Sort::Bool, cont: Local::End }],
    };
    Local::Select {
        partner: "rB".into(),
        arms: vec![
            SelectArm {
                annot: a,
                label: "l0".into(),
                sort: Sort::Nat,
                cont: Local::Branch {
                    partner: "rB".into(),
                    arms: vec![ReceiveArm { label: "l1".into(), sort: Sort::Nat, cont: inner }],
                },
            },
            SelectArm { annot: c, label: "l3".into(), sort: Sort::Int, cont: Local::End },
        ],
    }
}

fn collect_intervals(t: &LocalType, out: &mut Vec<Interval>) {
    match t {
        Local::Select { arms, .. } => arms.iter().for_each(|a| {
            out.push(a.annot.clone());
            collect_intervals(&a.cont, out);
        }),
        Local::Branch { arms, .. } => arms.iter().for_each(|a| collect_intervals(&a.cont, out)),
        Local::Rec { body, .. } => collect_intervals(body, out),
        Local::Var(_) | Local::End => {}
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn print_parse_round_trip(p in arb_process(Scope::default(), 4)) {
        let printed = print_process(&p);
        let q = parse_process(&printed);
        prop_assert!(q.is_ok(), "{printed}: {q:?}");
        let q = q.unwrap();
        prop_assert!(struct_equal(&p, &q), "{printed}");
        prop_assert_eq!(p, q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reachable_implies_proper(deltas in vec(arb_interval(), 1..=5)) {
        let c = classify_interval_set(&deltas);
        prop_assert!(!c.reachable || c.proper);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4096))]

    #[test]
    fn classification_matches_grid_oracle(deltas in vec(arb_interval(), 1..=4)) {
        let c = classify_interval_set(&deltas);
        prop_assert_eq!(c.proper, proper_oracle(&deltas));
        prop_assert_eq!(c.reachable, reachable_oracle(&deltas));
    }

    #[test]
    fn interval_intersection_laws(a in arb_interval(), b in arb_interval(), c in arb_interval()) {
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.intersect(&a), Some(a.clone()));
        let disjoint = a.lower().max(b.lower()) > a.upper().min(b.upper());
        match a.intersect(&b) {
            None => prop_assert!(disjoint),
            Some(m) => {
                prop_assert!(!disjoint);
                prop_assert!(a.contains(m.lower()) && a.contains(m.upper()));
                prop_assert!(b.contains(m.lower()) && b.contains(m.upper()));
                let left = m.intersect(&c);
                let right = b.intersect(&c).and_then(|bc| a.intersect(&bc));
                prop_assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn local_intersection_laws(xs in vec(arb_interval(), 3), ys in vec(arb_interval(), 3)) {
        let t1 = shaped(xs[0].clone(), xs[1].clone(), xs[2].clone());
        let t2 = shaped(ys[0].clone(), ys[1].clone(), ys[2].clone());
        prop_assert_eq!(intersect_local(&t1, &t1), Ok(t1.clone()));
        let pointwise: Vec<Option<Interval>> = xs.iter().zip(&ys).map(|(x, y)| x.intersect(y)).collect();
        let m12 = intersect_local(&t1, &t2);
        prop_assert_eq!(&m12, &intersect_local(&t2, &t1));
        match m12 {
            Ok(m) => {
                prop_assert_eq!(m.erase(), t1.erase());
                let mut found = Vec::new();
                collect_intervals(&m, &mut found);
                let expected: Vec<Interval> = pointwise.into_iter().map(|x| x.unwrap()).collect();
                // `collect_intervals` visits l0, l2, l3; `shaped` takes them as a, b, c.
                prop_assert_eq!(found, expected);
            }
            Err(e) => {
                prop_assert!(matches!(e, IntersectError::EmptyInterval(_)));
                prop_assert!(pointwise.iter().any(Option::is_none));
            }
        }
    }
}
