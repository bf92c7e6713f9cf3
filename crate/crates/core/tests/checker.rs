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

//! The typing algorithm and its harnesses on the fixture corpus.

use pmst_core::checker::{
    check_against, check_deadlock_freedom, find_stuck_states, open_restrictions, type_check, verify_congruence_preservation,
    verify_intersection, verify_lemma_properties, verify_subject_reduction, CheckMode, DeadlockVerdict, IntersectionError,
    LemmaProperty, Sorting, TypeErrorKind, Typing,
};
use pmst_core::dynamics::{normal_form, TransitionLabel};
use pmst_core::typesys::{project, IntersectError};
use pmst_core::{Channel, Interval, Prob};

mod common;

use common::{global, system, system_with};

const TYPED: [&str; 4] = ["system_simple.mps", "com_two_branch.mps", "call_demo.mps", "relay.mps"];

fn bob_typing(gty: &str) -> Typing {
    [(Channel::role("s", "rB"), project(&global(gty), "rB").unwrap())]
        .into_iter()
        .collect()
}

#[test]
fn typed_fixtures_check_in_both_modes_where_expected() {
    for f in TYPED {
        let p = system(f);
        assert_eq!(type_check(&Sorting::new(), &p, CheckMode::Subset), Ok(Typing::new()), "{f}");
    }
    // Alice never answers `unsure`, which only subset mode allows.
    let err = type_check(&Sorting::new(), &system("system_simple.mps"), CheckMode::Strict).unwrap_err();
    assert!(matches!(*err.kind, TypeErrorKind::LabelSetMismatch { .. }), "{err}");
    for f in ["com_two_branch.mps", "call_demo.mps", "relay.mps"] {
        assert!(type_check(&Sorting::new(), &system(f), CheckMode::Strict).is_ok(), "{f}");
    }
}

#[test]
fn narrowed_quit_interval_rejects_bob() {
    let expected = TypeErrorKind::ProbOutsideInterval {
        label: "quit".into(),
        prob: Prob::new(1, 20).unwrap(),
        delta: Interval::new(Prob::new(19, 20).unwrap(), Prob::one()).unwrap(),
    };
    let err = type_check(&Sorting::new(), &system("system_simple_badquit.mps"), CheckMode::Subset).unwrap_err();
    assert_eq!(*err.kind, expected);
    assert_eq!(err.rules.first(), Some(&"TRes"));
    assert!(err.rules.contains(&"TSelect"));

    let bob = system("bob_open.mps");
    let err = check_against(&Sorting::new(), &bob, &bob_typing("ga_unreachable.gty"), CheckMode::Subset).unwrap_err();
    assert_eq!(*err.kind, expected);
    assert!(check_against(&Sorting::new(), &bob, &bob_typing("ga_all01.gty"), CheckMode::Subset).is_ok());
    assert!(check_against(&Sorting::new(), &bob, &bob_typing("ga_quit_narrow.gty"), CheckMode::Subset).is_ok());
}

#[test]
fn verdicts_are_deterministic() {
    for f in ["system_simple.mps", "system_simple_badquit.mps", "system_full.mps"] {
        let p = system(f);
        let a = type_check(&Sorting::new(), &p, CheckMode::Subset);
        let b = type_check(&Sorting::new(), &p, CheckMode::Subset);
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn session_payloads_are_not_typable() {
    let err = type_check(&Sorting::new(), &system("system_full.mps"), CheckMode::Subset).unwrap_err();
    assert!(
        matches!(*err.kind, TypeErrorKind::MissingAnnotation(_) | TypeErrorKind::SortMismatch { .. }),
        "{err}"
    );
}

#[test]
fn subject_reduction_on_the_survey() {
    let r = verify_subject_reduction(&Sorting::new(), &system("system_simple.mps"), 5, CheckMode::Subset).unwrap();
    assert!(r.is_clean(), "{:?}", r.violations);
    assert!(r.steps > 0);
    for m in &r.matched {
        if let TransitionLabel::Comm { .. } = m.label {
            let d = m.delta.as_ref().expect("communication matched a type step");
            assert!(d.contains_rational(&m.scaled));
        }
    }
    for f in TYPED {
        let r = verify_subject_reduction(&Sorting::new(), &system(f), 6, CheckMode::Subset).unwrap();
        assert!(r.is_clean(), "{f}: {:?}", r.violations);
    }
}

#[test]
fn typed_single_session_fixtures_are_deadlock_free() {
    for f in TYPED {
        let v = check_deadlock_freedom(&system(f), 200, CheckMode::Subset);
        assert!(matches!(v, DeadlockVerdict::DeadlockFree { .. }), "{f}: {v:?}");
    }
    let bad = system("deadlock_mismatch.mps");
    assert!(matches!(
        check_deadlock_freedom(&bad, 200, CheckMode::Subset),
        DeadlockVerdict::NotApplicable(_)
    ));
    let x = find_stuck_states(&bad, 200).unwrap();
    assert_eq!(x.stuck.len(), 1);
    assert!(!x.stuck[0].state.is_nil());
}

#[test]
fn lemma_properties_hold_on_the_corpus() {
    for f in TYPED {
        let r = verify_lemma_properties(&Sorting::new(), &system(f), &Typing::new(), CheckMode::Subset).unwrap();
        assert!(r.all_passed(), "{f}: {:?}", r.failures().collect::<Vec<_>>());
        assert!(r.count(|p| p == LemmaProperty::Substitution) > 0, "{f}");
    }
    let r = verify_lemma_properties(
        &Sorting::new(),
        &system("bob_open.mps"),
        &bob_typing("ga_all01.gty"),
        CheckMode::Subset,
    )
    .unwrap();
    assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn congruence_rewrites_preserve_typing() {
    for f in TYPED {
        let p = system(f);
        let r = verify_congruence_preservation(&Sorting::new(), &p, &Typing::new(), CheckMode::Subset).unwrap();
        assert!(r.all_passed(), "{f}: {:?}", r.failures().next());
        assert!(r.checks.len() > 10);
        let (open, delta) = open_restrictions(&normal_form(&p), &Typing::new()).unwrap();
        let r = verify_congruence_preservation(&Sorting::new(), &open, &delta, CheckMode::Subset).unwrap();
        assert!(r.all_passed(), "{f} opened: {:?}", r.failures().next());
    }
}

#[test]
fn intersection_of_interval_variants() {
    let open = |gty: &str| open_restrictions(&system_with("system_simple.mps", Some(gty)), &Typing::new()).unwrap();
    let (body, da) = open("ga_variant_a.gty");
    let (body_b, db) = open("ga_variant_b.gty");
    assert_eq!(body, body_b);
    assert_eq!(da.erase(), db.erase());
    let g = Sorting::new();
    let (_, both) = verify_intersection(&body, (&g, &da), (&g, &db), CheckMode::Subset).unwrap();
    assert_ne!(both, da);
    assert_ne!(both, db);

    let (_, dd) = open("ga_variant_disjoint.gty");
    assert!(matches!(
        pmst_core::checker::intersect_typing(&db, &dd),
        Err(IntersectError::EmptyInterval(_))
    ));
    assert!(matches!(
        verify_intersection(&body, (&g, &db), (&g, &dd), CheckMode::Subset),
        Err(IntersectionError::Premise(_))
    ));
}
