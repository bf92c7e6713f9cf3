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

//! Classification of interval sets as proper and reachable.

use num_traits::{One, Zero};

use super::Interval;
use crate::prob::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalClass {
    /// `sum(lower) <= 1 <= sum(upper)`.
    pub proper: bool,
    /// For every `i`: `sum_{j != i} lower_j + upper_i <= 1 <= sum_{j != i} upper_j + lower_i`.
    pub reachable: bool,
}

pub fn classify_interval_set(deltas: &[Interval]) -> IntervalClass {
    let one = Rational::one();
    let sum_lower = sum(deltas.iter().map(|d| d.lower().as_rational()));
    let sum_upper = sum(deltas.iter().map(|d| d.upper().as_rational()));
    let proper = sum_lower <= one && one <= sum_upper;
    let reachable = !deltas.is_empty()
        && (0..deltas.len()).all(|i| {
            let others = deltas.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, d)| d);
            let lo = sum(others.clone().map(|d| d.lower().as_rational()));
            let hi = sum(others.map(|d| d.upper().as_rational()));
            lo + deltas[i].upper().as_rational() <= one && one <= hi + deltas[i].lower().as_rational()
        });
    IntervalClass { proper, reachable }
}

fn sum<'a>(xs: impl Iterator<Item = &'a Rational>) -> Rational {
    xs.fold(Rational::zero(), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn iv(a: &str, b: &str) -> Interval {
        Interval::parse(a, b).unwrap()
    }

    #[test]
    fn full_intervals() {
        let c = classify_interval_set(&vec![iv("0", "1"); 4]);
        assert!(c.proper && c.reachable);
    }

    #[test]
    fn proper_not_reachable() {
        let c = classify_interval_set(&[iv("0", "1"), iv("0.95", "1")]);
        assert_eq!(c, IntervalClass { proper: true, reachable: false });
    }

    #[test]
    fn point_one() {
        let c = classify_interval_set(&[iv("1", "1")]);
        assert!(c.proper && c.reachable);
    }

    #[test]
    fn improper() {
        let c = classify_interval_set(&[iv("0", "0.2"), iv("0", "0.3")]);
        assert!(!c.proper && !c.reachable);
        assert!(!classify_interval_set(&[]).proper);
    }
}
