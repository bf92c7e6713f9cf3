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

//! Exact rational probabilities.
//!
//! Every probability in the calculus is an exact non-negative rational. Sums of
//! branch probabilities, path products and reachability masses are computed
//! without rounding, so "sums to one" checks are plain equality tests.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

/// Non-negative exact rational. Used for sums that may leave `[0, 1]`.
pub type Rational = Ratio<BigUint>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbError {
    #[error("malformed probability literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("probability {0} lies outside [0,1]")]
    OutOfRange(String),
}

/// An exact probability in `[0, 1]`, always kept in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prob(Rational);

impl Prob {
    pub fn zero() -> Self {
        Prob(Rational::zero())
    }

    pub fn one() -> Self {
        Prob(Rational::one())
    }

    pub fn new(numer: u64, denom: u64) -> Result<Self, ProbError> {
        if denom == 0 {
            return Err(ProbError::ZeroDenominator(alloc::format!("{numer}/{denom}")));
        }
        Self::from_rational(Rational::new(BigUint::from(numer), BigUint::from(denom)))
    }

    pub fn from_rational(r: Rational) -> Result<Self, ProbError> {
        if r > Rational::one() {
            return Err(ProbError::OutOfRange(render(&r)));
        }
        Ok(Prob(r))
    }

    /// Parses `INT`, `INT/INT` or a decimal literal `INT.DIGITS`. Decimals are
    /// converted exactly, so `0.6` is `3/5`.
    pub fn parse(text: &str) -> Result<Self, ProbError> {
        Self::from_rational(parse_rational(text)?)
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Product of two probabilities; stays in `[0, 1]`.
    pub fn mul(&self, other: &Prob) -> Prob {
        Prob(&self.0 * &other.0)
    }

    /// `self / count`; used for the uniform scheduler normalisation.
    pub fn div_count(&self, count: usize) -> Prob {
        assert!(count > 0, "division by an empty redex count");
        Prob(&self.0 / Rational::from_integer(BigUint::from(count)))
    }

    /// `self * count`, returned as an unconstrained rational.
    pub fn scale(&self, count: usize) -> Rational {
        &self.0 * Rational::from_integer(BigUint::from(count))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }
}

impl fmt::Debug for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Always rendered as `num/den`, including integers (`1/1`).
impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Renders a rational as `num/den`.
pub fn render(r: &Rational) -> String {
    alloc::format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both down until they fit.
            let bits = r.denom().bits().max(r.numer().bits());
            let shift = bits.saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::MAX);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::MAX);
            n / d
        }
    }
}

/// Exact sum of a sequence of probabilities.
pub fn sum<'a, I: IntoIterator<Item = &'a Prob>>(items: I) -> Rational {
    items
        .into_iter()
        .fold(Rational::zero(), |acc, p| acc + p.as_rational())
}

pub fn parse_rational(text: &str) -> Result<Rational, ProbError> {
    let malformed = || ProbError::Malformed(text.to_string());
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if let Some((n, d)) = text.split_once('/') {
        if !digits(n) || !digits(d) {
            return Err(malformed());
        }
        let n: BigUint = n.parse().map_err(|_| malformed())?;
        let d: BigUint = d.parse().map_err(|_| malformed())?;
        if d.is_zero() {
            return Err(ProbError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if !digits(whole) || !digits(frac) {
            return Err(malformed());
        }
        let scale = BigUint::from(10u32).pow(frac.len() as u32);
        let w: BigUint = whole.parse().map_err(|_| malformed())?;
        let f: BigUint = frac.parse().map_err(|_| malformed())?;
        return Ok(Rational::new(w * &scale + f, scale));
    }
    if !digits(text) {
        return Err(malformed());
    }
    let n: BigUint = text.parse().map_err(|_| malformed())?;
    Ok(Rational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(Prob::parse("0.6").unwrap(), Prob::new(3, 5).unwrap());
        assert_eq!(Prob::parse("0.95").unwrap(), Prob::new(19, 20).unwrap());
        assert_eq!(Prob::parse("1").unwrap(), Prob::one());
        assert_eq!(Prob::parse("2/4").unwrap().to_string(), "1/2");
    }

    #[test]
    fn rejects_out_of_range_and_junk() {
        assert!(matches!(Prob::parse("1.5"), Err(ProbError::OutOfRange(_))));
        assert!(matches!(Prob::parse("3/0"), Err(ProbError::ZeroDenominator(_))));
        assert!(matches!(Prob::parse("0."), Err(ProbError::Malformed(_))));
        assert!(matches!(Prob::parse("-1"), Err(ProbError::Malformed(_))));
    }

    #[test]
    fn display_is_num_over_den() {
        assert_eq!(Prob::one().to_string(), "1/1");
        assert_eq!(Prob::zero().to_string(), "0/1");
    }

    #[test]
    fn sums_and_scaling() {
        let ps = [Prob::parse("0.6").unwrap(), Prob::parse("0.3").unwrap(), Prob::parse("0.1").unwrap()];
        assert!(sum(&ps).is_one());
        assert_eq!(Prob::new(3, 5).unwrap().div_count(3), Prob::new(1, 5).unwrap());
        assert_eq!(Prob::new(1, 5).unwrap().scale(3), Rational::new(3u32.into(), 5u32.into()));
        assert!((Prob::new(1, 3).unwrap().to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
