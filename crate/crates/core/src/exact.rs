//! Exact rational arithmetic shared by the closed-form formulas and the
//! enumeration oracle.

use std::fmt;
use std::ops::Deref;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub type Rational = BigRational;

/// Builds `num / den` in lowest terms. Panics if `den` is zero.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `(d)_r = d (d-1) ... (d-r+1)`.
pub fn falling(d: u64, r: u32) -> u128 {
    (0..u64::from(r)).fold(1u128, |acc, k| acc * u128::from(d.saturating_sub(k)))
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(ell - 1)!!`, the number of perfect matchings of `ell` labelled points.
/// Returns zero for odd `ell`.
pub fn matchings_count(ell: u64) -> BigUint {
    if ell % 2 == 1 {
        return BigUint::zero();
    }
    (1..ell).step_by(2).fold(BigUint::one(), |acc, k| acc * k)
}

/// `ln((ell - 1)!!) = ln(ell!) - (ell/2) ln 2 - ln((ell/2)!)` for even `ell`.
pub fn ln_matchings_count(ell: u64) -> f64 {
    use statrs::function::factorial::ln_factorial;
    let half = ell / 2;
    ln_factorial(ell) - half as f64 * std::f64::consts::LN_2 - ln_factorial(half)
}

/// A rational value that serializes as both a decimal and an exact `p/q` string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl Exact {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Exact(ratio(num, den))
    }

    pub fn value(&self) -> f64 {
        to_f64(&self.0)
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl Deref for Exact {
    type Target = Rational;

    fn deref(&self) -> &Rational {
        &self.0
    }
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Self {
        Exact(r)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Exact", 2)?;
        s.serialize_field("decimal", &self.value())?;
        s.serialize_field("exact", &self.0.to_string())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorials() {
        assert_eq!(matchings_count(2), BigUint::from(1u32));
        assert_eq!(matchings_count(4), BigUint::from(3u32));
        assert_eq!(matchings_count(12), BigUint::from(10395u32));
        assert_eq!(matchings_count(16), BigUint::from(2_027_025u32));
        assert_eq!(matchings_count(0), BigUint::one());
        assert!(matchings_count(5).is_zero());
    }

    #[test]
    fn log_double_factorial_matches_exact() {
        for ell in (2..=40).step_by(2) {
            let exact = matchings_count(ell).to_f64().unwrap().ln();
            assert!((ln_matchings_count(ell) - exact).abs() < 1e-9, "ell={ell}");
        }
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(3, 3), 6);
        assert_eq!(falling(2, 3), 0);
        assert_eq!(falling(5, 0), 1);
        assert_eq!(falling(1_000_000, 4), 999_994_000_010_999_994_000_000);
    }

    #[test]
    fn exact_serializes_both_forms() {
        let json = serde_json::to_value(Exact::new(4, 6)).unwrap();
        assert_eq!(json["exact"], "2/3");
        assert!((json["decimal"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }
}
