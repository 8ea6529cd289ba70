//! Exact rational scalars.
//!
//! All weights in the discrete engine are arbitrary-precision rationals, so
//! normalization, partial sums, and Bayes-style divisions are exact: two
//! pipelines that agree mathematically agree to the bit.  Rationals render as
//! `"p/q"` (or `"p"` for integers) in every textual interface.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used for all weights and predicate values.
pub type Rat = num_rational::BigRational;

/// Builds the rational `n / d`.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| format!("cannot parse `{s}` as a rational: {e}"))
}

/// Returns true when `r` lies in the closed unit interval.
pub fn in_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= Rat::one()
}

/// Converts to floating point (for the operator engine and reports).
pub fn rat_to_f64(r: &Rat) -> f64 {
    num_traits::ToPrimitive::to_f64(r).expect("rational out of f64 range")
}

/// Returns true when `r` is exactly 0 or exactly 1.
pub fn is_zero_or_one(r: &Rat) -> bool {
    r.is_zero() || r.is_one()
}
