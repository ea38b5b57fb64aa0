//! Exact integer and rational arithmetic shared by every other module.
//!
//! Integers are [`BigInt`] and rationals are [`BigRational`], which keeps
//! every value in lowest terms with a positive denominator after each
//! operation.

pub mod linalg;
pub mod modular;
mod quad;

pub use quad::QuadInt;

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

use num_traits::{One, Signed, Zero};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Floor of the square root of a non-negative integer.
///
/// Panics on negative input.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative integer");
    n.sqrt()
}

/// The integer square root of `n` if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// Square root of a rational, when it is itself rational.
///
/// Numerator and denominator are tested separately; this is exact because
/// the representation is reduced.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let num = exact_sqrt(q.numer())?;
    let den = exact_sqrt(q.denom())?;
    Some(Rational::new(num, den))
}

pub fn to_integer(q: &Rational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

/// Lowest common multiple of the denominators of `values` (1 when empty).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `⌈num/den⌉` for `den > 0`.
pub fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    use num_integer::Integer;
    debug_assert!(den.is_positive());
    num.div_ceil(den)
}

/// `⌊num/den⌋` for `den > 0`.
pub fn floor_div(num: &BigInt, den: &BigInt) -> BigInt {
    use num_integer::Integer;
    debug_assert!(den.is_positive());
    num.div_floor(den)
}

/// Smallest integer `>= q`.
pub fn ceil_rat(q: &Rational) -> BigInt {
    ceil_div(q.numer(), q.denom())
}

/// Largest integer `<= q`.
pub fn floor_rat(q: &Rational) -> BigInt {
    floor_div(q.numer(), q.denom())
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}
