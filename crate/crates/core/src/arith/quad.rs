use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::is_square;
use crate::{Error, Result};

/// An element `a + b√d` of the real quadratic ring `Z[√d]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    d: BigInt,
}

impl QuadInt {
    /// Rejects non-positive and perfect-square `d`.
    pub fn new(a: BigInt, b: BigInt, d: BigInt) -> Result<Self> {
        if !d.is_positive() || is_square(&d) {
            return Err(Error::Domain(format!(
                "Z[√d] needs a positive non-square d, got {d}"
            )));
        }
        Ok(Self { a, b, d })
    }

    pub fn one(d: &BigInt) -> Result<Self> {
        Self::new(BigInt::one(), BigInt::zero(), d.clone())
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn mul(&self, other: &QuadInt) -> Result<QuadInt> {
        if self.d != other.d {
            return Err(Error::Parameter(format!(
                "cannot multiply in Z[√{}] and Z[√{}]",
                self.d, other.d
            )));
        }
        Ok(QuadInt {
            a: &self.a * &other.a + &self.d * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d.clone(),
        })
    }

    pub fn conj(&self) -> QuadInt {
        QuadInt {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// `N(a + b√d) = a² − d b²`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.d * &self.b * &self.b
    }

    pub fn neg(&self) -> QuadInt {
        QuadInt {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// `self^k` for `k >= 0`, by repeated squaring.
    pub fn pow(&self, mut k: u64) -> QuadInt {
        let mut base = self.clone();
        let mut acc = QuadInt {
            a: BigInt::one(),
            b: BigInt::zero(),
            d: self.d.clone(),
        };
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            k >>= 1;
        }
        acc
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}√{}", self.a, -&self.b, self.d)
        } else {
            write!(f, "{}+{}√{}", self.a, self.b, self.d)
        }
    }
}
