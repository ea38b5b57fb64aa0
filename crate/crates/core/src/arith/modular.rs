//! Linear congruences over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A residue class `r mod m` with `m >= 1` and `0 <= r < m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    pub r: BigInt,
    pub m: BigInt,
}

impl Residue {
    pub fn all() -> Self {
        Residue {
            r: BigInt::zero(),
            m: BigInt::one(),
        }
    }

    /// Smallest member `>= lo`.
    pub fn first_at_least(&self, lo: &BigInt) -> BigInt {
        let shift = (&self.r - lo).mod_floor(&self.m);
        lo + shift
    }
}

/// Solutions of `a·k ≡ b (mod m)`, or `None` if there are none.
pub fn solve_linear_congruence(a: &BigInt, b: &BigInt, m: &BigInt) -> Option<Residue> {
    assert!(m.is_positive(), "modulus must be positive");
    let a = a.mod_floor(m);
    let b = b.mod_floor(m);
    let eg = a.extended_gcd(m);
    let g = eg.gcd;
    if !b.is_multiple_of(&g) {
        return None;
    }
    let m2 = m / &g;
    let r = ((&b / &g) * eg.x).mod_floor(&m2);
    Some(Residue { r, m: m2 })
}

/// Intersection of two residue classes (generalised CRT).
pub fn crt(x: &Residue, y: &Residue) -> Option<Residue> {
    // k = x.r + x.m·s, need x.m·s ≡ y.r − x.r (mod y.m)
    let s = solve_linear_congruence(&x.m, &(&y.r - &x.r), &y.m)?;
    let m = x.m.lcm(&y.m);
    let r = (&x.r + &x.m * &s.r).mod_floor(&m);
    Some(Residue { r, m })
}
