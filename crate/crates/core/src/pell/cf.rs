//! Continued fractions of quadratic irrationals `(P₀ + √d)/Q₀`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{floor_div, isqrt};

/// The expansion `√d = [a₀; a₁, …, a_L]` with its (purely periodic) tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtExpansion {
    pub a0: BigInt,
    pub period: Vec<BigInt>,
}

impl SqrtExpansion {
    /// Partial quotients `a₀, a₁, …` continuing periodically forever.
    pub fn quotients(&self) -> impl Iterator<Item = &BigInt> + '_ {
        std::iter::once(&self.a0).chain(self.period.iter().cycle())
    }

    /// Convergents `p_i / q_i`, starting from `p₀/q₀ = a₀/1`.
    pub fn convergents(&self) -> impl Iterator<Item = (BigInt, BigInt)> + '_ {
        let mut p = (BigInt::zero(), BigInt::one()); // (p_{i-2}, p_{i-1})
        let mut q = (BigInt::one(), BigInt::zero());
        self.quotients().map(move |a| {
            let pn = a * &p.1 + &p.0;
            let qn = a * &q.1 + &q.0;
            p = (std::mem::take(&mut p.1), pn.clone());
            q = (std::mem::take(&mut q.1), qn.clone());
            (pn, qn)
        })
    }
}

/// Expands `√d` for a positive non-square `d`; the period is detected by the
/// first repeated `(m, q)` state.
pub fn sqrt_expansion(d: &BigInt) -> SqrtExpansion {
    let a0 = isqrt(d);
    debug_assert!(&a0 * &a0 != *d, "square d has no periodic expansion");
    let mut m = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    let mut seen = HashSet::new();
    let mut period = Vec::new();
    loop {
        m = &q * &a - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        if !seen.insert((m.clone(), q.clone())) {
            break;
        }
        period.push(a.clone());
    }
    SqrtExpansion { a0, period }
}

/// `⌊(p + √d)/q⌋` for non-square `d` and `q ≠ 0`.
fn floor_quotient(p: &BigInt, q: &BigInt, sqrt_d: &BigInt) -> BigInt {
    let top = p + sqrt_d;
    if q.is_positive() {
        floor_div(&top, q)
    } else {
        // (p+√d)/q = −y with y irrational, so ⌊−y⌋ = −⌊y⌋ − 1
        -floor_div(&top, &-q) - BigInt::one()
    }
}

/// Runs the PQa recurrence on `(p0 + √d)/q0` until the first `i ≥ 1` with
/// `Q_i = ±1`, returning `(G_{i-1}, B_{i-1})`. Gives up once a `(P, Q)` state
/// repeats, since `Q = ±1` can then no longer appear.
///
/// Requires `q0 | p0² − d`. The returned pair satisfies
/// `G² − d·B² = ±q0`.
pub fn pqa_first_unit(p0: &BigInt, q0: &BigInt, d: &BigInt) -> Option<(BigInt, BigInt)> {
    debug_assert!(((p0 * p0 - d) % q0).is_zero());
    let sqrt_d = isqrt(d);
    let (mut b2, mut b1) = (BigInt::one(), BigInt::zero());
    let (mut g2, mut g1) = (-p0, q0.clone());
    let (mut p, mut q) = (p0.clone(), q0.clone());
    let mut seen = HashSet::new();
    loop {
        let a = floor_quotient(&p, &q, &sqrt_d);
        let b = &a * &b1 + &b2;
        let g = &a * &g1 + &g2;
        let p_next = &a * &q - &p;
        let q_next = (d - &p_next * &p_next) / &q;
        (b2, b1) = (b1, b);
        (g2, g1) = (g1, g);
        p = p_next;
        q = q_next;
        if q.is_one() || (-&q).is_one() {
            return Some((g1, b1));
        }
        if !seen.insert((p.clone(), q.clone())) {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn expansions() {
        let e = sqrt_expansion(&int(10));
        assert_eq!(e.a0, int(3));
        assert_eq!(e.period, vec![int(6)]);
        let e = sqrt_expansion(&int(13));
        assert_eq!(e.period, vec![int(1), int(1), int(1), int(1), int(6)]);
        let e = sqrt_expansion(&int(3));
        assert_eq!(e.period, vec![int(1), int(2)]);
    }

    #[test]
    fn convergents_of_sqrt2() {
        let e = sqrt_expansion(&int(2));
        let c: Vec<_> = e.convergents().take(4).collect();
        assert_eq!(
            c,
            vec![
                (int(1), int(1)),
                (int(3), int(2)),
                (int(7), int(5)),
                (int(17), int(12))
            ]
        );
    }

    #[test]
    fn pqa_identity() {
        // (1 + √10)/9: 1 − 10 = −9 is divisible by 9
        let (g, b) = pqa_first_unit(&int(1), &int(9), &int(10)).unwrap();
        let n = &g * &g - int(10) * &b * &b;
        assert!(n == int(9) || n == int(-9), "{g} {b}");
        // x² − 3y² = −1 has no solution: (0 + √3)/1 reaches Q = 1 with norm +1
        let (g, b) = pqa_first_unit(&int(0), &int(1), &int(3)).unwrap();
        assert_eq!(&g * &g - int(3) * &b * &b, int(1));
    }
}
