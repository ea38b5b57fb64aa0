//! Brute-force oracles that share no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Roots;

fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

fn is_square_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = (n as u128).sqrt() as i128;
    (r * r == n).then_some(r)
}

/// Every `(x, y)` with `0 ≤ y ≤ max_y` and `x² − d·y² = n`, both signs of `x`.
pub fn pell_window(d: i128, n: i128, max_y: i128) -> BTreeSet<(i128, i128)> {
    let mut out = BTreeSet::new();
    for y in 0..=max_y {
        if let Some(x) = is_square_i128(n + d * y * y) {
            out.insert((x, y));
            out.insert((-x, y));
        }
    }
    out
}

/// `p² − d·q²` along the convergents `p/q` of `√d` over two periods.
fn convergent_norms(d: u64) -> Vec<BigInt> {
    let a0 = isqrt(d);
    let (dd, a0b) = (BigInt::from(d), BigInt::from(a0));
    let (mut m, mut den, mut a) = (BigInt::from(0), BigInt::from(1), a0b.clone());
    let (mut p0, mut p1) = (BigInt::from(1), a0b.clone());
    let (mut q0, mut q1) = (BigInt::from(0), BigInt::from(1));
    let mut norms = vec![&p1 * &p1 - &dd * &q1 * &q1];
    let mut ends = 0;
    while ends < 2 {
        m = &den * &a - &m;
        den = (&dd - &m * &m) / &den;
        a = (&a0b + &m) / &den;
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        norms.push(&p2 * &p2 - &dd * &q2 * &q2);
        (p0, p1, q0, q1) = (p1, p2, q1, q2);
        if a == BigInt::from(2) * &a0b {
            ends += 1;
        }
    }
    norms
}

/// Solvability of `x² − d·y² = n` for non-square `d` and `0 < |n| < √d`
/// with `n` squarefree: every solution is primitive and so shows up as a
/// convergent of `√d`.
pub fn solvable_small_n(d: u64, n: i64) -> bool {
    assert!((n * n) < d as i64 && n != 0, "n must satisfy |n| < √d");
    convergent_norms(d).contains(&BigInt::from(n))
}

/// `x² − t·y² = −1` solvable, `x² − 4t·y² = 5` unsolvable and `t` not a
/// square.
pub fn admissible(t: u64) -> bool {
    let r = isqrt(t);
    if r * r == t {
        return false;
    }
    let negative = solvable_small_n(t, -1);
    let five = if 4 * t > 25 {
        solvable_small_n(4 * t, 5)
    } else {
        // tiny fundamental units keep every fundamental solution below y = 10
        !pell_window(4 * t as i128, 5, 1000).is_empty()
    };
    negative && !five
}

/// Integral coordinates `A = (x, y, z, w)` inside the box satisfying the four
/// families of constraints, scanned naively with `z` solved from the
/// invariance equation.
pub fn box_search(
    t: i128,
    a: i128,
    b: i128,
    c: i128,
    d: i128,
    bounds: [i128; 4],
) -> Vec<[i128; 4]> {
    let tb2 = t * b * b;
    let bound = 6 * tb2 - 2 * a * a;
    let mut out = Vec::new();
    for x in -bounds[0]..=bounds[0] {
        for y in -bounds[1]..=bounds[1] {
            // 8tdx + 4(td − c)y + dz = 0
            let num = -(8 * t * d * x + 4 * (t * d - c) * y);
            if num % d != 0 {
                continue;
            }
            let z = num / d;
            if z.abs() > bounds[2] {
                continue;
            }
            for w in -bounds[3]..=bounds[3] {
                let h2 = 6 * t * x + 3 * t * y + z + 10 * w;
                let sigma = 2 * t * x + t * y + z + 10 * w;
                let d2 = (4 * t + 8 * t * tb2) * x
                    + (2 * t + 4 * t * tb2 - 4 * a * b * t) * y
                    + (1 + tb2) * z
                    + 20 * w;
                if (0..=bound).contains(&h2) && (0..=2).contains(&sigma) && 0 < d2 && d2 < 12 {
                    out.push([x, y, z, w]);
                }
            }
        }
    }
    out.sort();
    out
}
