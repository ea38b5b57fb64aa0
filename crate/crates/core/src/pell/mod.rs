//! Pell equations `x² − d·y² = n`: the unit equation, the negative equation
//! and general Pell-type equations with their equivalence classes.
//!
//! Two solutions of `P_d(n)` are equivalent when they differ by a unit of
//! norm one, i.e. when `(XX′ − dYY′)/n` and `(XY′ − X′Y)/n` are integers.
//! Classes are found with the LMM algorithm (PQa expansions of
//! `(z + √d)/|m|`); a windowed search over Nagell's bounds is available as an
//! independent route.

mod cf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use cf::{pqa_first_unit, sqrt_expansion, SqrtExpansion};

use crate::arith::{exact_sqrt, is_square, isqrt, QuadInt};
use crate::serde_exact;
use crate::{Error, Result};

/// A solution `(x, y)` of `x² − d·y² = n`.
///
/// Coordinates may be negative; class representatives reported by
/// [`solve_pell_type`] are not.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PellSolution {
    #[serde(with = "serde_exact::bigint")]
    pub x: BigInt,
    #[serde(with = "serde_exact::bigint")]
    pub y: BigInt,
    #[serde(with = "serde_exact::bigint")]
    pub d: BigInt,
    #[serde(with = "serde_exact::bigint")]
    pub n: BigInt,
}

impl PellSolution {
    pub fn new(x: BigInt, y: BigInt, d: BigInt, n: BigInt) -> Result<Self> {
        if &x * &x - &d * &y * &y != n {
            return Err(Error::Inconsistent(format!(
                "({x}, {y}) does not solve x² − {d}y² = {n}"
            )));
        }
        Ok(Self { x, y, d, n })
    }

    fn from_quad(z: &QuadInt, n: &BigInt) -> Self {
        debug_assert_eq!(z.norm(), *n);
        Self {
            x: z.a.clone(),
            y: z.b.clone(),
            d: z.d().clone(),
            n: n.clone(),
        }
    }

    pub fn as_quad(&self) -> QuadInt {
        QuadInt::new(self.x.clone(), self.y.clone(), self.d.clone()).expect("d checked on entry")
    }

    /// Both coordinates strictly positive.
    pub fn is_positive(&self) -> bool {
        self.x.is_positive() && self.y.is_positive()
    }

    /// The solution `(|x|, |y|)`.
    pub fn abs(&self) -> Self {
        Self {
            x: self.x.abs(),
            y: self.y.abs(),
            ..self.clone()
        }
    }

    /// Multiplies by a unit of norm one, staying in the same class.
    pub fn times(&self, unit: &QuadInt) -> Self {
        debug_assert!(unit.norm().is_one());
        Self::from_quad(&self.as_quad().mul(unit).expect("same ring"), &self.n)
    }

    fn neg(&self) -> Self {
        Self {
            x: -&self.x,
            y: -&self.y,
            ..self.clone()
        }
    }

    /// `−z̄ = (−x, y)`, the representative of the conjugate class.
    fn partner(&self) -> Self {
        Self {
            x: -&self.x,
            ..self.clone()
        }
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One class (or a conjugate pair of classes) of solutions.
///
/// `fundamental` has `x, y ≥ 0` and the least `y` in its class. When
/// `conjugate_pair` is set, `(−x, y)` is the fundamental solution of a second,
/// inequivalent class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionClass {
    pub fundamental: PellSolution,
    pub conjugate_pair: bool,
}

impl SolutionClass {
    /// Signed fundamental solutions: one per class.
    pub fn representatives(&self) -> Vec<PellSolution> {
        let mut out = vec![self.fundamental.clone()];
        if self.conjugate_pair {
            out.push(self.fundamental.partner());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionClassSet {
    #[serde(with = "serde_exact::bigint")]
    pub d: BigInt,
    #[serde(with = "serde_exact::bigint")]
    pub n: BigInt,
    pub fundamentals: Vec<SolutionClass>,
    pub minimal_positive: Option<PellSolution>,
}

impl SolutionClassSet {
    pub fn is_empty(&self) -> bool {
        self.fundamentals.is_empty()
    }

    /// Number of equivalence classes (a conjugate pair counts twice).
    pub fn class_count(&self) -> usize {
        self.fundamentals
            .iter()
            .map(|c| 1 + usize::from(c.conjugate_pair))
            .sum()
    }

    pub fn representatives(&self) -> Vec<PellSolution> {
        self.fundamentals
            .iter()
            .flat_map(SolutionClass::representatives)
            .collect()
    }

    /// Every solution with `0 ≤ y ≤ max_y`, generated from the class
    /// representatives by unit multiplication and sign changes. Sorted.
    pub fn solutions_up_to(&self, max_y: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
        let unit = fundamental_unit(&self.d)?.as_quad();
        let inv = unit.conj();
        let mut out = Vec::new();
        for rep in self.representatives() {
            // |y| is unimodal along the orbit with its minimum at rep
            for step in [&unit, &inv] {
                let mut cur = rep.clone();
                while cur.y.abs() <= *max_y {
                    let (x, y) = (cur.x.clone(), cur.y.abs());
                    out.push((x.clone(), y.clone()));
                    out.push((-x, y));
                    cur = cur.times(step);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

fn check_d(d: &BigInt) -> Result<()> {
    if d < &BigInt::from(2) || is_square(d) {
        return Err(Error::Domain(format!(
            "Pell equations need a non-square d ≥ 2, got {d}"
        )));
    }
    Ok(())
}

fn check_dn(d: &BigInt, n: &BigInt) -> Result<()> {
    check_d(d)?;
    if n.is_zero() {
        return Err(Error::Parameter("Pell-type equations need n ≠ 0".into()));
    }
    Ok(())
}

/// The least positive solution of `x² − d·y² = 1`, read off the convergents
/// of `√d` (index `L − 1` for even period `L`, `2L − 1` for odd).
pub fn fundamental_unit(d: &BigInt) -> Result<PellSolution> {
    check_d(d)?;
    let e = sqrt_expansion(d);
    let l = e.period.len();
    let idx = if l.is_multiple_of(2) { l - 1 } else { 2 * l - 1 };
    let (p, q) = e.convergents().nth(idx).expect("infinite iterator");
    PellSolution::new(p, q, d.clone(), BigInt::one())
}

/// The least positive solution of `x² − d·y² = −1`; it exists exactly when
/// the period of `√d` is odd, and is then the convergent of index `L − 1`.
pub fn minimal_negative(d: &BigInt) -> Result<Option<PellSolution>> {
    check_d(d)?;
    let e = sqrt_expansion(d);
    let l = e.period.len();
    if l.is_multiple_of(2) {
        return Ok(None);
    }
    let (p, q) = e.convergents().nth(l - 1).expect("infinite iterator");
    PellSolution::new(p, q, d.clone(), -BigInt::one()).map(Some)
}

/// `(XX′ − dYY′)/n` and `(XY′ − X′Y)/n` both integral.
pub fn are_equivalent(s1: &PellSolution, s2: &PellSolution) -> Result<bool> {
    if s1.d != s2.d || s1.n != s2.n {
        return Err(Error::Parameter(format!(
            "solutions of P_{}({}) and P_{}({}) cannot be compared",
            s1.d, s1.n, s2.d, s2.n
        )));
    }
    let n = &s1.n;
    let u = &s1.x * &s2.x - &s1.d * &s1.y * &s2.y;
    let v = &s1.x * &s2.y - &s2.x * &s1.y;
    Ok(u.is_multiple_of(n) && v.is_multiple_of(n))
}

/// Solutions of `P_d(n)` produced by LMM, at least one per class.
fn lmm_solutions(d: &BigInt, n: &BigInt, negative: Option<&PellSolution>) -> Vec<PellSolution> {
    let mut out = Vec::new();
    let mut f = BigInt::one();
    let abs_n = n.abs();
    while &f * &f <= abs_n {
        let f2 = &f * &f;
        if n.is_multiple_of(&f2) {
            let m = n / &f2;
            let am = m.abs();
            let half: BigInt = &am / 2;
            // z runs over (−|m|/2, |m|/2]
            let mut z: BigInt = if am.is_even() { -&half + 1 } else { -&half };
            while z <= half {
                if (&z * &z - d).is_multiple_of(&am) {
                    if let Some((r, s)) = pqa_first_unit(&z, &am, d) {
                        let norm = &r * &r - d * &s * &s;
                        if norm == m {
                            out.push(PellSolution::from_quad(
                                &QuadInt::new(&f * r, &f * s, d.clone()).expect("checked d"),
                                n,
                            ));
                        } else if norm == -&m {
                            if let Some(neg) = negative {
                                let (t, u) = (&neg.x, &neg.y);
                                let x = &f * (&r * t + d * &s * u);
                                let y = &f * (&r * u + &s * t);
                                out.push(PellSolution {
                                    x,
                                    y,
                                    d: d.clone(),
                                    n: n.clone(),
                                });
                            }
                        }
                    }
                }
                z += 1;
            }
        }
        f += 1;
    }
    out
}

/// Sign normalisation: `y ≥ 0`, and `x > 0` when `y = 0`.
fn sign_normal(s: PellSolution) -> PellSolution {
    if s.y.is_negative() || (s.y.is_zero() && s.x.is_negative()) {
        s.neg()
    } else {
        s
    }
}

/// The fundamental solution of the class of `s`: least `|y|` along the unit
/// orbit, then `y ≥ 0`, then `x > 0` when both signs of `x` are in the class.
fn class_fundamental(s: &PellSolution, unit: &QuadInt) -> PellSolution {
    let inv = unit.conj();
    let mut cur = s.clone();
    loop {
        let down = cur.times(&inv);
        if down.y.abs() < cur.y.abs() {
            cur = down;
            continue;
        }
        let up = cur.times(unit);
        if up.y.abs() < cur.y.abs() {
            cur = up;
            continue;
        }
        break;
    }
    let best = cur.y.abs();
    [cur.times(&inv), cur.times(unit), cur]
        .into_iter()
        .filter(|c| c.y.abs() == best)
        .map(sign_normal)
        .max_by(|a, b| a.x.cmp(&b.x))
        .expect("cur itself qualifies")
}

/// Merges equivalent solutions and packs conjugate classes into pairs.
fn assemble(d: &BigInt, n: &BigInt, candidates: Vec<PellSolution>) -> Result<SolutionClassSet> {
    let unit = fundamental_unit(d)?.as_quad();
    let mut reps: Vec<PellSolution> = Vec::new();
    for s in candidates {
        for c in [s.clone(), s.partner()] {
            let f = class_fundamental(&c, &unit);
            if !reps
                .iter()
                .any(|r| are_equivalent(r, &f).expect("same equation"))
            {
                reps.push(f);
            }
        }
    }
    reps.sort_by(|a, b| (&a.y, &a.x).cmp(&(&b.y, &b.x)));

    let mut fundamentals = Vec::new();
    for r in reps.iter().filter(|r| !r.x.is_negative()) {
        let conjugate_pair = r.x.is_positive() && reps.contains(&r.partner());
        fundamentals.push(SolutionClass {
            fundamental: r.clone(),
            conjugate_pair,
        });
    }
    let minimal_positive = reps
        .iter()
        .map(|r| {
            if r.x.is_zero() || r.y.is_zero() {
                r.times(&unit).abs()
            } else {
                r.abs()
            }
        })
        .min_by(|a, b| a.x.cmp(&b.x));
    Ok(SolutionClassSet {
        d: d.clone(),
        n: n.clone(),
        fundamentals,
        minimal_positive,
    })
}

/// All classes of `x² − d·y² = n`, one fundamental solution per class.
pub fn solve_pell_type(d: &BigInt, n: &BigInt) -> Result<SolutionClassSet> {
    check_dn(d, n)?;
    let negative = minimal_negative(d)?;
    let raw = lmm_solutions(d, n, negative.as_ref());
    assemble(d, n, raw)
}

pub fn is_solvable(d: &BigInt, n: &BigInt) -> Result<bool> {
    Ok(!solve_pell_type(d, n)?.is_empty())
}

/// Nagell's range `lo ≤ Y ≤ hi` containing the `y` of every fundamental
/// solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NagellWindow {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl NagellWindow {
    pub fn width(&self) -> BigInt {
        (&self.hi - &self.lo + BigInt::one()).max(BigInt::zero())
    }
}

pub fn nagell_window(d: &BigInt, n: &BigInt) -> Result<NagellWindow> {
    check_dn(d, n)?;
    let PellSolution { x: c1, y: b1, .. } = fundamental_unit(d)?;
    let b1sq = &b1 * &b1;
    if n.is_positive() {
        let hi = isqrt(&((&b1sq * n) / (2 * (&c1 + 1))));
        Ok(NagellWindow {
            lo: BigInt::zero(),
            hi,
        })
    } else {
        let an = n.abs();
        let mut lo = isqrt(&(&an / d));
        while d * &lo * &lo < an {
            lo += 1;
        }
        let hi = isqrt(&((&b1sq * &an) / (2 * (&c1 - 1))));
        Ok(NagellWindow { lo, hi })
    }
}

/// Classes of `x² − d·y² = n` by scanning Nagell's window directly.
///
/// The window can be very wide (`b₁` grows exponentially in the period of
/// `√d`); callers are expected to check [`NagellWindow::width`] first.
pub fn nagell_classes(d: &BigInt, n: &BigInt) -> Result<SolutionClassSet> {
    let w = nagell_window(d, n)?;
    let mut found = Vec::new();
    let mut y = w.lo.clone();
    while y <= w.hi {
        if let Some(x) = exact_sqrt(&(n + d * &y * &y)) {
            found.push(PellSolution::new(x, y.clone(), d.clone(), n.clone())?);
        }
        y += 1;
    }
    assemble(d, n, found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use proptest::prelude::*;

    fn sol(x: i64, y: i64, d: i64, n: i64) -> PellSolution {
        PellSolution::new(int(x), int(y), int(d), int(n)).unwrap()
    }

    fn xy(s: &PellSolution) -> (BigInt, BigInt) {
        (s.x.clone(), s.y.clone())
    }

    #[test]
    fn units() {
        for (d, x, y) in [
            (10, 19, 6),
            (2, 3, 2),
            (13, 649, 180),
            (3, 2, 1),
            (61, 1766319049, 226153980),
        ] {
            let u = fundamental_unit(&int(d)).unwrap();
            assert_eq!(xy(&u), (int(x), int(y)), "d={d}");
        }
        assert!(matches!(fundamental_unit(&int(16)), Err(Error::Domain(_))));
    }

    #[test]
    fn negatives() {
        assert_eq!(
            minimal_negative(&int(10)).unwrap().map(|s| xy(&s)),
            Some((int(3), int(1)))
        );
        assert_eq!(
            minimal_negative(&int(13)).unwrap().map(|s| xy(&s)),
            Some((int(18), int(5)))
        );
        assert_eq!(
            minimal_negative(&int(2)).unwrap().map(|s| xy(&s)),
            Some((int(1), int(1)))
        );
        assert_eq!(minimal_negative(&int(3)).unwrap(), None);
        assert!(minimal_negative(&int(9)).is_err());
    }

    #[test]
    fn negative_is_root_of_unit() {
        for d in 2..=500i64 {
            let d = int(d);
            if is_square(&d) {
                continue;
            }
            let u = fundamental_unit(&d).unwrap();
            if let Some(s) = minimal_negative(&d).unwrap() {
                assert!(s.y.is_odd());
                assert_eq!(u.x, &s.x * &s.x + &d * &s.y * &s.y);
                assert_eq!(u.y, 2 * &s.x * &s.y);
            }
        }
    }

    #[test]
    fn spec_classes() {
        assert!(solve_pell_type(&int(40), &int(5)).unwrap().is_empty());
        assert!(!is_solvable(&int(40), &int(5)).unwrap());

        let s = solve_pell_type(&int(10), &int(-1)).unwrap();
        assert_eq!(s.fundamentals.len(), 1);
        assert_eq!(xy(&s.fundamentals[0].fundamental), (int(3), int(1)));
        assert!(!s.fundamentals[0].conjugate_pair);
        assert_eq!(s.minimal_positive.as_ref().map(xy), Some((int(3), int(1))));

        let s = solve_pell_type(&int(10), &int(9)).unwrap();
        let fs: Vec<_> = s
            .fundamentals
            .iter()
            .map(|c| (xy(&c.fundamental), c.conjugate_pair))
            .collect();
        assert_eq!(
            fs,
            vec![((int(3), int(0)), false), ((int(7), int(2)), true)]
        );
        assert_eq!(s.class_count(), 3);
        assert_eq!(s.minimal_positive.as_ref().map(xy), Some((int(7), int(2))));

        assert!(is_solvable(&int(2), &int(-1)).unwrap());
        assert!(matches!(
            solve_pell_type(&int(10), &int(0)),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn equivalence() {
        assert!(!are_equivalent(&sol(7, 2, 10, 9), &sol(3, 0, 10, 9)).unwrap());
        let s = sol(3, 1, 10, -1);
        assert!(are_equivalent(&s, &s).unwrap());
        assert!(are_equivalent(&s, &sol(117, 37, 10, -1)).unwrap());
        assert!(matches!(
            are_equivalent(&s, &sol(7, 2, 10, 9)),
            Err(Error::Parameter(_))
        ));
        assert!(PellSolution::new(int(3), int(1), int(10), int(1)).is_err());
    }

    #[test]
    fn windows() {
        // d=10: unit (19, 6); n=9: ⌊36·9/40⌋ = 8 so Y ≤ 2
        let w = nagell_window(&int(10), &int(9)).unwrap();
        assert_eq!((w.lo, w.hi), (int(0), int(2)));
        let w = nagell_window(&int(10), &int(-1)).unwrap();
        assert_eq!((w.lo, w.hi), (int(1), int(1)));
    }

    #[test]
    fn routes_agree() {
        for d in 2..=60i64 {
            if is_square(&int(d)) {
                continue;
            }
            for n in -40..=40i64 {
                if n == 0 {
                    continue;
                }
                let a = solve_pell_type(&int(d), &int(n)).unwrap();
                let b = nagell_classes(&int(d), &int(n)).unwrap();
                assert_eq!(a, b, "d={d} n={n}");
            }
        }
    }

    proptest! {
        #[test]
        fn unit_multiples_keep_class(
            d in prop::sample::select(vec![2i64, 3, 5, 7, 10, 13, 29, 41]),
            n in -30i64..30,
            k in 0u64..4,
        ) {
            prop_assume!(n != 0);
            let set = solve_pell_type(&int(d), &int(n)).unwrap();
            let unit = fundamental_unit(&int(d)).unwrap().as_quad();
            for r in set.representatives() {
                let moved = r.times(&unit.pow(k));
                prop_assert!(are_equivalent(&r, &moved).unwrap());
                prop_assert_eq!(class_fundamental(&moved, &unit), r.clone());
            }
        }
    }
}
