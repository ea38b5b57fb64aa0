//! The Néron–Severi lattice `Zh ⊕ Zδ` of `X = S^[2]` for a generic K3 surface
//! `S` of degree `2t`, with the Beauville–Bogomolov–Fujiki form
//! `q(xh − yδ) = 2t·x² − 2y²`.
//!
//! The nef, movable and pseudoeffective cones are bounded by rays of slope
//! `ν`, `μ` and `ω` built from Pell solutions. When `Aut(X)` is nontrivial it
//! is generated by an anti-symplectic involution acting on NS(X) as the
//! reflection in `D = bh − aδ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::linalg::solve_unique;
use crate::arith::{exact_sqrt, rat_int, Rational};
use crate::pell::{self, PellSolution};
use crate::serde_exact;
use crate::{Error, Result};

/// The class `xh·h − yd·δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NSClass {
    pub t: u64,
    #[serde(with = "serde_exact::bigint")]
    pub xh: BigInt,
    #[serde(with = "serde_exact::bigint")]
    pub yd: BigInt,
}

impl NSClass {
    pub fn new(t: u64, xh: impl Into<BigInt>, yd: impl Into<BigInt>) -> Self {
        Self {
            t,
            xh: xh.into(),
            yd: yd.into(),
        }
    }

    pub fn h(t: u64) -> Self {
        Self::new(t, 1, 0)
    }

    pub fn delta(t: u64) -> Self {
        Self::new(t, 0, -1)
    }

    pub fn square(&self) -> BigInt {
        bbf_pair(self, self).expect("same t")
    }

    pub fn is_primitive(&self) -> bool {
        self.xh.gcd(&self.yd).is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.xh.is_zero() && self.yd.is_zero()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            t: self.t,
            xh: k * &self.xh,
            yd: k * &self.yd,
        }
    }

    pub fn add(&self, other: &NSClass) -> Result<Self> {
        same_t(self.t, other.t)?;
        Ok(Self {
            t: self.t,
            xh: &self.xh + &other.xh,
            yd: &self.yd + &other.yd,
        })
    }
}

impl fmt::Display for NSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term(c: &BigInt, name: &str) -> String {
            if c.is_one() {
                name.to_string()
            } else {
                format!("{c}*{name}")
            }
        }
        let dc = -&self.yd;
        match (self.xh.is_zero(), dc.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => {
                if self.xh.is_negative() {
                    write!(f, "-{}", term(&-&self.xh, "h"))
                } else {
                    write!(f, "{}", term(&self.xh, "h"))
                }
            }
            (true, false) => {
                if dc.is_negative() {
                    write!(f, "-{}", term(&-&dc, "delta"))
                } else {
                    write!(f, "{}", term(&dc, "delta"))
                }
            }
            (false, false) => {
                let head = if self.xh.is_negative() {
                    format!("-{}", term(&-&self.xh, "h"))
                } else {
                    term(&self.xh, "h")
                };
                let sign = if dc.is_negative() { '-' } else { '+' };
                write!(f, "{head} {sign} {}", term(&dc.abs(), "delta"))
            }
        }
    }
}

pub(crate) fn same_t(t1: u64, t2: u64) -> Result<()> {
    if t1 != t2 {
        return Err(Error::Parameter(format!(
            "classes on S^[2] of degrees 2·{t1} and 2·{t2} cannot be combined"
        )));
    }
    Ok(())
}

/// `(x₁h − y₁δ, x₂h − y₂δ) = 2t·x₁x₂ − 2y₁y₂`.
pub fn bbf_pair(c1: &NSClass, c2: &NSClass) -> Result<BigInt> {
    same_t(c1.t, c2.t)?;
    Ok(2 * BigInt::from(c1.t) * &c1.xh * &c2.xh - 2 * &c1.yd * &c2.yd)
}

/// Positive generator of `(c, H²(X, Z))`: `gcd(x, 2y)` for `c = xh − yδ`.
pub fn divisibility(c: &NSClass) -> Result<BigInt> {
    if !c.is_primitive() {
        return Err(Error::Domain(format!("{c} is not primitive")));
    }
    Ok(c.xh.gcd(&(2 * &c.yd)))
}

/// Slopes of the nef (`ν`), movable (`μ`) and pseudoeffective (`ω`) cone
/// boundaries: the cones are spanned by `h` and `h − νδ`, `h` and `h − μδ`,
/// and `δ` and `h − ωδ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSlopes {
    pub t: u64,
    #[serde(with = "serde_exact::rational")]
    pub mu: Rational,
    #[serde(with = "serde_exact::rational")]
    pub nu: Rational,
    #[serde(with = "serde_exact::rational")]
    pub omega: Rational,
}

/// Least positive solution of `x² − e²y² = n` for `e ≥ 1`, by factoring
/// `n = (x − ey)(x + ey)`.
fn minimal_square_d(e: &BigInt, n: &BigInt) -> Option<(BigInt, BigInt)> {
    let an = n.abs();
    let mut best: Option<(BigInt, BigInt)> = None;
    let mut f = BigInt::one();
    while &f * &f <= an {
        if an.is_multiple_of(&f) {
            let g = &an / &f;
            for (lo, hi) in [(f.clone(), g.clone()), (-&g, -&f)] {
                // x − ey = lo·sign, x + ey = hi·sign with product n
                let (u, v) = if n.is_positive() { (lo, hi) } else { (-hi, lo) };
                let (sum, diff) = (&u + &v, &v - &u);
                if sum.is_even() && diff.is_even() {
                    let x = (sum / BigInt::from(2)).abs();
                    let ey = (diff / BigInt::from(2)).abs();
                    if ey.is_positive() && x.is_positive() && ey.is_multiple_of(e) {
                        let y = ey / e;
                        if best.as_ref().is_none_or(|(bx, _)| &x < bx) {
                            best = Some((x, y));
                        }
                    }
                }
            }
        }
        f += 1;
    }
    best
}

/// The least positive solution `(a₅, b₅)` of `x² − 4t·y² = 5`, if any.
pub fn minimal_p4t5(t: u64) -> Result<Option<(BigInt, BigInt)>> {
    let d = BigInt::from(4 * t);
    let n = BigInt::from(5);
    if let Some(e) = exact_sqrt(&d) {
        return Ok(minimal_square_d(&e, &n));
    }
    Ok(pell::solve_pell_type(&d, &n)?
        .minimal_positive
        .map(|s| (s.x, s.y)))
}

pub fn cone_slopes(t: u64) -> Result<ConeSlopes> {
    if t == 0 {
        return Err(Error::Domain(
            "the degree parameter t must be positive".into(),
        ));
    }
    let tb = BigInt::from(t);
    let (mu, omega) = match exact_sqrt(&tb) {
        Some(r) => (rat_int(&r), rat_int(&r)),
        None => {
            let PellSolution { x: c, y: d, .. } = pell::fundamental_unit(&tb)?;
            (Rational::new(&tb * &d, c.clone()), Rational::new(c, d))
        }
    };
    let nu = match minimal_p4t5(t)? {
        None => mu.clone(),
        Some((a5, b5)) => Rational::new(2 * &tb * b5, a5),
    };
    Ok(ConeSlopes { t, mu, nu, omega })
}

/// Coefficients `(α, β)` with `c = α·r1 + β·r2`, rays given as `(x, y)` for
/// `xh − yδ`.
fn cone_coefficients(
    r1: (Rational, Rational),
    r2: (Rational, Rational),
    c: &NSClass,
) -> (Rational, Rational) {
    let m = vec![vec![r1.0, r2.0], vec![r1.1, r2.1]];
    let s = solve_unique(&m, &[rat_int(&c.xh), rat_int(&c.yd)]).expect("independent rays");
    (s[0].clone(), s[1].clone())
}

impl ConeSlopes {
    /// Strictly inside the cone spanned by `h` and `h − νδ`.
    pub fn is_ample(&self, c: &NSClass) -> bool {
        let (a, b) = cone_coefficients(
            (Rational::one(), Rational::zero()),
            (Rational::one(), self.nu.clone()),
            c,
        );
        a.is_positive() && b.is_positive()
    }

    /// In the closed cone spanned by `δ` and `h − ωδ`.
    pub fn is_pseudoeffective(&self, c: &NSClass) -> bool {
        let (a, b) = cone_coefficients(
            (Rational::zero(), -Rational::one()),
            (Rational::one(), self.omega.clone()),
            c,
        );
        !a.is_negative() && !b.is_negative()
    }
}

pub fn is_ample(c: &NSClass) -> Result<bool> {
    Ok(cone_slopes(c.t)?.is_ample(c))
}

pub fn is_pseudoeffective(c: &NSClass) -> Result<bool> {
    Ok(cone_slopes(c.t)?.is_pseudoeffective(c))
}

/// The Pell data that decides whether `X` carries a ⟨2⟩-polarisation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutVerdict {
    pub t: u64,
    pub nontrivial: bool,
    /// `D = bh − aδ` with `(a, b)` the least solution of `x² − t·y² = −1`.
    pub witness: Option<NSClass>,
    pub reason: String,
}

/// `t` non-square, `x² − 4t·y² = 5` unsolvable and `x² − t·y² = −1`
/// solvable. The witness is checked to be ample of square 2.
pub fn aut_is_nontrivial(t: u64) -> Result<AutVerdict> {
    if t < 2 {
        return Err(Error::Domain(format!("t must be at least 2, got {t}")));
    }
    let tb = BigInt::from(t);
    let verdict = |nontrivial, witness, reason: &str| AutVerdict {
        t,
        nontrivial,
        witness,
        reason: reason.to_string(),
    };
    if exact_sqrt(&tb).is_some() {
        return Ok(verdict(false, None, "t is a perfect square"));
    }
    if minimal_p4t5(t)?.is_some() {
        return Ok(verdict(false, None, "x² − 4t·y² = 5 is solvable"));
    }
    let Some(neg) = pell::minimal_negative(&tb)? else {
        return Ok(verdict(false, None, "x² − t·y² = −1 is unsolvable"));
    };
    let d = NSClass::new(t, neg.y, neg.x);
    if d.square() != BigInt::from(2) || !is_ample(&d)? {
        return Err(Error::Inconsistent(format!(
            "witness {d} for t={t} is not an ample class of square 2"
        )));
    }
    Ok(verdict(true, Some(d), "ample class of square 2"))
}

pub fn is_admissible(t: u64) -> Result<bool> {
    Ok(t >= 2 && aut_is_nontrivial(t)?.nontrivial)
}

/// The polarisation `D = bh − aδ` of an admissible `t`.
pub fn polarisation(t: u64) -> Result<NSClass> {
    aut_is_nontrivial(t)?
        .witness
        .ok_or_else(|| Error::Domain(format!("t={t} admits no ⟨2⟩-polarisation")))
}

/// An ample class of square 2 found directly: the least positive solution
/// `(a, b)` of `a² − t·b² = −1` gives `D = bh − aδ` of square 2, and larger
/// solutions only push the slope `a/b` towards `√t`, so `D` is the only
/// candidate to test against the nef slope.
pub fn ample_square2_witness(t: u64) -> Result<Option<NSClass>> {
    let tb = BigInt::from(t);
    if t < 2 || exact_sqrt(&tb).is_some() {
        return Ok(None);
    }
    let set = pell::solve_pell_type(&tb, &-BigInt::one())?;
    let Some(m) = set.minimal_positive else {
        return Ok(None);
    };
    let d = NSClass::new(t, m.y, m.x);
    Ok(cone_slopes(t)?.is_ample(&d).then_some(d))
}

/// `ι*` on coordinates `(x, y)` of `xh − yδ`:
/// `(x, y) ↦ (cx − dy, tdx − cy)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionMatrix {
    pub t: u64,
    #[serde(with = "serde_exact::bigint_array")]
    pub row_x: [BigInt; 2],
    #[serde(with = "serde_exact::bigint_array")]
    pub row_y: [BigInt; 2],
}

impl InvolutionMatrix {
    pub fn entries(&self) -> [[BigInt; 2]; 2] {
        [self.row_x.clone(), self.row_y.clone()]
    }

    pub fn apply(&self, c: &NSClass) -> Result<NSClass> {
        same_t(self.t, c.t)?;
        Ok(NSClass {
            t: self.t,
            xh: &self.row_x[0] * &c.xh + &self.row_x[1] * &c.yd,
            yd: &self.row_y[0] * &c.xh + &self.row_y[1] * &c.yd,
        })
    }

    pub fn compose(&self, other: &InvolutionMatrix) -> Result<InvolutionMatrix> {
        same_t(self.t, other.t)?;
        let a = self.entries();
        let b = other.entries();
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Ok(InvolutionMatrix {
            t: self.t,
            row_x: [e(0, 0), e(0, 1)],
            row_y: [e(1, 0), e(1, 1)],
        })
    }

    pub fn is_identity(&self) -> bool {
        self.row_x[0].is_one()
            && self.row_x[1].is_zero()
            && self.row_y[0].is_zero()
            && self.row_y[1].is_one()
    }
}

pub fn involution_matrix(t: u64) -> Result<InvolutionMatrix> {
    if !is_admissible(t)? {
        return Err(Error::Domain(format!(
            "S^[2] of degree 2·{t} has no nontrivial automorphism"
        )));
    }
    let tb = BigInt::from(t);
    let PellSolution { x: c, y: d, .. } = pell::fundamental_unit(&tb)?;
    Ok(InvolutionMatrix {
        t,
        row_x: [c.clone(), -&d],
        row_y: [&tb * &d, -c],
    })
}

/// The primitive class `qh − pδ` on the ray of `h − (p/q)δ`.
pub fn ray_class(t: u64, slope: &Rational) -> NSClass {
    NSClass::new(t, slope.denom().clone(), slope.numer().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn pairing() {
        let d = NSClass::new(10, 1, 3);
        assert_eq!(bbf_pair(&d, &d).unwrap(), int(2));
        assert_eq!(
            bbf_pair(&NSClass::h(10), &NSClass::delta(10)).unwrap(),
            int(0)
        );
        let d13 = NSClass::new(13, 5, 18);
        assert_eq!(d13.square(), int(2));
        assert_eq!(NSClass::delta(3).square(), int(-2));
        assert!(matches!(
            bbf_pair(&NSClass::h(2), &NSClass::h(3)),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn divisibilities() {
        assert_eq!(divisibility(&NSClass::new(10, 1, 3)).unwrap(), int(1));
        assert_eq!(divisibility(&NSClass::delta(10)).unwrap(), int(2));
        assert_eq!(divisibility(&NSClass::h(10)).unwrap(), int(1));
        assert_eq!(divisibility(&NSClass::new(5, 2, 1)).unwrap(), int(2));
        assert!(matches!(
            divisibility(&NSClass::new(5, 2, 4)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn slopes() {
        let s = cone_slopes(2).unwrap();
        assert_eq!((s.mu, s.nu, s.omega), (rat(4, 3), rat(4, 3), rat(3, 2)));
        let s = cone_slopes(10).unwrap();
        assert_eq!(
            (s.mu, s.nu, s.omega),
            (rat(60, 19), rat(60, 19), rat(19, 6))
        );
        let s = cone_slopes(4).unwrap();
        assert_eq!((s.mu, s.nu, s.omega), (rat(2, 1), rat(2, 1), rat(2, 1)));
        // x² − 4y² = 5 is solved by (3, 1)
        let s = cone_slopes(1).unwrap();
        assert_eq!((s.mu, s.nu, s.omega), (rat(1, 1), rat(2, 3), rat(1, 1)));
        // x² − 44y² = 5 is solved by (7, 1), so the nef cone is smaller
        let s = cone_slopes(11).unwrap();
        assert_eq!(s.nu, rat(22, 7));
        assert!(cone_slopes(0).is_err());
    }

    #[test]
    fn cones() {
        assert!(is_ample(&NSClass::new(10, 1, 3)).unwrap());
        assert!(!is_ample(&NSClass::h(10)).unwrap());
        assert!(!is_ample(&NSClass::new(2, 1, 2)).unwrap());
        assert!(!is_pseudoeffective(&NSClass::new(10, 1, 4)).unwrap());
        assert!(is_pseudoeffective(&NSClass::delta(10)).unwrap());
        assert!(is_pseudoeffective(&NSClass::new(2, 2, 3)).unwrap());
        assert!(!is_pseudoeffective(&NSClass::new(2, 1, 2)).unwrap());
        assert!(!is_pseudoeffective(&NSClass::new(2, -1, 0)).unwrap());
    }

    #[test]
    fn automorphisms() {
        let v = aut_is_nontrivial(2).unwrap();
        assert!(v.nontrivial);
        assert_eq!(v.witness, Some(NSClass::new(2, 1, 1)));
        assert_eq!(v.witness.unwrap().to_string(), "h - delta");
        let v = aut_is_nontrivial(10).unwrap();
        assert_eq!(
            v.witness.as_ref().map(ToString::to_string).as_deref(),
            Some("h - 3*delta")
        );
        assert!(!aut_is_nontrivial(3).unwrap().nontrivial);
        assert!(!aut_is_nontrivial(4).unwrap().nontrivial);
        assert!(aut_is_nontrivial(1).is_err());
        let first: Vec<u64> = (2..=20).filter(|&t| is_admissible(t).unwrap()).collect();
        assert_eq!(first, vec![2, 10, 13, 17]);
    }

    #[test]
    fn involution() {
        let m = involution_matrix(10).unwrap();
        assert_eq!(m.apply(&NSClass::h(10)).unwrap(), NSClass::new(10, 19, 60));
        let d = NSClass::new(10, 1, 3);
        assert_eq!(m.apply(&d).unwrap(), d);
        assert!(m.compose(&m).unwrap().is_identity());
        assert!(matches!(involution_matrix(3), Err(Error::Domain(_))));
    }

    #[test]
    fn display() {
        assert_eq!(NSClass::new(2, 0, 0).to_string(), "0");
        assert_eq!(NSClass::delta(2).to_string(), "delta");
        assert_eq!(NSClass::new(2, -2, -3).to_string(), "-2*h + 3*delta");
        assert_eq!(NSClass::new(2, 5, 0).to_string(), "5*h");
    }

    proptest! {
        #[test]
        fn pairing_is_even(t in 1u64..1000, x1 in -99i64..99, y1 in -99i64..99, x2 in -99i64..99, y2 in -99i64..99) {
            let p = bbf_pair(&NSClass::new(t, x1, y1), &NSClass::new(t, x2, y2)).unwrap();
            prop_assert!(p.is_even());
        }
    }
}
