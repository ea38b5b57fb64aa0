//! The Hodge pieces `H^{2,2}` and `H^{3,3}` of `X = S^[2]` for a generic K3
//! surface of degree `2t`.
//!
//! Classes in `H⁴` are written in the rational basis
//! `{h², hδ, δ², Q}` with `Q = (2/5)q∨`; the lattice `H^{2,2}(X, Z)` has the
//! integral basis `{h², (h² − hδ)/2, (δ² + Q)/8, Q}`. Classes in `H⁶` are
//! written in `{h³, h²δ}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::linalg::det_int;
use crate::arith::{rat, rat_int, to_integer, Rational};
use crate::picard::{self, bbf_pair, divisibility, same_t, InvolutionMatrix, NSClass};
use crate::serde_exact;
use crate::Result;

/// `p·h² + q·hδ + r·δ² + s·Q` with `Q = (2/5)q∨`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct H4Class {
    pub t: u64,
    #[serde(with = "serde_exact::rational_array")]
    pub coeffs: [Rational; 4],
}

impl H4Class {
    pub fn new(t: u64, coeffs: [Rational; 4]) -> Self {
        Self { t, coeffs }
    }

    pub fn from_ints(t: u64, v: [i64; 4]) -> Self {
        Self::new(t, v.map(|x| rat(x, 1)))
    }

    pub fn zero(t: u64) -> Self {
        Self::from_ints(t, [0; 4])
    }

    /// `Q = (2/5)q∨`.
    pub fn q_dual(t: u64) -> Self {
        Self::from_ints(t, [0, 0, 0, 1])
    }

    pub fn basis(t: u64, i: usize) -> Self {
        let mut v = [0; 4];
        v[i] = 1;
        Self::from_ints(t, v)
    }

    pub fn add(&self, o: &H4Class) -> Result<Self> {
        same_t(self.t, o.t)?;
        Ok(Self::new(
            self.t,
            std::array::from_fn(|i| &self.coeffs[i] + &o.coeffs[i]),
        ))
    }

    pub fn sub(&self, o: &H4Class) -> Result<Self> {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.t, std::array::from_fn(|i| k * &self.coeffs[i]))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for H4Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", c.join(", "))
    }
}

/// Coordinates in the integral basis `{h², (h² − hδ)/2, (δ² + Q)/8, Q}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct H4IntegralCoords {
    pub t: u64,
    #[serde(with = "serde_exact::bigint_array")]
    pub alpha: [BigInt; 4],
}

impl H4IntegralCoords {
    pub fn new(t: u64, alpha: [BigInt; 4]) -> Self {
        Self { t, alpha }
    }

    pub fn from_ints(t: u64, v: [i64; 4]) -> Self {
        Self::new(t, v.map(BigInt::from))
    }
}

impl fmt::Display for H4IntegralCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.alpha;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// `u·h³ + v·h²δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct H6Class {
    pub t: u64,
    #[serde(with = "serde_exact::rational_array")]
    pub coeffs: [Rational; 2],
}

impl H6Class {
    pub fn new(t: u64, u: Rational, v: Rational) -> Self {
        Self { t, coeffs: [u, v] }
    }
}

/// `(x₁h − y₁δ)(x₂h − y₂δ) = x₁x₂·h² − (x₁y₂ + x₂y₁)·hδ + y₁y₂·δ²`.
pub fn cup_h2(c1: &NSClass, c2: &NSClass) -> Result<H4Class> {
    same_t(c1.t, c2.t)?;
    let (x1, y1, x2, y2) = (&c1.xh, &c1.yd, &c2.xh, &c2.yd);
    Ok(H4Class::new(
        c1.t,
        [
            rat_int(&(x1 * x2)),
            rat_int(&-(x1 * y2 + x2 * y1)),
            rat_int(&(y1 * y2)),
            Rational::zero(),
        ],
    ))
}

/// The intersection numbers on `{h², hδ, δ², Q}`, as multiples of the
/// stated power of `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairingConstants {
    /// `⟨h², h²⟩ / t²`
    pub h2_h2: i64,
    /// `⟨h², δ²⟩ / t`
    pub h2_d2: i64,
    /// `⟨hδ, hδ⟩ / t`
    pub hd_hd: i64,
    /// `⟨δ², δ²⟩`
    pub d2_d2: i64,
    /// `⟨Q, h²⟩ / t`
    pub q_h2: i64,
    /// `⟨Q, δ²⟩`
    pub q_d2: i64,
    /// `⟨Q, Q⟩`
    pub q_q: i64,
}

impl PairingConstants {
    /// `⟨αβ, γδ⟩ = (α,β)(γ,δ) + (α,γ)(β,δ) + (α,δ)(β,γ)`, `⟨Q, αβ⟩ = 10(α,β)`
    /// and `⟨q∨, q∨⟩ = 23·25`.
    pub const STANDARD: PairingConstants = PairingConstants {
        h2_h2: 12,
        h2_d2: -4,
        hd_hd: -4,
        d2_d2: 12,
        q_h2: 20,
        q_d2: -20,
        q_q: 92,
    };

    /// The symmetric 4×4 matrix on `{h², hδ, δ², Q}`.
    pub fn matrix(&self, t: u64) -> [[BigInt; 4]; 4] {
        let t = BigInt::from(t);
        let k = |c: i64| BigInt::from(c);
        let z = BigInt::zero;
        [
            [
                k(self.h2_h2) * &t * &t,
                z(),
                k(self.h2_d2) * &t,
                k(self.q_h2) * &t,
            ],
            [z(), k(self.hd_hd) * &t, z(), z()],
            [k(self.h2_d2) * &t, z(), k(self.d2_d2), k(self.q_d2)],
            [k(self.q_h2) * &t, z(), k(self.q_d2), k(self.q_q)],
        ]
    }

    pub fn pair(&self, a: &H4Class, b: &H4Class) -> Result<Rational> {
        same_t(a.t, b.t)?;
        let m = self.matrix(a.t);
        let mut acc = Rational::zero();
        for (row, ai) in m.iter().zip(&a.coeffs) {
            for (mij, bj) in row.iter().zip(&b.coeffs) {
                if !mij.is_zero() {
                    acc += ai * bj * rat_int(mij);
                }
            }
        }
        Ok(acc)
    }

    /// The matrix of this pairing on the integral basis.
    pub fn integral_gram(&self, t: u64) -> [[Rational; 4]; 4] {
        let basis: Vec<H4Class> = (0..4)
            .map(|i| {
                let mut e = [0i64; 4];
                e[i] = 1;
                from_integral(&H4IntegralCoords::from_ints(t, e))
            })
            .collect();
        std::array::from_fn(|i| {
            std::array::from_fn(|j| self.pair(&basis[i], &basis[j]).expect("same t"))
        })
    }
}

pub fn pair_h4(a: &H4Class, b: &H4Class) -> Result<Rational> {
    PairingConstants::STANDARD.pair(a, b)
}

/// Gram matrix of `H^{2,2}(X, Z)` on the integral basis, with determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gram {
    pub t: u64,
    pub matrix: [[BigInt; 4]; 4],
    pub det: BigInt,
}

impl Gram {
    pub fn rational_matrix(&self) -> [[Rational; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| rat_int(&self.matrix[i][j])))
    }
}

/// Closed-form Gram matrix; its determinant is `−84t³`.
pub fn gram_h22(t: u64) -> Gram {
    let tb = BigInt::from(t);
    let t2 = &tb * &tb;
    let k = |c: i64| BigInt::from(c);
    let matrix = [
        [k(12) * &t2, k(6) * &t2, k(2) * &tb, k(20) * &tb],
        [k(6) * &t2, &tb * (k(3) * &tb - 1), tb.clone(), k(10) * &tb],
        [k(2) * &tb, tb.clone(), k(1), k(9)],
        [k(20) * &tb, k(10) * &tb, k(9), k(92)],
    ];
    let det = det_int(&matrix.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    Gram { t, matrix, det }
}

/// `(p + q, −2q, 8r, s − r)` when all four are integers.
pub fn to_integral(c: &H4Class) -> Option<H4IntegralCoords> {
    let [p, q, r, s] = &c.coeffs;
    let two = rat(2, 1);
    let eight = rat(8, 1);
    Some(H4IntegralCoords::new(
        c.t,
        [
            to_integer(&(p + q))?,
            to_integer(&(-&two * q))?,
            to_integer(&(&eight * r))?,
            to_integer(&(s - r))?,
        ],
    ))
}

pub fn from_integral(a: &H4IntegralCoords) -> H4Class {
    let [a1, a2, a3, a4] = a.alpha.clone().map(|x| rat_int(&x));
    let half = rat(1, 2);
    let eighth = rat(1, 8);
    H4Class::new(
        a.t,
        [
            &a1 + &half * &a2,
            -(&half * &a2),
            &eighth * &a3,
            &eighth * &a3 + &a4,
        ],
    )
}

/// `ι*` on `H⁴`, built from its action on NS(X): multiplicative on
/// `{h², hδ, δ²}` and fixing `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H4Involution {
    pub t: u64,
    images: [H4Class; 4],
}

impl H4Involution {
    pub fn from_matrix(m: &InvolutionMatrix) -> Self {
        let t = m.t;
        let ih = m.apply(&NSClass::h(t)).expect("same t");
        let id = m.apply(&NSClass::delta(t)).expect("same t");
        let images = [
            cup_h2(&ih, &ih).expect("same t"),
            cup_h2(&ih, &id).expect("same t"),
            cup_h2(&id, &id).expect("same t"),
            H4Class::q_dual(t),
        ];
        Self { t, images }
    }

    pub fn new(t: u64) -> Result<Self> {
        Ok(Self::from_matrix(&picard::involution_matrix(t)?))
    }

    pub fn apply(&self, c: &H4Class) -> Result<H4Class> {
        same_t(self.t, c.t)?;
        let mut out = H4Class::zero(self.t);
        for (k, img) in c.coeffs.iter().zip(&self.images) {
            out = out.add(&img.scale(k))?;
        }
        Ok(out)
    }

    /// Matrix whose `j`-th column is the image of the `j`-th basis vector.
    pub fn matrix(&self) -> [[Rational; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.images[j].coeffs[i].clone()))
    }
}

pub fn iota_star_h4(c: &H4Class) -> Result<H4Class> {
    H4Involution::new(c.t)?.apply(c)
}

/// `⟨c, (σ + σ̄)²⟩ / η`: values `(2t, 0, −2, 10)` on `{h², hδ, δ², Q}`.
pub fn sigma_functional(c: &H4Class) -> Rational {
    let [p, _, r, s] = &c.coeffs;
    rat(2 * c.t as i64, 1) * p - rat(2, 1) * r + rat(10, 1) * s
}

/// `∫ c⁴ = 3·q(c)²`.
pub fn fujiki_quartic(c: &NSClass) -> BigInt {
    let q = c.square();
    BigInt::from(3) * &q * &q
}

/// `c · (xh − yδ)` in `{h³, h²δ}`, using `δ³ = −(3/t)h²δ`,
/// `hδ² = −(1/3t)h³`, `q∨h = (25/6t)h³` and `q∨δ = (25/2t)h²δ`.
pub fn reduce_to_h6(c: &H4Class, d: &NSClass) -> Result<H6Class> {
    same_t(c.t, d.t)?;
    let t = rat(c.t as i64, 1);
    let three_t = rat(3, 1) * &t;
    let [p, q, r, s] = &c.coeffs;
    let x = rat_int(&d.xh);
    let y = rat_int(&d.yd);
    let u = p * &x + q * &y / &three_t - r * &x / &three_t + rat(5, 1) * s * &x / &three_t;
    let v = -(p * &y) + q * &x + rat(3, 1) * r * &y / &t - rat(5, 1) * s * &y / &t;
    Ok(H6Class::new(c.t, u, v))
}

/// `∫ (u·h³ + v·h²δ)(xh − yδ) = 12t²·ux + 4t·vy`.
pub fn pair_h6_h2(e: &H6Class, d: &NSClass) -> Result<Rational> {
    same_t(e.t, d.t)?;
    let t = e.t as i64;
    Ok(rat(12 * t * t, 1) * &e.coeffs[0] * rat_int(&d.xh)
        + rat(4 * t, 1) * &e.coeffs[1] * rat_int(&d.yd))
}

/// Coordinates `(6t·u, 4t·v)` in the basis `{h³/6t, h²δ/4t}` of
/// `H^{3,3}(X, Z)`, when integral.
pub fn h6_integral(e: &H6Class) -> Option<(BigInt, BigInt)> {
    let t = e.t as i64;
    Some((
        to_integer(&(rat(6 * t, 1) * &e.coeffs[0]))?,
        to_integer(&(rat(4 * t, 1) * &e.coeffs[1]))?,
    ))
}

/// `(c, c∨)` with `c∨ = c / div(c)` the primitive curve class attached to
/// `c`; so `h∨ = h` and `δ∨ = δ/2`.
pub fn dual_pairing(c: &NSClass) -> Result<Rational> {
    let div = divisibility(c)?;
    Ok(Rational::new(bbf_pair(c, c)?, div))
}

/// Whether `gram_h22(t)` has `|det| = 84t³`.
pub fn discriminant_matches(g: &Gram) -> bool {
    let t = BigInt::from(g.t);
    g.det.abs() == BigInt::from(84) * &t * &t * &t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn c4(t: u64, v: [(i64, i64); 4]) -> H4Class {
        H4Class::new(t, v.map(|(n, d)| rat(n, d)))
    }

    #[test]
    fn cups() {
        let d = NSClass::new(2, 1, 1);
        assert_eq!(
            cup_h2(&d, &d).unwrap(),
            H4Class::from_ints(2, [1, -2, 1, 0])
        );
        let d = NSClass::new(10, 1, 3);
        assert_eq!(
            cup_h2(&d, &d).unwrap(),
            H4Class::from_ints(10, [1, -6, 9, 0])
        );
        assert_eq!(
            cup_h2(&NSClass::h(5), &NSClass::delta(5)).unwrap(),
            H4Class::from_ints(5, [0, 1, 0, 0])
        );
        assert!(cup_h2(&NSClass::h(5), &NSClass::h(6)).is_err());
    }

    #[test]
    fn pairings() {
        let q = H4Class::q_dual(7);
        assert_eq!(pair_h4(&q, &q).unwrap(), rat(92, 1));
        let a = c4(2, [(1, 2), (-1, 2), (-1, 4), (-1, 4)]);
        let b = c4(2, [(1, 2), (-3, 2), (5, 4), (1, 4)]);
        assert_eq!(pair_h4(&a, &b).unwrap(), rat(0, 1));
        let h2 = H4Class::basis(9, 0);
        assert_eq!(pair_h4(&h2, &h2).unwrap(), rat(12 * 81, 1));
        // q∨ itself: ⟨q∨, q∨⟩ = 23·25
        let qv = q.scale(&rat(5, 2));
        assert_eq!(pair_h4(&qv, &qv).unwrap(), rat(575, 1));
        assert!(pair_h4(&h2, &H4Class::basis(8, 0)).is_err());
    }

    #[test]
    fn gram() {
        assert_eq!(gram_h22(1).det.abs(), int(84));
        assert_eq!(gram_h22(10).det.abs(), int(84000));
        for t in 1..=50 {
            let g = gram_h22(t);
            assert!(discriminant_matches(&g));
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(g.matrix[i][j], g.matrix[j][i]);
                }
            }
            assert_eq!(
                g.rational_matrix(),
                PairingConstants::STANDARD.integral_gram(t),
                "t={t}"
            );
        }
    }

    #[test]
    fn integral_coordinates() {
        let f = H4Class::from_ints(10, [5, -30, 45, -1]);
        let a = to_integral(&f).unwrap();
        assert_eq!(a, H4IntegralCoords::from_ints(10, [-25, 60, 360, -46]));
        assert_eq!(from_integral(&a), f);
        assert_eq!(
            to_integral(&c4(10, [(0, 1), (0, 1), (0, 1), (-13, 12)])),
            None
        );
        assert_eq!(
            to_integral(&H4Class::zero(3)),
            Some(H4IntegralCoords::from_ints(3, [0; 4]))
        );
    }

    #[test]
    fn involution() {
        let i = H4Involution::new(10).unwrap();
        let q = H4Class::q_dual(10);
        assert_eq!(i.apply(&q).unwrap(), q);
        let d = NSClass::new(10, 1, 3);
        let d2 = cup_h2(&d, &d).unwrap();
        assert_eq!(i.apply(&d2).unwrap(), d2);
        for k in 0..4 {
            let e = H4Class::basis(10, k);
            assert_eq!(i.apply(&i.apply(&e).unwrap()).unwrap(), e);
        }
        assert!(iota_star_h4(&H4Class::zero(3)).is_err());
    }

    #[test]
    fn sigma() {
        assert_eq!(sigma_functional(&H4Class::basis(10, 0)), rat(20, 1));
        assert_eq!(sigma_functional(&H4Class::basis(10, 1)), rat(0, 1));
        assert_eq!(
            sigma_functional(&H4Class::from_ints(10, [5, -30, 45, -1])),
            rat(0, 1)
        );
    }

    #[test]
    fn quartic() {
        assert_eq!(fujiki_quartic(&NSClass::new(10, 1, 3)), int(12));
        assert_eq!(fujiki_quartic(&NSClass::delta(10)), int(12));
        assert_eq!(fujiki_quartic(&NSClass::new(10, 0, 0)), int(0));
    }

    #[test]
    fn h6_relations() {
        let t = 7u64;
        let d2 = H4Class::basis(t, 2);
        assert_eq!(
            reduce_to_h6(&d2, &NSClass::delta(t)).unwrap(),
            H6Class::new(t, rat(0, 1), rat(-3, 7))
        );
        assert_eq!(
            reduce_to_h6(&H4Class::q_dual(t), &NSClass::h(t)).unwrap(),
            H6Class::new(t, rat(5, 21), rat(0, 1))
        );
        assert_eq!(
            reduce_to_h6(&H4Class::basis(t, 0), &NSClass::h(t)).unwrap(),
            H6Class::new(t, rat(1, 1), rat(0, 1))
        );
        assert_eq!(
            h6_integral(&H6Class::new(t, rat(1, 42), rat(0, 1))),
            Some((int(1), int(0)))
        );
        assert_eq!(
            h6_integral(&H6Class::new(t, rat(1, 1), rat(0, 1))),
            Some((int(42), int(0)))
        );
        assert_eq!(h6_integral(&H6Class::new(t, rat(1, 84), rat(0, 1))), None);
    }

    #[test]
    fn duals() {
        assert_eq!(dual_pairing(&NSClass::new(10, 1, 3)).unwrap(), rat(2, 1));
        assert_eq!(dual_pairing(&NSClass::h(10)).unwrap(), rat(20, 1));
        assert_eq!(dual_pairing(&NSClass::delta(10)).unwrap(), rat(-1, 1));
        assert!(dual_pairing(&NSClass::new(10, 2, 2)).is_err());
    }

    fn ns(t: u64) -> impl Strategy<Value = NSClass> {
        (-60i64..60, -60i64..60).prop_map(move |(x, y)| NSClass::new(t, x, y))
    }

    fn h4(t: u64) -> impl Strategy<Value = H4Class> {
        prop::array::uniform4((-40i64..40, 1i64..9)).prop_map(move |v| c4(t, v))
    }

    proptest! {
        #[test]
        fn fujiki_consistency(t in 1u64..300, x in -200i64..200, y in -200i64..200) {
            let c = NSClass::new(t, x, y);
            let c2 = cup_h2(&c, &c).unwrap();
            prop_assert_eq!(rat_int(&fujiki_quartic(&c)), pair_h4(&c2, &c2).unwrap());
        }

        #[test]
        fn products_are_integral(c1 in ns(13), c2 in ns(13)) {
            prop_assert!(to_integral(&cup_h2(&c1, &c2).unwrap()).is_some());
        }

        #[test]
        fn round_trip(c in h4(10)) {
            if let Some(a) = to_integral(&c) {
                prop_assert_eq!(from_integral(&a), c);
            }
        }

        #[test]
        fn pairing_symmetric(a in h4(17), b in h4(17)) {
            prop_assert_eq!(pair_h4(&a, &b).unwrap(), pair_h4(&b, &a).unwrap());
        }

        #[test]
        fn involution_is_isometry(a in h4(13), b in h4(13)) {
            let i = H4Involution::new(13).unwrap();
            let (ia, ib) = (i.apply(&a).unwrap(), i.apply(&b).unwrap());
            prop_assert_eq!(pair_h4(&ia, &ib).unwrap(), pair_h4(&a, &b).unwrap());
        }

        #[test]
        fn h6_reduction_respects_pairing(c in h4(11), d in ns(11), e in ns(11)) {
            // ∫ c·d·e computed in H⁶ and in H⁴
            let lhs = pair_h6_h2(&reduce_to_h6(&c, &d).unwrap(), &e).unwrap();
            let rhs = pair_h4(&c, &cup_h2(&d, &e).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
