//! The class of the fixed surface `F` of the anti-symplectic involution.
//!
//! `[F] = x·h² + y·hδ + z·δ² + w·Q` is cut out by four conditions:
//! `F` is Lagrangian (`σ(F) = 0`), `ι*[F] = [F]`, `⟨[F], D²⟩ = (D|_F)²`
//! with `(D|_F)² ∈ {8, 24, 40}`, and `⟨[F], [F]⟩ = c₂(F) = 192`. The three
//! linear conditions leave a line, on which the quadratic one has at most two
//! points; integrality then singles out `[F] = 5D² − Q`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::linalg::{rank, solve_affine};
use crate::arith::{rat, rat_int, rational_sqrt, Rational};
use crate::cohomology::{cup_h2, pair_h4, to_integral, H4Class, H4IntegralCoords, H4Involution};
use crate::picard::{self, NSClass};
use crate::serde_exact;
use crate::{Error, Result};

/// `c₂(F)` of the fixed surface.
pub const C2_F: i64 = 192;

/// Branch values `v` of `⟨[F], D²⟩ / 4`, in evaluation order.
pub const BRANCHES: [i64; 3] = [2, 6, 10];

/// `dim H⁰(W, D_W) = 7/2 + (D|_F)²/16`, when that is an integer in `0..=6`.
pub fn dim_h0_from_square(dfsq: i64) -> Option<i64> {
    let n = dfsq + 56;
    (n % 16 == 0 && (0..=6).contains(&(n / 16))).then_some(n / 16)
}

/// One value of `v` and what the quadratic condition made of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub v: i64,
    /// `(D|_F)² = 4v`.
    pub d_f_square: i64,
    pub dim_h0: Option<i64>,
    /// Discriminant of the quadratic in the line parameter.
    #[serde(with = "serde_exact::rational")]
    pub discriminant: Rational,
    /// `w`-coordinates of the rational roots.
    #[serde(with = "serde_exact::rational_vec")]
    pub rational_w: Vec<Rational>,
    /// Roots that lie in `H^{2,2}(X, Z)`.
    pub integral: Vec<H4Class>,
    pub rejected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocusReport {
    pub t: u64,
    #[serde(rename = "F")]
    pub f: H4Class,
    #[serde(rename = "F_integral")]
    pub f_integral: H4IntegralCoords,
    pub dim_h0: i64,
    pub branch_log: Vec<BranchRecord>,
}

/// The linear rows `σ`, `(ι* − 1)` in the `h²` coordinate, and `⟨·, D²⟩`.
fn linear_rows(t: u64, iota: &H4Involution, d2: &H4Class) -> Result<Vec<Vec<Rational>>> {
    let sigma = vec![rat(2 * t as i64, 1), rat(0, 1), rat(-2, 1), rat(10, 1)];
    let m = iota.matrix();
    let fixed: Vec<Rational> = (0..4)
        .map(|j| &m[0][j] - if j == 0 { rat(1, 1) } else { rat(0, 1) })
        .collect();
    let pair: Vec<Rational> = (0..4)
        .map(|j| pair_h4(&H4Class::basis(t, j), d2))
        .collect::<Result<_>>()?;
    Ok(vec![sigma, fixed, pair])
}

/// Rank of `ι* − 1` on `H⁴`. Fixedness is a single linear condition exactly
/// when this is 1.
pub fn fixedness_rank(iota: &H4Involution) -> usize {
    let m = iota.matrix();
    let rows: Vec<Vec<Rational>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| &m[i][j] - if i == j { rat(1, 1) } else { rat(0, 1) })
                .collect()
        })
        .collect();
    rank(&rows)
}

/// Exact rational roots of `a·λ² + b·λ + c`; returns the discriminant too.
fn rational_roots(a: &Rational, b: &Rational, c: &Rational) -> (Rational, Vec<Rational>) {
    if a.is_zero() {
        let disc = b * b;
        if b.is_zero() {
            return (disc, Vec::new());
        }
        return (disc, vec![-c / b]);
    }
    let disc = b * b - rat(4, 1) * a * c;
    if disc.is_negative() {
        return (disc, Vec::new());
    }
    let Some(r) = rational_sqrt(&disc) else {
        return (disc, Vec::new());
    };
    let two_a = rat(2, 1) * a;
    let mut roots = vec![(-b - &r) / &two_a, (-b + &r) / &two_a];
    roots.sort();
    roots.dedup();
    (disc, roots)
}

fn point(p: &[Rational], k: &[Rational], lam: &Rational, t: u64) -> H4Class {
    H4Class::new(t, std::array::from_fn(|i| &p[i] + lam * &k[i]))
}

/// Solves the four conditions for each branch `v ∈ {2, 6, 10}` and returns
/// the unique integral solution.
pub fn solve_fixed_class(t: u64) -> Result<FixedLocusReport> {
    let d = picard::polarisation(t)?;
    let iota = H4Involution::new(t)?;
    solve_with(t, &d, &iota)
}

pub(crate) fn solve_with(t: u64, d: &NSClass, iota: &H4Involution) -> Result<FixedLocusReport> {
    let d2 = cup_h2(d, d)?;
    let rows = linear_rows(t, iota, &d2)?;
    if rank(&rows) < 3 {
        return Err(Error::Degenerate(format!(
            "the linear conditions on [F] have rank {} for t={t}",
            rank(&rows)
        )));
    }
    let mut branch_log = Vec::new();
    let mut admissible: Vec<(i64, H4Class)> = Vec::new();
    for v in BRANCHES {
        let rhs = vec![rat(0, 1), rat(0, 1), rat(4 * v, 1)];
        let sol = solve_affine(&rows, &rhs).ok_or_else(|| {
            Error::Inconsistent(format!("linear conditions inconsistent for t={t}, v={v}"))
        })?;
        let (p, k) = (&sol.particular, &sol.kernel[0]);
        let pc = H4Class::new(t, std::array::from_fn(|i| p[i].clone()));
        let kc = H4Class::new(t, std::array::from_fn(|i| k[i].clone()));
        // ⟨P + λK, P + λK⟩ − 192
        let a = pair_h4(&kc, &kc)?;
        let b = rat(2, 1) * pair_h4(&pc, &kc)?;
        let c = pair_h4(&pc, &pc)? - rat(C2_F, 1);
        let (discriminant, roots) = rational_roots(&a, &b, &c);
        let mut rec = BranchRecord {
            v,
            d_f_square: 4 * v,
            dim_h0: dim_h0_from_square(4 * v),
            discriminant,
            rational_w: Vec::new(),
            integral: Vec::new(),
            rejected: Vec::new(),
        };
        if roots.is_empty() {
            rec.rejected.push("no rational root".into());
        }
        for lam in roots {
            let f = point(p, k, &lam, t);
            rec.rational_w.push(f.coeffs[3].clone());
            if to_integral(&f).is_some() {
                rec.integral.push(f.clone());
                admissible.push((v, f));
            } else {
                rec.rejected.push(format!("{f} is not integral"));
            }
        }
        rec.rational_w.sort();
        branch_log.push(rec);
    }
    match admissible.as_slice() {
        [(v, f)] => Ok(FixedLocusReport {
            t,
            f: f.clone(),
            f_integral: to_integral(f).expect("filtered"),
            dim_h0: dim_h0_from_square(4 * v).ok_or_else(|| {
                Error::Inconsistent(format!("(D|_F)² = {} gives no dimension", 4 * v))
            })?,
            branch_log,
        }),
        found => Err(Error::Inconsistent(format!(
            "expected one integral fixed class for t={t}, found {}",
            found.len()
        ))),
    }
}

/// `5D² − Q`.
pub fn expected_class(d: &NSClass) -> Result<H4Class> {
    cup_h2(d, d)?.scale(&rat(5, 1)).sub(&H4Class::q_dual(d.t))
}

/// `3t²x² − ty² + 3z² + 23w² − 2txz + 10txw − 10zw`, which is `⟨c, c⟩ / 4`.
pub fn quadratic_form_value(c: &H4Class) -> Rational {
    let t = rat_int(&BigInt::from(c.t));
    let [x, y, z, w] = &c.coeffs;
    rat(3, 1) * &t * &t * x * x - &t * y * y + rat(3, 1) * z * z + rat(23, 1) * w * w
        - rat(2, 1) * &t * x * z
        + rat(10, 1) * &t * x * w
        - rat(10, 1) * z * w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::sigma_functional;

    #[test]
    fn dimensions() {
        assert_eq!(dim_h0_from_square(40), Some(6));
        assert_eq!(dim_h0_from_square(-56), Some(0));
        assert_eq!(dim_h0_from_square(8), Some(4));
        assert_eq!(dim_h0_from_square(24), Some(5));
        assert_eq!(dim_h0_from_square(41), None);
        assert_eq!(dim_h0_from_square(56), None);
    }

    #[test]
    fn spec_classes() {
        let r = solve_fixed_class(10).unwrap();
        assert_eq!(r.f, H4Class::from_ints(10, [5, -30, 45, -1]));
        assert_eq!(
            r.f_integral,
            H4IntegralCoords::from_ints(10, [-25, 60, 360, -46])
        );
        assert_eq!(r.dim_h0, 6);
        let r = solve_fixed_class(13).unwrap();
        assert_eq!(r.f, H4Class::from_ints(13, [125, -900, 1620, -1]));
        assert!(matches!(solve_fixed_class(3), Err(Error::Domain(_))));
    }

    #[test]
    fn branches() {
        for t in [2, 10, 13, 17] {
            let r = solve_fixed_class(t).unwrap();
            let log = &r.branch_log;
            assert_eq!(log.iter().map(|b| b.v).collect::<Vec<_>>(), vec![2, 6, 10]);
            assert!(log[0].rational_w.is_empty() && log[1].rational_w.is_empty());
            assert_eq!(log[2].rational_w, vec![rat(-13, 12), rat(-1, 1)]);
            assert_eq!(log[2].integral.len(), 1);
        }
    }

    #[test]
    fn class_properties() {
        let d = picard::polarisation(10).unwrap();
        let r = solve_fixed_class(10).unwrap();
        assert_eq!(r.f, expected_class(&d).unwrap());
        assert_eq!(pair_h4(&r.f, &r.f).unwrap(), rat(192, 1));
        assert_eq!(quadratic_form_value(&r.f), rat(48, 1));
        assert_eq!(pair_h4(&r.f, &cup_h2(&d, &d).unwrap()).unwrap(), rat(40, 1));
        assert_eq!(sigma_functional(&r.f), rat(0, 1));
        let iota = H4Involution::new(10).unwrap();
        assert_eq!(iota.apply(&r.f).unwrap(), r.f);
        assert_eq!(fixedness_rank(&iota), 1);
    }
}
