//! Exact Gaussian elimination over `Q` and integer determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{common_denominator, rat_int, to_integer, Rational};

pub type RatMatrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (v, p) in m[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Solution set `particular + span(kernel)` of `A·x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

/// Solves `A·x = b`; `None` when the system is inconsistent.
pub fn solve_affine(a: &[Vec<Rational>], b: &[Rational]) -> Option<AffineSolution> {
    assert_eq!(a.len(), b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut particular = vec![Rational::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        particular[p] = aug[i][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -aug[i][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

/// The unique solution of a square system, or `None` if it is singular.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let sol = solve_affine(a, b)?;
    sol.kernel.is_empty().then_some(sol.particular)
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Scales a nonzero rational vector to a primitive integer vector with the
/// same direction.
pub fn primitive_direction(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * rat_int(&den)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    assert!(!g.is_zero(), "zero direction");
    ints.into_iter().map(|x| x / &g).collect()
}

/// An integral point on the line `p + λ·dir`, if one exists.
pub fn integral_point_on_line(p: &[Rational], dir: &[Rational]) -> Option<Vec<BigInt>> {
    if dir.iter().all(Zero::is_zero) {
        return p.iter().map(to_integer).collect();
    }
    let k = primitive_direction(dir);
    // Bezout coefficients: Σ e_i k_i = 1
    let mut e = vec![BigInt::zero(); k.len()];
    let mut g = BigInt::zero();
    for (i, ki) in k.iter().enumerate() {
        let eg = g.extended_gcd(ki);
        for ej in e.iter_mut().take(i) {
            *ej *= &eg.x;
        }
        e[i] = eg.y;
        g = eg.gcd;
    }
    if g.is_negative() {
        e.iter_mut().for_each(|x| *x = -&*x);
    }
    // the parameter μ of any integral point p + μk satisfies μ ≡ −Σ e_i p_i (mod 1)
    let mu: Rational = -e
        .iter()
        .zip(p)
        .map(|(ei, pi)| rat_int(ei) * pi)
        .fold(Rational::zero(), |acc, x| acc + x);
    p.iter()
        .zip(&k)
        .map(|(pi, ki)| to_integer(&(pi + &mu * rat_int(ki))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn rm(rows: &[&[i64]]) -> RatMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
            .collect()
    }

    #[test]
    fn unique_solution() {
        let a = rm(&[&[2, 1], &[1, 3]]);
        let x = solve_unique(&a, &[rat(3, 1), rat(5, 1)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        let sing = rm(&[&[1, 2], &[2, 4]]);
        assert!(solve_unique(&sing, &[rat(1, 1), rat(2, 1)]).is_none());
        assert!(solve_affine(&sing, &[rat(1, 1), rat(3, 1)]).is_none());
    }

    #[test]
    fn affine_line() {
        let a = rm(&[&[1, 0, -1], &[0, 1, 2]]);
        let s = solve_affine(&a, &[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(s.kernel.len(), 1);
        for lam in -3..3 {
            let x: Vec<Rational> = s
                .particular
                .iter()
                .zip(&s.kernel[0])
                .map(|(p, k)| p + rat(lam, 1) * k)
                .collect();
            assert_eq!(&x[0] - &x[2], rat(1, 1));
            assert_eq!(&x[1] + rat(2, 1) * &x[2], rat(0, 1));
        }
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn determinants() {
        let m: Vec<Vec<BigInt>> = [[2, 1, 0], [0, 0, 1], [1, 3, 4]]
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        // 2(0−3) − 1(0−1) = −5
        assert_eq!(det_int(&m), int(-5));
        let z: Vec<Vec<BigInt>> = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(det_int(&z), int(0));
    }

    #[test]
    fn lattice_points_on_lines() {
        // (1/2, 0) + λ(1, 2): λ = 1/2 gives (1, 1)
        let p = vec![rat(1, 2), rat(0, 1)];
        let d = vec![rat(1, 1), rat(2, 1)];
        let q = integral_point_on_line(&p, &d).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!((&q[1] - int(2) * &q[0]), int(-1));
        // (1/2, 0) + λ(2, 4) hits (1, 1) at λ = 1/4
        assert!(integral_point_on_line(&p, &[rat(2, 1), rat(4, 1)]).is_some());
        // (1/2, 1/2) + λ(1, 1) hits (1, 1)
        assert!(integral_point_on_line(&[rat(1, 2), rat(1, 2)], &[rat(1, 1), rat(1, 1)]).is_some());
        // (1/2, 0) + λ(1, 1): x − y = 1/2 never integral
        assert!(integral_point_on_line(&p, &[rat(1, 1), rat(1, 1)]).is_none());
        // x = w, y = 1/2 − 3w
        assert!(
            integral_point_on_line(&[rat(0, 1), rat(1, 2)], &[rat(1, 1), rat(-3, 1)]).is_none()
        );
    }

    #[test]
    fn lattice_points_brute_force() {
        // compare with a search over λ ∈ (1/144)Z ∩ [0, 2), a full period
        for a in -3..4i64 {
            for b in 1..5i64 {
                for c in -3..4i64 {
                    let p = vec![rat(a, b), rat(c, 3)];
                    let d = vec![rat(2, 1), rat(a, 2)];
                    let brute = (0..288).any(|s| {
                        let lam = rat(s, 144);
                        p.iter()
                            .zip(&d)
                            .all(|(pi, di)| (pi + &lam * di).is_integer())
                    });
                    assert_eq!(
                        integral_point_on_line(&p, &d).is_some(),
                        brute,
                        "{a} {b} {c}"
                    );
                }
            }
        }
    }
}
