//! Irreducibility of `D₁ ∩ D₂` for general `D₁, D₂ ∈ |D|`.
//!
//! A splitting `D² = A + B` into ι-invariant effective classes must satisfy
//! four families of necessary conditions on the integral coordinates
//! `A = (x, y, z, w)`:
//!
//! * `0 ≤ 6tx + 3ty + z + 10w ≤ 6tb² − 2a²` (`⟨A, h²⟩` between 0 and `⟨D², h²⟩`),
//! * `0 ≤ 2tx + ty + z + 10w ≤ 2` (the volume functional),
//! * `0 < (4t + 8t²b²)x + (2t + 4t²b² − 4abt)y + (1 + tb²)z + 20w < 12`
//!   (`⟨A, D²⟩`),
//! * `8tdx + 4(td − c)y + dz = 0` (ι-invariance).
//!
//! With `k = 2x + y`, `m = z + 10w` and `u = −4abty + a²z` these become
//! `m ∈ {−tk, −tk + 1, −tk + 2}` and `u = −(2t + 4t²b²)k − 2m + h` with
//! `1 ≤ h ≤ 11`, a square linear system for each `(k, m, u)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::linalg::{
    integral_point_on_line, primitive_direction, solve_affine, solve_unique, RatMatrix,
};
use crate::arith::modular::{crt, solve_linear_congruence, Residue};
use crate::arith::{ceil_div, common_denominator, floor_div, rat, rat_int, to_integer, Rational};
use crate::cohomology::{
    cup_h2, from_integral, to_integral, H4Class, H4IntegralCoords, H4Involution,
};
use crate::par::Exec;
use crate::pell::{self, PellSolution};
use crate::picard::{self, cone_slopes, NSClass};
use crate::serde_exact;
use crate::{Error, Result};

/// Pell data of an admissible `t`: `a² − tb² = −1` and `c² − td² = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub t: u64,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    tb: BigInt,
}

impl Problem {
    pub fn new(t: u64) -> Result<Self> {
        let dcls = picard::polarisation(t)?;
        let tb = BigInt::from(t);
        let PellSolution { x: c, y: d, .. } = pell::fundamental_unit(&tb)?;
        let (a, b) = (dcls.yd, dcls.xh);
        if &a * &a != &tb * &b * &b - 1 {
            return Err(Error::Inconsistent(format!(
                "a² = tb² − 1 fails for t={t}, (a, b) = ({a}, {b})"
            )));
        }
        Ok(Self { t, a, b, c, d, tb })
    }

    pub fn polarisation(&self) -> NSClass {
        NSClass::new(self.t, self.b.clone(), self.a.clone())
    }

    /// Integral coordinates of `D²`: `(b² − 2ab, 4ab, 8a², −a²)`.
    pub fn d_squared(&self) -> H4IntegralCoords {
        let d = self.polarisation();
        to_integral(&cup_h2(&d, &d).expect("same t")).expect("products are integral")
    }

    /// Upper bound `6tb² − 2a²` of the first family.
    pub fn h2_bound(&self) -> BigInt {
        6 * &self.tb * &self.b * &self.b - 2 * &self.a * &self.a
    }

    pub fn values(&self, alpha: &[BigInt; 4]) -> ConstraintValues {
        let (t, a, b, c, d) = (&self.tb, &self.a, &self.b, &self.c, &self.d);
        let [x, y, z, w] = alpha;
        let tb2 = t * b * b;
        ConstraintValues {
            h2: 6 * t * x + 3 * t * y + z + 10 * w,
            sigma: 2 * t * x + t * y + z + 10 * w,
            d2: (4 * t + 8 * t * &tb2) * x
                + (2 * t + 4 * t * &tb2 - 4 * a * b * t) * y
                + (BigInt::one() + &tb2) * z
                + 20 * w,
            fixed: 8 * t * d * x + 4 * (t * d - c) * y + d * z,
        }
    }

    pub fn satisfies(&self, v: &ConstraintValues) -> bool {
        self.effective_window(v) && v.fixed.is_zero()
    }

    /// The first three families, which any effective class must satisfy.
    pub fn effective_window(&self, v: &ConstraintValues) -> bool {
        let zero = BigInt::zero();
        zero <= v.h2
            && v.h2 <= self.h2_bound()
            && zero <= v.sigma
            && v.sigma <= BigInt::from(2)
            && zero < v.d2
            && v.d2 < BigInt::from(12)
    }

    /// The matrix of `(2x + y, z + 10w, −4abty + a²z, 8tdx + 4(td − c)y + dz)`.
    fn system(&self) -> RatMatrix {
        let (t, a, b, c, d) = (&self.tb, &self.a, &self.b, &self.c, &self.d);
        let r = |v: BigInt| rat_int(&v);
        vec![
            vec![rat(2, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(10, 1)],
            vec![rat(0, 1), r(-4 * a * b * t), r(a * a), rat(0, 1)],
            vec![r(8 * t * d), r(4 * (t * d - c)), r(d.clone()), rat(0, 1)],
        ]
    }

    /// Right-hand side for `(k, m = −tk + j, u = −(2t + 4t²b²)k − 2m + h)`.
    fn rhs(&self, k: &BigInt, j: i64, h: i64) -> Vec<Rational> {
        let t = &self.tb;
        let m: BigInt = -(t * k) + j;
        let slope = BigInt::from(2) * t + BigInt::from(4) * t * t * &self.b * &self.b;
        let u = -(slope * k) - BigInt::from(2) * &m + h;
        vec![rat_int(k), rat_int(&m), rat_int(&u), rat(0, 1)]
    }

    /// Largest `k` to scan.
    pub fn k_max(&self, full_range: bool) -> BigInt {
        let b2 = &self.b * &self.b;
        if full_range {
            2 * b2
        } else {
            b2
        }
    }

    fn witness(&self, k: BigInt, alpha: [BigInt; 4]) -> Result<Option<DecompositionWitness>> {
        let va = self.values(&alpha);
        if !self.satisfies(&va) {
            return Ok(None);
        }
        let d2 = self.d_squared();
        let beta: [BigInt; 4] = std::array::from_fn(|i| &d2.alpha[i] - &alpha[i]);
        let vb = self.values(&beta);
        let iota = H4Involution::new(self.t)?;
        let a = H4IntegralCoords::new(self.t, alpha);
        let b = H4IntegralCoords::new(self.t, beta);
        let (ca, cb) = (from_integral(&a), from_integral(&b));
        let checks = WitnessChecks {
            complement_satisfies: self.satisfies(&vb),
            a_fixed: iota.apply(&ca)? == ca,
            b_fixed: iota.apply(&cb)? == cb,
            sums_to_d_squared: ca.add(&cb)? == from_integral(&d2),
            a_values: va,
            b_values: vb,
        };
        Ok(Some(DecompositionWitness {
            t: self.t,
            k,
            a,
            b,
            checks,
        }))
    }
}

/// The four constraint expressions evaluated at one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintValues {
    /// `6tx + 3ty + z + 10w = ⟨A, h²⟩ / 2t`
    #[serde(with = "serde_exact::bigint")]
    pub h2: BigInt,
    /// `2tx + ty + z + 10w`
    #[serde(with = "serde_exact::bigint")]
    pub sigma: BigInt,
    /// `⟨A, D²⟩`
    #[serde(with = "serde_exact::bigint")]
    pub d2: BigInt,
    /// `8tdx + 4(td − c)y + dz`
    #[serde(with = "serde_exact::bigint")]
    pub fixed: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub a_values: ConstraintValues,
    pub b_values: ConstraintValues,
    pub complement_satisfies: bool,
    pub a_fixed: bool,
    pub b_fixed: bool,
    pub sums_to_d_squared: bool,
}

impl WitnessChecks {
    pub fn all(&self) -> bool {
        self.complement_satisfies && self.a_fixed && self.b_fixed && self.sums_to_d_squared
    }
}

/// A candidate splitting `D² = A + B` into invariant classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionWitness {
    pub t: u64,
    /// `2x + y` for `A = (x, y, z, w)`.
    #[serde(with = "serde_exact::bigint")]
    pub k: BigInt,
    #[serde(rename = "A")]
    pub a: H4IntegralCoords,
    #[serde(rename = "B")]
    pub b: H4IntegralCoords,
    pub checks: WitnessChecks,
}

/// Candidates above this count in one residue class are refused.
const MAX_CANDIDATES: u64 = 1 << 24;

/// All decompositions with `0 ≤ k ≤ b²` (or `2b²` with `full_range`).
///
/// For fixed `(j, h)` the solution is affine in `k`, so integrality is a
/// congruence on `k`; only the members of that residue class inside the
/// admissible interval are solved.
pub fn search_decompositions(t: u64, full_range: bool) -> Result<Vec<DecompositionWitness>> {
    let p = Problem::new(t)?;
    let m = p.system();
    let k_max = p.k_max(full_range);
    let two_t = 2 * &p.tb;
    let mut out = Vec::new();
    for j in 0..=2i64 {
        // 0 ≤ 2tk + j ≤ 6tb² − 2a²
        let lo = ceil_div(&BigInt::from(-j), &two_t).max(BigInt::zero());
        let hi = floor_div(&(p.h2_bound() - j), &two_t).min(k_max.clone());
        if lo > hi {
            continue;
        }
        for h in 1..=11i64 {
            let r0 = p.rhs(&BigInt::zero(), j, h);
            let r1: Vec<Rational> = p
                .rhs(&BigInt::one(), j, h)
                .iter()
                .zip(&r0)
                .map(|(x, y)| x - y)
                .collect();
            let (Some(s0), Some(s1)) = (solve_unique(&m, &r0), solve_unique(&m, &r1)) else {
                return Err(Error::Degenerate(format!(
                    "singular search system for t={t}"
                )));
            };
            let mut class = Some(Residue::all());
            for (a0, a1) in s0.iter().zip(&s1) {
                let den = common_denominator([a0, a1]);
                let n0 = to_integer(&(a0 * rat_int(&den))).expect("cleared");
                let n1 = to_integer(&(a1 * rat_int(&den))).expect("cleared");
                class = class.and_then(|c| {
                    solve_linear_congruence(&n1, &-n0, &den).and_then(|r| crt(&c, &r))
                });
            }
            let Some(class) = class else { continue };
            let first = class.first_at_least(&lo);
            if first > hi {
                continue;
            }
            let count = (&hi - &first) / &class.m + 1;
            if count > BigInt::from(MAX_CANDIDATES) {
                return Err(Error::Degenerate(format!(
                    "{count} candidates for t={t}, j={j}, h={h}"
                )));
            }
            let mut k = first;
            while k <= hi {
                let kr = rat_int(&k);
                let alpha: Vec<BigInt> = s0
                    .iter()
                    .zip(&s1)
                    .map(|(x, y)| to_integer(&(x + &kr * y)).expect("k in residue class"))
                    .collect();
                let alpha: [BigInt; 4] = alpha.try_into().expect("four coordinates");
                if let Some(w) = p.witness(k.clone(), alpha)? {
                    out.push(w);
                }
                k += &class.m;
            }
        }
    }
    out.sort_by(|x, y| (&x.k, &x.a.alpha).cmp(&(&y.k, &y.a.alpha)));
    Ok(out)
}

/// Largest `k_max` accepted by [`enumerate_decompositions`].
pub const ENUMERATION_LIMIT: u64 = 1 << 22;

/// The same search done literally: one exact 4×4 solve per `(k, m, u)`.
/// Work is split over `k`.
pub fn enumerate_decompositions(
    t: u64,
    full_range: bool,
    exec: Exec,
) -> Result<Vec<DecompositionWitness>> {
    let p = Problem::new(t)?;
    let k_max_big = p.k_max(full_range);
    let k_max: u64 = (&k_max_big)
        .try_into()
        .ok()
        .filter(|&k| k <= ENUMERATION_LIMIT)
        .ok_or_else(|| {
            Error::Parameter(format!(
                "k range up to {k_max_big} is too large to enumerate"
            ))
        })?;
    let m = p.system();
    let found: Vec<Result<Vec<DecompositionWitness>>> = exec.map((0..=k_max).collect(), |k| {
        let k = BigInt::from(k);
        let mut out = Vec::new();
        for j in 0..=2 {
            for h in 1..=11 {
                let s = solve_unique(&m, &p.rhs(&k, j, h)).ok_or_else(|| {
                    Error::Degenerate(format!("singular search system for t={t}"))
                })?;
                let ints: Option<Vec<BigInt>> = s.iter().map(to_integer).collect();
                if let Some(v) = ints {
                    if let Some(w) = p.witness(k.clone(), v.try_into().expect("four"))? {
                        out.push(w);
                    }
                }
            }
        }
        Ok(out)
    });
    let mut out = Vec::new();
    for r in found {
        out.extend(r?);
    }
    out.sort_by(|x, y| (&x.k, &x.a.alpha).cmp(&(&y.k, &y.a.alpha)));
    Ok(out)
}

/// The swap system `ι*A = D² − A` for `A = (x, y, z, w)` in integral
/// coordinates, which would split `D²` into two classes exchanged by `ι`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapVerdict {
    pub t: u64,
    /// Dimension of the rational solution set.
    pub solution_dimension: usize,
    #[serde(with = "serde_exact::rational_vec")]
    pub particular: Vec<Rational>,
    #[serde(with = "serde_exact::rational_vec")]
    pub direction: Vec<Rational>,
    /// `(b²/2 − ab, 2ab, 4a², −a²/2)`.
    #[serde(with = "serde_exact::rational_vec")]
    pub closed_form: Vec<Rational>,
    pub closed_form_solves: bool,
    /// An integral solution, if any.
    pub integral_solution: Option<Vec<String>>,
    /// Primitive step between consecutive integral solutions.
    pub integral_step: Option<Vec<String>>,
    /// Integral solutions `A` with `A` and `D² − A` inside the effectivity
    /// windows.
    pub effective_solutions: Vec<Vec<String>>,
}

impl SwapVerdict {
    /// No pair of effective classes is exchanged by `ι`.
    pub fn obstructed(&self) -> bool {
        self.closed_form_solves && self.effective_solutions.is_empty()
    }
}

/// Integral points `p + n·k` with `A` and `D² − A` in the effectivity windows.
fn effective_points(p: &Problem, p0: &[BigInt], k: &[BigInt]) -> Result<Vec<[BigInt; 4]>> {
    let at = |n: &BigInt| -> [BigInt; 4] { std::array::from_fn(|i| &p0[i] + n * &k[i]) };
    let d2 = p.d_squared().alpha;
    let admissible = |a: &[BigInt; 4]| {
        let b: [BigInt; 4] = std::array::from_fn(|i| &d2[i] - &a[i]);
        p.effective_window(&p.values(a)) && p.effective_window(&p.values(&b))
    };
    let h0 = p.values(&at(&BigInt::zero())).h2;
    let hk = p.values(&std::array::from_fn(|i| k[i].clone())).h2;
    if hk.is_zero() {
        return if admissible(&at(&BigInt::zero())) {
            Err(Error::Degenerate(format!(
                "infinitely many effective swap solutions for t={}",
                p.t
            )))
        } else {
            Ok(Vec::new())
        };
    }
    // 0 ≤ h0 + n·hk ≤ bound
    let (lo_num, hi_num) = (-&h0, p.h2_bound() - &h0);
    let (lo, hi) = if hk > BigInt::zero() {
        (ceil_div(&lo_num, &hk), floor_div(&hi_num, &hk))
    } else {
        let m = -&hk;
        (ceil_div(&-hi_num, &m), floor_div(&-lo_num, &m))
    };
    if &hi - &lo > BigInt::from(ENUMERATION_LIMIT) {
        return Err(Error::Degenerate(format!(
            "swap window too wide for t={}",
            p.t
        )));
    }
    let mut out = Vec::new();
    let mut n = lo;
    while n <= hi {
        let a = at(&n);
        if admissible(&a) {
            out.push(a);
        }
        n += 1;
    }
    Ok(out)
}

pub fn swap_system_check(t: u64) -> Result<SwapVerdict> {
    let p = Problem::new(t)?;
    let iota = H4Involution::new(t)?.matrix();
    // columns: images of the integral basis under ι* + 1
    let basis: Vec<H4Class> = (0..4)
        .map(|i| {
            let mut e = [0i64; 4];
            e[i] = 1;
            from_integral(&H4IntegralCoords::from_ints(t, e))
        })
        .collect();
    let mut mat: RatMatrix = vec![vec![rat(0, 1); 4]; 4];
    for (col, e) in basis.iter().enumerate() {
        for (row, out) in mat.iter_mut().enumerate() {
            let image: Rational = (0..4).map(|l| &iota[row][l] * &e.coeffs[l]).sum();
            out[col] = image + &e.coeffs[row];
        }
    }
    let d = p.polarisation();
    let d2 = cup_h2(&d, &d)?;
    let sol = solve_affine(&mat, &d2.coeffs)
        .ok_or_else(|| Error::Inconsistent(format!("the swap system is inconsistent for t={t}")))?;
    let (a, b) = (rat_int(&p.a), rat_int(&p.b));
    let closed_form = vec![
        &b * &b / rat(2, 1) - &a * &b,
        rat(2, 1) * &a * &b,
        rat(4, 1) * &a * &a,
        -(&a * &a) / rat(2, 1),
    ];
    let closed_form_solves = (0..4).all(|row| {
        let lhs: Rational = (0..4).map(|c| &mat[row][c] * &closed_form[c]).sum();
        lhs == d2.coeffs[row]
    });
    let direction = match sol.kernel.as_slice() {
        [] => vec![rat(0, 1); 4],
        [k] => k.clone(),
        more => {
            return Err(Error::Degenerate(format!(
                "the swap system has a {}-dimensional solution set for t={t}",
                more.len()
            )))
        }
    };
    let strings = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let integral = integral_point_on_line(&sol.particular, &direction);
    let step = (!sol.kernel.is_empty()).then(|| primitive_direction(&direction));
    let effective_solutions = match (&integral, &step) {
        (Some(p0), Some(k)) => effective_points(&p, p0, k)?,
        (Some(p0), None) => {
            let a: [BigInt; 4] = p0.clone().try_into().expect("four");
            let b: [BigInt; 4] = std::array::from_fn(|i| &p.d_squared().alpha[i] - &a[i]);
            let ok = p.effective_window(&p.values(&a)) && p.effective_window(&p.values(&b));
            if ok {
                vec![a]
            } else {
                Vec::new()
            }
        }
        (None, _) => Vec::new(),
    };
    Ok(SwapVerdict {
        t,
        solution_dimension: sol.kernel.len(),
        particular: sol.particular,
        direction,
        closed_form,
        closed_form_solves,
        integral_solution: integral.as_deref().map(strings),
        integral_step: step.as_deref().map(strings),
        effective_solutions: effective_solutions.iter().map(|a| strings(a)).collect(),
    })
}

/// The checks ruling out non-reduced or reducible members of `|D|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub t: u64,
    /// `x² − t·y² = 2` solvable, i.e. `(−4)`-classes exist.
    pub minus4_classes_exist: bool,
    /// The least `(−4)`-class, when there is one.
    pub minus4_class: Option<NSClass>,
    /// No `(−4)`-class, or the least one is not pseudoeffective.
    pub minus4_obstructed: bool,
    /// `a + 1 > (a² + tb²)/2a`.
    pub slope_inequality: bool,
    /// `D − δ` lies outside the pseudoeffective cone.
    pub d_minus_delta_not_pseudoeffective: bool,
    /// `t` is not a square, so `q` has no isotropic classes.
    pub no_isotropic_classes: bool,
}

impl ObstructionVerdict {
    pub fn holds(&self) -> bool {
        self.minus4_obstructed
            && self.slope_inequality
            && self.d_minus_delta_not_pseudoeffective
            && self.no_isotropic_classes
    }
}

pub fn prime_divisor_obstructions(t: u64) -> Result<ObstructionVerdict> {
    let p = Problem::new(t)?;
    let slopes = cone_slopes(t)?;
    let two = BigInt::from(2);
    let minus4 = pell::solve_pell_type(&p.tb, &two)?;
    let minus4_class = minus4
        .minimal_positive
        .as_ref()
        .map(|s| NSClass::new(t, s.y.clone(), s.x.clone()));
    let minus4_obstructed = match &minus4_class {
        None => true,
        Some(c) => c.square() == BigInt::from(-4) && !slopes.is_pseudoeffective(c),
    };
    let (a, b) = (rat_int(&p.a), rat_int(&p.b));
    let slope_inequality = &a + rat(1, 1) > (&a * &a + rat_int(&p.tb) * &b * &b) / (rat(2, 1) * &a);
    let d_minus_delta = NSClass::new(t, p.b.clone(), &p.a + 1);
    Ok(ObstructionVerdict {
        t,
        minus4_classes_exist: minus4_class.is_some(),
        minus4_class,
        minus4_obstructed,
        slope_inequality,
        d_minus_delta_not_pseudoeffective: !slopes.is_pseudoeffective(&d_minus_delta),
        no_isotropic_classes: crate::arith::exact_sqrt(&p.tb).is_none(),
    })
}

/// Pull-backs of the Schubert classes `σ₁,₁`, `σ₂` and of the surface of
/// bitangents, for the quartic case `t = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertClasses {
    pub sigma11: H4Class,
    pub sigma2: H4Class,
    pub bitangent: H4Class,
}

pub fn schubert_classes(t: u64) -> Result<SchubertClasses> {
    if t != 2 {
        return Err(Error::Domain(format!(
            "Schubert classes are defined for t = 2 only, got {t}"
        )));
    }
    let sigma11 = H4Class::new(2, [rat(1, 2), rat(-1, 2), rat(-1, 4), rat(-1, 4)]);
    let sigma2 = H4Class::new(2, [rat(1, 2), rat(-3, 2), rat(5, 4), rat(1, 4)]);
    let bitangent = sigma11.scale(&rat(28, 1)).add(&sigma2.scale(&rat(12, 1)))?;
    Ok(SchubertClasses {
        sigma11,
        sigma2,
        bitangent,
    })
}
