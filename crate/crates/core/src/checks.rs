//! The invariant suite run by `hilbsq check`.
//!
//! Every check has a stable name; a failing check carries a human-readable
//! detail. Global checks run over all `t ≤ t_max`, per-degree checks over the
//! admissible ones.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rat, rat_int};
use crate::cohomology::{
    dual_pairing, fujiki_quartic, gram_h22, pair_h4, reduce_to_h6, sigma_functional, H4Class,
    H4Involution, H6Class, PairingConstants,
};
use crate::fixedlocus::{expected_class, solve_fixed_class};
use crate::irreducibility::{
    prime_divisor_obstructions, schubert_classes, search_decompositions, swap_system_check, Problem,
};
use crate::par::Exec;
use crate::pell;
use crate::picard::{self, bbf_pair, cone_slopes, divisibility, involution_matrix, NSClass};
use crate::{Error, Result};

/// Degrees up to which the automorphism criterion is compared with the
/// direct search for an ample class of square 2.
pub const AUT_EQUIVALENCE_LIMIT: u64 = 500;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub t: Option<u64>,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, t: Option<u64>, outcome: Outcome) -> Self {
        let (passed, detail) = match outcome {
            Ok(()) => (true, String::new()),
            Err(Failure(msg)) => (false, msg),
        };
        Self {
            name: name.to_string(),
            t,
            passed,
            detail,
        }
    }
}

/// Why a check failed: a violated identity or an error from the pipeline.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// `Ok(())` when `cond` holds, else the message.
fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(Failure(msg()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Intersection constants the Gram check is built from.
    pub pairing: PairingConstants,
    pub full_range: bool,
    pub exec: Exec,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            pairing: PairingConstants::STANDARD,
            full_range: false,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub t_max: u64,
    pub admissible: Vec<u64>,
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

/// The pairing built from `pairing` agrees with the closed-form Gram matrix,
/// whose determinant is `±84t³`.
fn gram_check(t: u64, pairing: &PairingConstants) -> Outcome {
    let g = gram_h22(t);
    let built = pairing.integral_gram(t);
    ensure(built == g.rational_matrix(), || {
        format!("pairing constants disagree with the Gram matrix at t={t}")
    })?;
    let tb = BigInt::from(t);
    ensure(g.det == BigInt::from(-84) * &tb * &tb * &tb, || {
        format!("det = {} at t={t}", g.det)
    })?;
    let q = H4Class::basis(t, 3);
    ensure(pairing.pair(&q, &q).ok() == Some(rat(92, 1)), || {
        "⟨Q, Q⟩ ≠ 92".into()
    })
}

fn global_checks(t_max: u64, opts: &CheckOptions) -> Vec<CheckResult> {
    let ts: Vec<u64> = (1..=t_max).collect();
    let gram: Outcome = opts
        .exec
        .map(ts, |t| gram_check(t, &opts.pairing))
        .into_iter()
        .collect();
    let aut_ts: Vec<u64> = (2..=t_max.min(AUT_EQUIVALENCE_LIMIT)).collect();
    let aut: Outcome = opts
        .exec
        .map(aut_ts, |t| -> Outcome {
            let criterion = picard::aut_is_nontrivial(t)?.nontrivial;
            let direct = picard::ample_square2_witness(t)?.is_some();
            ensure(criterion == direct, || {
                format!("criterion says {criterion}, direct search says {direct} at t={t}")
            })
        })
        .into_iter()
        .collect();
    vec![
        CheckResult::new("gram_discriminant", None, gram),
        CheckResult::new("aut_witness_equivalence", None, aut),
    ]
}

fn pell_structure(p: &Problem) -> Outcome {
    ensure(p.b.is_odd(), || format!("b = {} is even", p.b))?;
    let (a, b, t) = (&p.a, &p.b, &BigInt::from(p.t));
    ensure(
        p.c == a * a + t * b * b && p.d == BigInt::from(2) * a * b,
        || format!("(c, d) = ({}, {}) is not (a² + tb², 2ab)", p.c, p.d),
    )
}

fn polarisation(t: u64, d: &NSClass) -> Outcome {
    let slopes = cone_slopes(t)?;
    ensure(d.square() == BigInt::from(2), || {
        format!("q(D) = {}", d.square())
    })?;
    ensure(slopes.is_ample(d), || format!("{d} is not ample"))?;
    ensure(divisibility(d)?.is_one(), || "div(D) ≠ 1".into())?;
    ensure(slopes.mu == slopes.nu, || "μ ≠ ν".into())?;
    ensure(rat_int(&d.yd) / rat_int(&d.xh) < slopes.nu, || {
        "a/b ≥ ν".into()
    })
}

fn involution(t: u64, d: &NSClass) -> Outcome {
    let m = involution_matrix(t)?;
    ensure(m.compose(&m)?.is_identity(), || "ι*² ≠ 1".into())?;
    ensure(m.apply(d)? == *d, || "ι*D ≠ D".into())?;
    let (h, dl) = (NSClass::h(t), NSClass::delta(t));
    for (u, v) in [(&h, &h), (&h, &dl), (&dl, &dl)] {
        ensure(
            bbf_pair(&m.apply(u)?, &m.apply(v)?)? == bbf_pair(u, v)?,
            || "ι* is not an isometry".into(),
        )?;
    }
    let iota = H4Involution::new(t)?;
    for i in 0..4 {
        let e = H4Class::basis(t, i);
        ensure(iota.apply(&iota.apply(&e)?)? == e, || {
            "ι*² ≠ 1 on H⁴".into()
        })?;
    }
    Ok(())
}

fn h6_calculus(t: u64, d: &NSClass) -> Outcome {
    let tr = rat(t as i64, 1);
    let (h, dl) = (NSClass::h(t), NSClass::delta(t));
    let d2 = H4Class::basis(t, 2);
    // q∨ = (5/2)Q
    let q_dual = H4Class::q_dual(t).scale(&rat(5, 2));
    let cases = [
        (
            reduce_to_h6(&d2, &dl)?,
            H6Class::new(t, rat(0, 1), rat(-3, 1) / &tr),
            "δ³",
        ),
        (
            reduce_to_h6(&d2, &h)?,
            H6Class::new(t, rat(-1, 3) / &tr, rat(0, 1)),
            "hδ²",
        ),
        (
            reduce_to_h6(&q_dual, &h)?,
            H6Class::new(t, rat(25, 6) / &tr, rat(0, 1)),
            "q∨h",
        ),
        (
            reduce_to_h6(&q_dual, &dl)?,
            H6Class::new(t, rat(0, 1), rat(25, 2) / &tr),
            "q∨δ",
        ),
    ];
    for (got, want, name) in cases {
        ensure(got == want, || format!("{name} reduces wrongly"))?;
    }
    ensure(dual_pairing(d)? == rat(2, 1), || "(D, D∨) ≠ 2".into())?;
    ensure(fujiki_quartic(d) == BigInt::from(12), || "∫D⁴ ≠ 12".into())
}

fn fixed_locus(t: u64, d: &NSClass) -> Outcome {
    let r = solve_fixed_class(t)?;
    ensure(r.f == expected_class(d)?, || format!("[F] = {}", r.f))?;
    ensure(pair_h4(&r.f, &r.f)? == rat(192, 1), || {
        "⟨F, F⟩ ≠ 192".into()
    })?;
    let d2 = crate::cohomology::cup_h2(d, d)?;
    ensure(pair_h4(&r.f, &d2)? == rat(40, 1), || "⟨F, D²⟩ ≠ 40".into())?;
    ensure(sigma_functional(&r.f).is_zero(), || {
        "F is not Lagrangian".into()
    })?;
    ensure(H4Involution::new(t)?.apply(&r.f)? == r.f, || {
        "ι*F ≠ F".into()
    })?;
    let log = &r.branch_log;
    ensure(
        log.len() == 3 && log[0].rational_w.is_empty() && log[1].rational_w.is_empty(),
        || "branches v = 2, 6 have rational roots".into(),
    )?;
    ensure(log[2].rational_w == vec![rat(-13, 12), rat(-1, 1)], || {
        "branch v = 10 has unexpected roots".into()
    })
}

fn decompositions(t: u64, full_range: bool) -> Outcome {
    let found = search_decompositions(t, full_range)?;
    if t == 2 {
        let mut coords: Vec<[BigInt; 4]> = found.iter().map(|w| w.a.alpha.clone()).collect();
        coords.sort();
        let want = [[-1, 3, 10, -1], [0, 1, -2, 0]].map(|v| v.map(BigInt::from));
        ensure(found.iter().all(|w| w.checks.all()), || {
            "witness fails re-validation".into()
        })?;
        return ensure(coords == want, || {
            format!("{} candidates at t=2", coords.len())
        });
    }
    ensure(found.is_empty(), || {
        format!("{} invariant decompositions", found.len())
    })
}

fn obstructions(t: u64) -> Outcome {
    let v = prime_divisor_obstructions(t)?;
    ensure(v.holds(), || format!("{v:?}"))?;
    if t != 2 {
        ensure(!v.minus4_classes_exist, || {
            "x² − ty² = 2 is solvable".into()
        })?;
    }
    let s = swap_system_check(t)?;
    ensure(s.obstructed(), || {
        format!("{} effective swap solutions", s.effective_solutions.len())
    })
}

fn schubert() -> Outcome {
    let s = schubert_classes(2)?;
    let d = picard::polarisation(2)?;
    let d2 = crate::cohomology::cup_h2(&d, &d)?;
    ensure(s.sigma11.add(&s.sigma2)? == d2, || "A + B ≠ D²".into())?;
    ensure(
        s.bitangent == H4Class::from_ints(2, [20, -32, 8, -4]),
        || "28A + 12B ≠ (20, −32, 8, −4)".into(),
    )?;
    let pairs = [
        pair_h4(&s.sigma11, &s.sigma11)?,
        pair_h4(&s.sigma2, &s.sigma2)?,
        pair_h4(&s.sigma11, &s.sigma2)?,
    ];
    ensure(pairs == [rat(6, 1), rat(6, 1), rat(0, 1)], || {
        format!("pairings {pairs:?}")
    })
}

/// The per-degree checks for an admissible `t`.
pub fn checks_for(t: u64, full_range: bool) -> Vec<CheckResult> {
    let p = match Problem::new(t) {
        Ok(p) => p,
        Err(e) => return vec![CheckResult::new("polarisation", Some(t), Err(e.into()))],
    };
    let d = p.polarisation();
    let mut out = vec![
        CheckResult::new("pell_structure", Some(t), pell_structure(&p)),
        CheckResult::new("polarisation", Some(t), polarisation(t, &d)),
        CheckResult::new("involution", Some(t), involution(t, &d)),
        CheckResult::new("h6_calculus", Some(t), h6_calculus(t, &d)),
        CheckResult::new("fixed_locus", Some(t), fixed_locus(t, &d)),
        CheckResult::new("decompositions", Some(t), decompositions(t, full_range)),
        CheckResult::new("obstructions", Some(t), obstructions(t)),
    ];
    if t == 2 {
        out.push(CheckResult::new("schubert", Some(t), schubert()));
    }
    out
}

/// Admissible degrees in `lo..=hi`, in order.
pub fn admissible_in(lo: u64, hi: u64, exec: Exec) -> Result<Vec<u64>> {
    let ts: Vec<u64> = (lo.max(2)..=hi).collect();
    let flags = exec.map(ts.clone(), picard::is_admissible);
    let mut out = Vec::new();
    for (t, f) in ts.into_iter().zip(flags) {
        if f? {
            out.push(t);
        }
    }
    Ok(out)
}

pub fn run_checks(t_max: u64, opts: &CheckOptions) -> Result<CheckReport> {
    if t_max < 2 {
        return Err(Error::Domain(format!(
            "t_max must be at least 2, got {t_max}"
        )));
    }
    let admissible = admissible_in(2, t_max, opts.exec)?;
    let mut results = global_checks(t_max, opts);
    let full = opts.full_range;
    results.extend(
        opts.exec
            .flat_map(admissible.clone(), |t| checks_for(t, full)),
    );
    Ok(CheckReport {
        t_max,
        admissible,
        results,
    })
}

/// `x² − t·y² = −1` solvable, by the class solver; used to explain why a
/// degree is not admissible.
pub fn negative_pell_solvable(t: u64) -> Result<bool> {
    let tb = BigInt::from(t);
    if crate::arith::is_square(&tb) {
        return Ok(false);
    }
    pell::is_solvable(&tb, &-BigInt::one())
}
