//! The per-degree analysis bundle behind `hilbsq analyze`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::is_square;
use crate::checks::{checks_for, CheckResult};
use crate::fixedlocus::{solve_fixed_class, FixedLocusReport};
use crate::irreducibility::{search_decompositions, DecompositionWitness};
use crate::pell;
use crate::picard::{self, cone_slopes, involution_matrix, ConeSlopes, InvolutionMatrix, NSClass};
use crate::serde_exact::{self, format_rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellData {
    /// Least positive solution `(a, b)` of `x² − t·y² = −1`.
    #[serde(with = "serde_exact::opt_bigint")]
    pub a: Option<BigInt>,
    #[serde(with = "serde_exact::opt_bigint")]
    pub b: Option<BigInt>,
    /// Fundamental solution `(c, d)` of `x² − t·y² = 1`.
    #[serde(with = "serde_exact::opt_bigint")]
    pub c: Option<BigInt>,
    #[serde(with = "serde_exact::opt_bigint")]
    pub d: Option<BigInt>,
    /// Whether `x² − 4t·y² = 5` is solvable.
    pub p4t5_solvable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutData {
    pub nontrivial: bool,
    pub reason: String,
    pub involution: Option<InvolutionMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub t: u64,
    pub pell: PellData,
    pub cones: ConeSlopes,
    pub aut: AutData,
    #[serde(rename = "D")]
    pub d: Option<NSClass>,
    /// `D` written as `"h - 3*delta"`.
    #[serde(rename = "D_text")]
    pub d_text: Option<String>,
    #[serde(rename = "F")]
    pub f: Option<FixedLocusReport>,
    pub full_range: bool,
    pub irreducibility: Vec<DecompositionWitness>,
    pub checks: Vec<CheckResult>,
}

impl AnalysisReport {
    pub fn admissible(&self) -> bool {
        self.aut.nontrivial
    }

    pub fn checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `D₁ ∩ D₂` admits no invariant splitting.
    pub fn irreducible(&self) -> bool {
        self.irreducibility.is_empty()
    }
}

fn pell_data(t: u64) -> Result<PellData> {
    let tb = BigInt::from(t);
    let p4t5_solvable = picard::minimal_p4t5(t)?.is_some();
    if is_square(&tb) {
        return Ok(PellData {
            a: None,
            b: None,
            c: None,
            d: None,
            p4t5_solvable,
        });
    }
    let unit = pell::fundamental_unit(&tb)?;
    let neg = pell::solve_pell_type(&tb, &-BigInt::one())?.minimal_positive;
    Ok(PellData {
        a: neg.as_ref().map(|s| s.x.clone()),
        b: neg.map(|s| s.y),
        c: Some(unit.x),
        d: Some(unit.y),
        p4t5_solvable,
    })
}

/// Runs the whole pipeline for one degree. Non-admissible degrees give a
/// report with `aut.nontrivial = false` and no polarisation.
pub fn analyze(t: u64, full_range: bool) -> Result<AnalysisReport> {
    if t < 2 {
        return Err(Error::Domain(format!("t must be at least 2, got {t}")));
    }
    let pell = pell_data(t)?;
    let cones = cone_slopes(t)?;
    let verdict = picard::aut_is_nontrivial(t)?;
    let mut report = AnalysisReport {
        t,
        pell,
        cones,
        aut: AutData {
            nontrivial: verdict.nontrivial,
            reason: verdict.reason,
            involution: None,
        },
        d: None,
        d_text: None,
        f: None,
        full_range,
        irreducibility: Vec::new(),
        checks: Vec::new(),
    };
    let Some(d) = verdict.witness else {
        return Ok(report);
    };
    report.aut.involution = Some(involution_matrix(t)?);
    report.d_text = Some(d.to_string());
    report.d = Some(d);
    report.f = Some(solve_fixed_class(t)?);
    report.irreducibility = search_decompositions(t, full_range)?;
    report.checks = checks_for(t, full_range);
    Ok(report)
}

fn opt(v: &Option<BigInt>) -> String {
    v.as_ref().map_or_else(|| "-".into(), ToString::to_string)
}

/// `p·x + q·y` with signs folded in, e.g. `3x - 2y`.
fn linear([p, q]: &[BigInt; 2]) -> String {
    let sign = if q.is_negative() { '-' } else { '+' };
    format!("{p}x {sign} {}y", q.abs())
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.pell;
        writeln!(f, "t = {}", self.t)?;
        writeln!(f, "x² − t·y² = −1: (a, b) = ({}, {})", opt(&p.a), opt(&p.b))?;
        writeln!(f, "x² − t·y² = 1:  (c, d) = ({}, {})", opt(&p.c), opt(&p.d))?;
        writeln!(f, "x² − 4t·y² = 5 solvable: {}", p.p4t5_solvable)?;
        writeln!(
            f,
            "slopes: mu = {}, nu = {}, omega = {}",
            format_rational(&self.cones.mu),
            format_rational(&self.cones.nu),
            format_rational(&self.cones.omega)
        )?;
        writeln!(
            f,
            "aut nontrivial: {} ({})",
            self.aut.nontrivial, self.aut.reason
        )?;
        if let Some(m) = &self.aut.involution {
            writeln!(
                f,
                "involution: (x, y) -> ({}, {})",
                linear(&m.row_x),
                linear(&m.row_y)
            )?;
        }
        if let Some(d) = &self.d_text {
            writeln!(f, "D = {d}")?;
        }
        if let Some(r) = &self.f {
            writeln!(f, "[F] = {} in {{h², hδ, δ², (2/5)q∨}}", r.f)?;
            writeln!(f, "[F] integral coordinates = {}", r.f_integral)?;
            writeln!(f, "dim H⁰(F, D|_F) = {}", r.dim_h0)?;
        }
        if self.admissible() {
            if self.irreducibility.is_empty() {
                writeln!(f, "irreducibility: no invariant decomposition of D²")?;
            }
            for w in &self.irreducibility {
                writeln!(f, "decomposition: A = {}, B = {}", w.a, w.b)?;
            }
            for c in &self.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                write!(f, "check {mark} {}", c.name)?;
                if !c.passed {
                    write!(f, ": {}", c.detail)?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}
