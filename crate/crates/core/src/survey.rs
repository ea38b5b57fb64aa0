//! One summary row per admissible degree in a range.

use serde::{Deserialize, Serialize};

use crate::checks::admissible_in;
use crate::par::Exec;
use crate::report::{analyze, AnalysisReport};
use crate::serde_exact::format_rational;
use crate::{Error, Result};

pub const COLUMNS: [&str; 15] = [
    "t",
    "a",
    "b",
    "c",
    "d",
    "mu",
    "nu",
    "omega",
    "aut",
    "F_alpha1",
    "F_alpha2",
    "F_alpha3",
    "F_alpha4",
    "irreducible",
    "checks_passed",
];

/// A survey row; every value is written exactly, rationals as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub t: u64,
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub mu: String,
    pub nu: String,
    pub omega: String,
    pub aut: bool,
    #[serde(rename = "F_alpha1")]
    pub f_alpha1: String,
    #[serde(rename = "F_alpha2")]
    pub f_alpha2: String,
    #[serde(rename = "F_alpha3")]
    pub f_alpha3: String,
    #[serde(rename = "F_alpha4")]
    pub f_alpha4: String,
    pub irreducible: bool,
    pub checks_passed: bool,
}

impl From<&AnalysisReport> for SurveyRow {
    fn from(r: &AnalysisReport) -> Self {
        let s = |v: &Option<num_bigint::BigInt>| {
            v.as_ref().map_or_else(String::new, ToString::to_string)
        };
        let f: [String; 4] = match &r.f {
            Some(f) => f.f_integral.alpha.clone().map(|x| x.to_string()),
            None => Default::default(),
        };
        let [f1, f2, f3, f4] = f;
        Self {
            t: r.t,
            a: s(&r.pell.a),
            b: s(&r.pell.b),
            c: s(&r.pell.c),
            d: s(&r.pell.d),
            mu: format_rational(&r.cones.mu),
            nu: format_rational(&r.cones.nu),
            omega: format_rational(&r.cones.omega),
            aut: r.aut.nontrivial,
            f_alpha1: f1,
            f_alpha2: f2,
            f_alpha3: f3,
            f_alpha4: f4,
            irreducible: r.irreducible(),
            checks_passed: r.checks_passed(),
        }
    }
}

/// Rows for the admissible `t` in `t_min..=t_max`, ordered by `t`.
pub fn survey(t_min: u64, t_max: u64, full_range: bool, exec: Exec) -> Result<Vec<SurveyRow>> {
    if t_min < 2 || t_min > t_max {
        return Err(Error::Domain(format!(
            "a survey needs 2 ≤ t_min ≤ t_max, got {t_min}..{t_max}"
        )));
    }
    let ts = admissible_in(t_min, t_max, exec)?;
    exec.map(ts, |t| analyze(t, full_range).map(|r| SurveyRow::from(&r)))
        .into_iter()
        .collect()
}

/// Renders rows as CSV with a header line.
pub fn to_csv(rows: &[SurveyRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(COLUMNS)
            .map_err(|e| Error::Inconsistent(e.to_string()))?;
    }
    for r in rows {
        w.serialize(r)
            .map_err(|e| Error::Inconsistent(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Inconsistent(e.to_string()))
}
