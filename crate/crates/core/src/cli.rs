//! The `hilbsq` command line.
//!
//! Exit codes: 0 on success, 1 for invalid input or a degree without a
//! ⟨2⟩-polarisation, 2 when an invariant is violated.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::checks::{run_checks, CheckOptions, CheckReport, CheckResult};
use crate::cohomology::PairingConstants;
use crate::par::{with_jobs, Exec};
use crate::pell::{self, SolutionClassSet};
use crate::report::analyze;
use crate::serde_exact;
use crate::survey::{survey, to_csv, SurveyRow};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "hilbsq",
    version,
    about = "Exact computations on Hilbert squares of generic K3 surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Scan k up to 2b² in the decomposition search instead of b².
    #[arg(long, global = true)]
    pub full_range: bool,
    /// Largest Nagell window brute-forced to cross-check `pell`.
    #[arg(long, default_value_t = 100_000, global = true)]
    pub bound: u64,
    /// Worker threads for surveys and checks.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Runs `check` with a corrupted intersection constant.
    #[arg(long, hide = true, global = true)]
    pub corrupt_gram: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for one degree 2t.
    Analyze { t: u64 },
    /// One row per admissible t in a range.
    Survey { t_min: u64, t_max: u64 },
    /// Classes of solutions of x² − d·y² = n.
    Pell {
        d: BigInt,
        #[arg(allow_hyphen_values = true)]
        n: BigInt,
    },
    /// The invariant suite over all admissible t ≤ t_max.
    Check { t_max: u64 },
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INVARIANT: u8 = 2;

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Parameter(_) => EXIT_INPUT,
        Error::Degenerate(_) | Error::Inconsistent(_) => EXIT_INVARIANT,
    }
}

/// Whether the windowed brute force was run and agreed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NagellCheck {
    #[serde(with = "serde_exact::bigint")]
    pub window_width: BigInt,
    pub ran: bool,
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellReport {
    pub classes: SolutionClassSet,
    pub class_count: usize,
    pub nagell: NagellCheck,
}

fn pell_report(d: &BigInt, n: &BigInt, bound: u64) -> crate::Result<PellReport> {
    let classes = pell::solve_pell_type(d, n)?;
    let window = pell::nagell_window(d, n)?;
    let width = window.width();
    let ran = width <= BigInt::from(bound);
    let agrees = ran
        .then(|| pell::nagell_classes(d, n).map(|b| b == classes))
        .transpose()?;
    Ok(PellReport {
        class_count: classes.class_count(),
        classes,
        nagell: NagellCheck {
            window_width: width,
            ran,
            agrees,
        },
    })
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn render_check(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "t", "passed", "detail"])
                .expect("in memory");
            for r in &report.results {
                let t = r.t.map_or_else(String::new, |t| t.to_string());
                w.write_record([r.name.as_str(), &t, &r.passed.to_string(), &r.detail])
                    .expect("in memory");
            }
            String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
        }
        Format::Text => {
            let mut s = format!("admissible t ≤ {}: {:?}\n", report.t_max, report.admissible);
            let total = report.results.len();
            let failed: Vec<_> = report.failures().collect();
            for f in &failed {
                let t = f.t.map_or_else(String::new, |t| format!(" (t={t})"));
                s += &format!("FAIL {}{t}: {}\n", f.name, f.detail);
            }
            s += &format!("{} of {total} checks passed\n", total - failed.len());
            s
        }
    }
}

fn render_pell(r: &PellReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["x", "y", "conjugate_pair"])
                .expect("in memory");
            for c in &r.classes.fundamentals {
                let f = &c.fundamental;
                w.write_record([
                    f.x.to_string(),
                    f.y.to_string(),
                    c.conjugate_pair.to_string(),
                ])
                .expect("in memory");
            }
            String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
        }
        Format::Text => {
            let set = &r.classes;
            let plural = if r.class_count == 1 { "" } else { "es" };
            let mut s = format!("x² − {}·y² = {}: {} class{plural}\n", set.d, set.n, r.class_count);
            for c in &set.fundamentals {
                let pair = if c.conjugate_pair {
                    " and its conjugate"
                } else {
                    ""
                };
                s += &format!("  fundamental {}{pair}\n", c.fundamental);
            }
            if let Some(m) = &set.minimal_positive {
                s += &format!("minimal positive solution {m}\n");
            }
            s += &match r.nagell.agrees {
                Some(true) => "Nagell window brute force agrees\n".to_string(),
                Some(false) => "Nagell window brute force DISAGREES\n".to_string(),
                None => format!(
                    "Nagell window of width {} skipped (raise --bound)\n",
                    r.nagell.window_width
                ),
            };
            s
        }
    }
}

/// What a command produced: stdout text, exit code and failure notes.
struct Outcome {
    text: String,
    code: u8,
    notes: Vec<String>,
}

fn outcome(text: String, code: u8) -> Outcome {
    Outcome {
        text,
        code,
        notes: Vec::new(),
    }
}

fn failed_checks<'a>(checks: impl Iterator<Item = &'a CheckResult>) -> Vec<String> {
    checks
        .filter(|c| !c.passed)
        .map(|c| {
            let t = c.t.map_or_else(String::new, |t| format!(" (t={t})"));
            format!("invariant {}{t} failed: {}", c.name, c.detail)
        })
        .collect()
}

fn dispatch(cli: &Cli) -> crate::Result<Outcome> {
    let exec = Exec::Parallel;
    match &cli.command {
        Command::Analyze { t } => {
            let r = analyze(*t, cli.full_range)?;
            let code = if !r.admissible() {
                EXIT_INPUT
            } else if !r.checks_passed() {
                EXIT_INVARIANT
            } else {
                EXIT_OK
            };
            let text = match cli.format {
                Format::Json => json(&r),
                Format::Text => r.to_string(),
                Format::Csv => to_csv(&[SurveyRow::from(&r)])?,
            };
            let mut o = outcome(text, code);
            o.notes = failed_checks(r.checks.iter());
            if !r.admissible() {
                o.notes.push(format!(
                    "t={t} admits no ⟨2⟩-polarisation: {}",
                    r.aut.reason
                ));
            }
            Ok(o)
        }
        Command::Survey { t_min, t_max } => {
            let rows = survey(*t_min, *t_max, cli.full_range, exec)?;
            let bad: Vec<u64> = rows
                .iter()
                .filter(|r| !r.checks_passed)
                .map(|r| r.t)
                .collect();
            let text = match cli.format {
                Format::Json => json(&rows),
                _ => to_csv(&rows)?,
            };
            let mut o = outcome(
                text,
                if bad.is_empty() {
                    EXIT_OK
                } else {
                    EXIT_INVARIANT
                },
            );
            o.notes = bad
                .iter()
                .map(|t| format!("checks failed for t={t}"))
                .collect();
            Ok(o)
        }
        Command::Pell { d, n } => {
            let r = pell_report(d, n, cli.bound)?;
            let mut o = outcome(render_pell(&r, cli.format), EXIT_OK);
            if r.nagell.agrees == Some(false) {
                o.code = EXIT_INVARIANT;
                o.notes
                    .push("invariant pell_nagell_agreement failed".into());
            }
            Ok(o)
        }
        Command::Check { t_max } => {
            let mut opts = CheckOptions {
                full_range: cli.full_range,
                exec,
                ..CheckOptions::default()
            };
            if cli.corrupt_gram {
                opts.pairing = PairingConstants {
                    q_q: PairingConstants::STANDARD.q_q + 1,
                    ..PairingConstants::STANDARD
                };
            }
            let r = run_checks(*t_max, &opts)?;
            let code = if r.all_passed() {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            };
            let mut o = outcome(render_check(&r, cli.format), code);
            o.notes = failed_checks(r.results.iter());
            Ok(o)
        }
    }
}

/// Runs a parsed command line, writing results to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match with_jobs(cli.jobs, || dispatch(cli)) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            for note in &o.notes {
                let _ = writeln!(err, "error: {note}");
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            error_code(&e)
        }
    }
}

/// Parses `args` and runs them. Usage errors exit with 1; `--help` and
/// `--version` with 0.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hilbsq").chain(args.iter().copied());
        let code = main_with_args(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["analyze", "10"]).0, 0);
        assert_eq!(call(&["analyze", "3"]).0, 1);
        assert_eq!(call(&["analyze", "1"]).0, 1);
        assert_eq!(call(&["survey", "9", "5"]).0, 1);
        assert_eq!(call(&["bogus"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["pell", "61", "-1"]).0, 0);
        assert_eq!(call(&["pell", "4", "5"]).0, 1);
        let (code, _, err) = call(&["check", "5", "--corrupt-gram"]);
        assert_eq!(code, 2);
        assert!(err.contains("invariant gram_discriminant failed"));
    }

    #[test]
    fn pell_cross_check() {
        let (code, out, _) = call(&["pell", "10", "-9", "--format", "json"]);
        assert_eq!(code, 0);
        let r: PellReport = serde_json::from_str(&out).unwrap();
        assert_eq!(r.nagell.agrees, Some(true));
        let (_, out, _) = call(&["pell", "10", "-9", "--bound", "0"]);
        assert!(out.contains("skipped"));
    }
}
