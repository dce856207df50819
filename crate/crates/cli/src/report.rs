//! Rendering of run, verification and comparison results.
//!
//! Machine formats write every number with 15 significant digits in
//! scientific notation. Tables extract one power-of-ten factor per matrix or
//! vector, keeping every entry below ten in magnitude.

use std::fmt::Write;

use egth::SquareMatrix;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// 15 significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else {
        x.to_string()
    }
}

/// A number serialized through [`sci`]; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(sci(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().copied().map(Num).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub residual: f64,
}

impl From<egth::MfptErrorReport> for Stats {
    fn from(r: egth::MfptErrorReport) -> Self {
        Stats { min: r.min_abs, max: r.max_abs, residual: r.residual }
    }
}

impl From<egth::StationaryErrorReport> for Stats {
    fn from(r: egth::StationaryErrorReport) -> Self {
        Stats { min: r.min_abs, max: r.max_abs, residual: r.residual }
    }
}

#[derive(Serialize)]
struct JsonStats {
    min: Num,
    max: Num,
    residual: Num,
}

impl From<&Stats> for JsonStats {
    fn from(s: &Stats) -> Self {
        JsonStats { min: Num(s.min), max: Num(s.max), residual: Num(s.residual) }
    }
}

/// Outcome of a `stationary` or `mfpt` run, widened to `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub problem: String,
    pub precision: String,
    pub algorithm: String,
    pub timestamp: Option<u64>,
    pub pi: Vec<f64>,
    pub m: Option<SquareMatrix<f64>>,
    pub mfpt_errors: Option<Stats>,
    pub stationary_errors: Stats,
    /// Set when a reference result was available to compare against.
    pub accurate_digits: Option<f64>,
    pub excluded_pairs: Vec<(usize, usize)>,
    pub reference: Option<String>,
}

#[derive(Serialize)]
struct JsonRun<'a> {
    problem: &'a str,
    precision: &'a str,
    algorithm: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    pi: Vec<Num>,
    m: Option<Vec<Vec<Num>>>,
    errors: JsonErrors<'a>,
}

#[derive(Serialize)]
struct JsonErrors<'a> {
    mfpt: Option<JsonStats>,
    stationary: JsonStats,
    accurate_digits: Option<Num>,
    excluded_pairs: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<&'a str>,
}

impl RunReport {
    pub fn json(&self) -> String {
        let doc = JsonRun {
            problem: &self.problem,
            precision: &self.precision,
            algorithm: &self.algorithm,
            timestamp: self.timestamp,
            pi: nums(&self.pi),
            m: self.m.as_ref().map(|m| m.rows().map(nums).collect()),
            errors: JsonErrors {
                mfpt: self.mfpt_errors.as_ref().map(JsonStats::from),
                stationary: JsonStats::from(&self.stationary_errors),
                accurate_digits: self.accurate_digits.map(Num),
                excluded_pairs: self.excluded_pairs.iter().map(|&(i, j)| [i, j]).collect(),
                reference: self.reference.as_deref(),
            },
        };
        to_json(&doc)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("problem,precision,algorithm,quantity,row,column,value\n");
        let mut line = |quantity: &str, row: Option<usize>, col: Option<usize>, value: String| {
            let cell = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{quantity},{},{},{value}",
                csv_field(&self.problem),
                self.precision,
                self.algorithm,
                cell(row),
                cell(col)
            );
        };
        if let Some(t) = self.timestamp {
            line("timestamp", None, None, t.to_string());
        }
        for (i, v) in self.pi.iter().enumerate() {
            line("pi", Some(i + 1), None, sci(*v));
        }
        if let Some(m) = &self.m {
            for (i, row) in m.rows().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    line("m", Some(i + 1), Some(j + 1), sci(*v));
                }
            }
        }
        let mut stats = |name: &str, s: &Stats| {
            line(&format!("{name}_min"), None, None, sci(s.min));
            line(&format!("{name}_max"), None, None, sci(s.max));
            line(&format!("{name}_residual"), None, None, sci(s.residual));
        };
        if let Some(s) = &self.mfpt_errors {
            stats("mfpt", s);
        }
        stats("stationary", &self.stationary_errors);
        if let Some(d) = self.accurate_digits {
            line("accurate_digits", None, None, sci(d));
        }
        for &(i, j) in &self.excluded_pairs {
            line("excluded_pair", Some(i), Some(j), String::new());
        }
        out
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "problem    {}", self.problem);
        let _ = writeln!(out, "precision  {}", self.precision);
        let _ = writeln!(out, "algorithm  {}", self.algorithm);
        if let Some(t) = self.timestamp {
            let _ = writeln!(out, "generated  {t}");
        }
        let _ = writeln!(out, "\nstationary distribution (transposed)");
        out.push_str(&scaled_rows(&[self.pi.as_slice()]));
        if let Some(m) = &self.m {
            let _ = writeln!(out, "\nmean first passage times");
            out.push_str(&scaled_rows(&m.rows().collect::<Vec<_>>()));
        }
        let _ = writeln!(out, "\n{:<22}{:>12}{:>12}{:>12}", "residuals", "min", "max", "sum");
        if let Some(s) = &self.mfpt_errors {
            let _ = writeln!(out, "{:<22}{:>12.4e}{:>12.4e}{:>12.4e}", "passage times", s.min, s.max, s.residual);
        }
        let s = &self.stationary_errors;
        let _ = writeln!(out, "{:<22}{:>12.4e}{:>12.4e}{:>12.4e}", "stationary", s.min, s.max, s.residual);
        if let Some(reference) = &self.reference {
            let digits = self.accurate_digits.map_or("exact".to_string(), |d| format!("{d:.4}"));
            let _ = writeln!(out, "\naccurate digits against {reference}: {digits}");
            if !self.excluded_pairs.is_empty() {
                let pairs: Vec<String> = self.excluded_pairs.iter().map(|(i, j)| format!("({i},{j})")).collect();
                let _ = writeln!(out, "exact entries excluded: {}", pairs.join(" "));
            }
        }
        out
    }
}

/// Rows printed under a common factor `10^k`, entries below ten in size.
/// No factor is extracted when the largest entry lies in `[0.1, 10)`.
pub fn scaled_rows(rows: &[&[f64]]) -> String {
    let max = rows
        .iter()
        .flat_map(|r| r.iter())
        .filter(|x| x.is_finite())
        .fold(0.0f64, |a, &x| a.max(x.abs()));
    let k = if max == 0.0 { 0 } else { max.log10().floor() as i32 };
    let k = if k == -1 { 0 } else { k };
    let factor = 10f64.powi(k);
    let mut out = String::new();
    if k != 0 {
        let _ = writeln!(out, "  1.0e{}{:02} *", if k < 0 { '-' } else { '+' }, k.abs());
    }
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| format!("{:>18.15}", x / factor)).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    out
}

/// Comparison of one problem against its reference data.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub problem: String,
    pub algorithm: String,
    pub mfpt: VerifyEntry,
    pub pi: Option<VerifyEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyEntry {
    /// Largest `|computed - reference| / |reference|`.
    pub max_relative_error: f64,
    /// Largest difference as a fraction of its entry's tolerance.
    pub tolerance_used: f64,
    pub passed: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mfpt.passed && self.pi.as_ref().is_none_or(|p| p.passed)
    }
}

#[derive(Serialize)]
struct JsonVerifyEntry {
    max_relative_error: Num,
    tolerance_used: Num,
    passed: bool,
}

impl From<&VerifyEntry> for JsonVerifyEntry {
    fn from(e: &VerifyEntry) -> Self {
        JsonVerifyEntry {
            max_relative_error: Num(e.max_relative_error),
            tolerance_used: Num(e.tolerance_used),
            passed: e.passed,
        }
    }
}

#[derive(Serialize)]
struct JsonVerify<'a> {
    problem: &'a str,
    algorithm: &'a str,
    passed: bool,
    m: JsonVerifyEntry,
    pi: Option<JsonVerifyEntry>,
}

#[derive(Serialize)]
struct JsonVerifySet<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    tolerance: &'static str,
    passed: usize,
    total: usize,
    problems: Vec<JsonVerify<'a>>,
}

pub const VERIFY_TOLERANCE: &str = "max(1e-9 * |reference|, half a unit in the last printed digit)";

pub fn verify_json(reports: &[VerifyReport], timestamp: Option<u64>) -> String {
    to_json(&JsonVerifySet {
        timestamp,
        tolerance: VERIFY_TOLERANCE,
        passed: reports.iter().filter(|r| r.passed()).count(),
        total: reports.len(),
        problems: reports
            .iter()
            .map(|r| JsonVerify {
                problem: &r.problem,
                algorithm: &r.algorithm,
                passed: r.passed(),
                m: (&r.mfpt).into(),
                pi: r.pi.as_ref().map(Into::into),
            })
            .collect(),
    })
}

pub fn verify_csv(reports: &[VerifyReport], timestamp: Option<u64>) -> String {
    let mut out = String::from("problem,algorithm,quantity,max_relative_error,tolerance_used,passed\n");
    for r in reports {
        let entries = std::iter::once(("m", &r.mfpt)).chain(r.pi.as_ref().map(|p| ("pi", p)));
        for (q, e) in entries {
            let _ = writeln!(
                out,
                "{},{},{q},{},{},{}",
                csv_field(&r.problem),
                r.algorithm,
                sci(e.max_relative_error),
                sci(e.tolerance_used),
                e.passed
            );
        }
    }
    if let Some(t) = timestamp {
        let _ = writeln!(out, "timestamp,,,,,{t}");
    }
    out
}

pub fn verify_table(reports: &[VerifyReport], timestamp: Option<u64>) -> String {
    let mut out = String::new();
    if let Some(t) = timestamp {
        let _ = writeln!(out, "generated {t}");
    }
    let _ = writeln!(out, "tolerance per entry: {VERIFY_TOLERANCE}\n");
    let _ = writeln!(
        out,
        "{:<14}{:<12}{:>16}{:>12}{:>16}{:>12}  verdict",
        "problem", "algorithm", "M max rel err", "M tol used", "pi max rel err", "pi tol used"
    );
    for r in reports {
        let (pe, pt) = r.pi.as_ref().map_or(("-".to_string(), "-".to_string()), |p| {
            (format!("{:.4e}", p.max_relative_error), format!("{:.3}", p.tolerance_used))
        });
        let _ = writeln!(
            out,
            "{:<14}{:<12}{:>16.4e}{:>12.3}{:>16}{:>12}  {}",
            r.problem,
            r.algorithm,
            r.mfpt.max_relative_error,
            r.mfpt.tolerance_used,
            pe,
            pt,
            if r.passed() { "PASS" } else { "FAIL" }
        );
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let _ = writeln!(out, "\n{passed}/{} problems passed", reports.len());
    out
}

/// Single- against double-precision statistics of one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub problem: String,
    pub mfpt_double: Stats,
    pub mfpt_single: Stats,
    pub accurate_digits: Option<f64>,
    pub excluded_pairs: Vec<(usize, usize)>,
    pub egth_double: Stats,
    pub gth_double: Stats,
    pub egth_single: Stats,
    pub gth_single: Stats,
    pub egth_relative_error: f64,
    pub gth_relative_error: f64,
}

#[derive(Serialize)]
struct JsonCompare<'a> {
    problem: &'a str,
    mfpt: JsonPrecisionPair,
    accurate_digits: Option<Num>,
    excluded_pairs: Vec<[usize; 2]>,
    stationary_egth: JsonPrecisionPair,
    stationary_gth: JsonPrecisionPair,
    relative_error_egth: Num,
    relative_error_gth: Num,
}

#[derive(Serialize)]
struct JsonPrecisionPair {
    double: JsonStats,
    single: JsonStats,
}

#[derive(Serialize)]
struct JsonCompareSet<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    problems: Vec<JsonCompare<'a>>,
}

pub fn compare_json(reports: &[CompareReport], timestamp: Option<u64>) -> String {
    let pair = |d: &Stats, s: &Stats| JsonPrecisionPair { double: d.into(), single: s.into() };
    to_json(&JsonCompareSet {
        timestamp,
        problems: reports
            .iter()
            .map(|r| JsonCompare {
                problem: &r.problem,
                mfpt: pair(&r.mfpt_double, &r.mfpt_single),
                accurate_digits: r.accurate_digits.map(Num),
                excluded_pairs: r.excluded_pairs.iter().map(|&(i, j)| [i, j]).collect(),
                stationary_egth: pair(&r.egth_double, &r.egth_single),
                stationary_gth: pair(&r.gth_double, &r.gth_single),
                relative_error_egth: Num(r.egth_relative_error),
                relative_error_gth: Num(r.gth_relative_error),
            })
            .collect(),
    })
}

const COMPARE_COLUMNS: [&str; 10] = [
    "mfpt_residual_double",
    "mfpt_residual_single",
    "accurate_digits",
    "stationary_residual_double_egth",
    "stationary_residual_double_gth",
    "stationary_residual_single_egth",
    "stationary_residual_single_gth",
    "relative_error_egth",
    "relative_error_gth",
    "excluded_pairs",
];

impl CompareReport {
    fn values(&self) -> [f64; 9] {
        [
            self.mfpt_double.residual,
            self.mfpt_single.residual,
            self.accurate_digits.unwrap_or(f64::INFINITY),
            self.egth_double.residual,
            self.gth_double.residual,
            self.egth_single.residual,
            self.gth_single.residual,
            self.egth_relative_error,
            self.gth_relative_error,
        ]
    }

    fn pairs(&self) -> String {
        self.excluded_pairs.iter().map(|(i, j)| format!("({i} {j})")).collect::<Vec<_>>().join(" ")
    }
}

pub fn compare_csv(reports: &[CompareReport], timestamp: Option<u64>) -> String {
    let mut out = format!("problem,{}\n", COMPARE_COLUMNS.join(","));
    for r in reports {
        let values: Vec<String> = r.values().iter().map(|&v| sci(v)).collect();
        let _ = writeln!(out, "{},{},{}", csv_field(&r.problem), values.join(","), r.pairs());
    }
    if let Some(t) = timestamp {
        let _ = writeln!(out, "timestamp,{t}{}", ",".repeat(COMPARE_COLUMNS.len() - 1));
    }
    out
}

pub fn compare_table(reports: &[CompareReport], timestamp: Option<u64>) -> String {
    let mut out = String::new();
    if let Some(t) = timestamp {
        let _ = writeln!(out, "generated {t}\n");
    }
    let sections: [(&str, usize); 9] = [
        ("passage-time residual, double precision", 0),
        ("passage-time residual, single precision", 1),
        ("average accurate digits of single precision passage times", 2),
        ("stationary residual, double precision (recurrence times)", 3),
        ("stationary residual, double precision (state reduction)", 4),
        ("stationary residual, single precision (recurrence times)", 5),
        ("stationary residual, single precision (state reduction)", 6),
        ("single vs double relative error (recurrence times)", 7),
        ("single vs double relative error (state reduction)", 8),
    ];
    for (title, column) in sections {
        let _ = writeln!(out, "{title}");
        for r in reports {
            let v = r.values()[column];
            if column == 2 {
                let _ = write!(out, "  {:<14}{:>12.4}", r.problem, v);
                if !r.excluded_pairs.is_empty() {
                    let _ = write!(out, "  excluding {}", r.pairs());
                }
                let _ = writeln!(out);
            } else {
                let _ = writeln!(out, "  {:<14}{:>12.4e}", r.problem, v);
            }
        }
        let _ = writeln!(out);
    }
    out
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
