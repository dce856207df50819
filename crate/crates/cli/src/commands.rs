use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use egth::closed_form::{mfpt_1, mfpt_2, mfpt_3, stationary_3};
use egth::corpus::{Golden, ProblemId};
use egth::document::MatrixDocument;
use egth::{
    accurate_digits, compare_precisions, compare_stationary, mfpt_egth, mfpt_residual, stationary_from_mfpt,
    stationary_gth, stationary_residual, theorem7_mfpt, MarkovRenewalProcess, MfptMatrix, Precision, Scalar,
    StationaryDistribution,
};

use crate::args::{Algorithm, CompareArgs, CorpusAction, Output, ReportFormat, RunArgs, Source, VerifyArgs};
use crate::report::{self, CompareReport, RunReport, Stats, VerifyEntry, VerifyReport};
use crate::CliError;

/// Text for standard output plus the process exit status.
pub struct Outcome {
    pub stdout: String,
    pub status: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, status: 0 }
    }
}

struct Problem {
    name: String,
    process: MarkovRenewalProcess<f64>,
    golden: Option<Golden>,
}

fn timestamp(output: &Output) -> Option<u64> {
    (!output.no_timestamp).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}

fn read_document(path: &Path) -> Result<MarkovRenewalProcess<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(egth::document::parse_matrix_document(&text)?)
}

fn corpus_problem(id: ProblemId) -> Result<Problem, CliError> {
    let loaded = id.load()?;
    Ok(Problem { name: id.to_string(), process: loaded.process, golden: loaded.golden })
}

/// `all` selects every problem with reference data.
fn corpus_problems(id: &str) -> Result<Vec<Problem>, CliError> {
    if id.eq_ignore_ascii_case("all") {
        ProblemId::WITH_GOLDEN.into_iter().map(corpus_problem).collect()
    } else {
        Ok(vec![corpus_problem(id.parse()?)?])
    }
}

fn single_source(source: &Source) -> Result<Problem, CliError> {
    match (&source.input, &source.corpus) {
        (Some(path), _) => Ok(Problem { name: path.display().to_string(), process: read_document(path)?, golden: None }),
        (None, Some(id)) => corpus_problem(id.parse()?),
        (None, None) => Err(CliError::Usage("one of --input or --corpus is required".into())),
    }
}

fn render(output: &Output, report: &RunReport) -> String {
    match output.report {
        ReportFormat::Table => report.table(),
        ReportFormat::Csv => report.csv(),
        ReportFormat::Json => report.json(),
    }
}

fn closed_form_size_error(n: usize, what: &str) -> CliError {
    CliError::Usage(format!("closed-form {what} covers 1 to 3 states, this problem has {n}"))
}

fn mfpt_in<T: Scalar>(mrp: &MarkovRenewalProcess<T>, algorithm: Algorithm) -> Result<MfptMatrix<T>, CliError> {
    Ok(match algorithm {
        Algorithm::Egth => mfpt_egth(mrp)?,
        Algorithm::Theorem7 => theorem7_mfpt(mrp)?,
        Algorithm::Closedform => match mrp.n() {
            1 => mfpt_1(mrp.mu()[0]),
            2 => mfpt_2(mrp)?,
            3 => mfpt_3(mrp)?,
            n => return Err(closed_form_size_error(n, "passage-time matrix")),
        },
        Algorithm::Gth => {
            return Err(CliError::Usage("gth computes stationary distributions only; use egth, theorem7 or closedform".into()))
        }
    })
}

fn stationary_in<T: Scalar>(
    mrp: &MarkovRenewalProcess<T>,
    algorithm: Algorithm,
) -> Result<StationaryDistribution<T>, CliError> {
    Ok(match algorithm {
        Algorithm::Gth => stationary_gth(mrp.p())?,
        Algorithm::Closedform => match mrp.n() {
            1 => StationaryDistribution::new(vec![T::one()]),
            3 => stationary_3(mrp.p())?,
            n => return Err(CliError::Usage(format!("closed-form stationary distribution covers 1 or 3 states, this problem has {n}"))),
        },
        other => stationary_from_mfpt(&mfpt_in(mrp, other)?, mrp),
    })
}

struct Reference {
    label: String,
    mfpt: Option<MfptMatrix<f64>>,
    pi: Option<StationaryDistribution<f64>>,
}

/// Single-precision runs are compared with the double-precision run of the
/// same algorithm; double-precision runs with reference data when shipped.
fn reference_for(problem: &Problem, precision: Precision, algorithm: Algorithm, mfpt: bool) -> Result<Option<Reference>, CliError> {
    match precision {
        Precision::Single => {
            let (m, pi) = if mfpt {
                let m = mfpt_in(&problem.process, algorithm)?;
                let pi = stationary_from_mfpt(&m, &problem.process);
                (Some(m), pi)
            } else {
                (None, stationary_in(&problem.process, algorithm)?)
            };
            Ok(Some(Reference { label: "double precision".into(), mfpt: m, pi: Some(pi) }))
        }
        Precision::Double => Ok(problem.golden.as_ref().map(|g| Reference {
            label: "reference data".into(),
            mfpt: Some(g.mfpt.clone()),
            pi: g.pi.clone(),
        })),
    }
}

fn run_in<T: Scalar>(problem: &Problem, algorithm: Algorithm, mfpt: bool, reference: Option<Reference>) -> Result<RunReport, CliError> {
    let mrp = problem.process.cast::<T>();
    let (m, pi) = if mfpt {
        let m = mfpt_in(&mrp, algorithm)?;
        let pi = stationary_from_mfpt(&m, &mrp);
        (Some(m), pi)
    } else {
        (None, stationary_in(&mrp, algorithm)?)
    };
    let mfpt_errors = m.as_ref().map(|m| mfpt_residual(m, &mrp)).transpose()?.map(Stats::from);
    let stationary_errors = stationary_residual(&pi, mrp.p())?.into();
    let comparison = match (&reference, &m) {
        (Some(Reference { mfpt: Some(r), .. }), Some(m)) => Some(accurate_digits(r, m)?),
        (Some(Reference { pi: Some(r), .. }), None) => Some(compare_stationary(r, &pi)?),
        _ => None,
    };
    Ok(RunReport {
        problem: problem.name.clone(),
        precision: T::PRECISION.to_string(),
        algorithm: algorithm.as_str().to_string(),
        timestamp: None,
        pi: pi.to_f64().into_vec(),
        m: m.map(|m| m.to_f64().into_matrix()),
        mfpt_errors,
        stationary_errors,
        accurate_digits: comparison.as_ref().and_then(|c| c.accurate_digits),
        excluded_pairs: comparison.as_ref().map(|c| c.excluded_pairs.clone()).unwrap_or_default(),
        reference: comparison.map(|_| reference.expect("compared against a reference").label),
    })
}

pub fn run(args: &RunArgs, mfpt: bool) -> Result<Outcome, CliError> {
    let problem = single_source(&args.source)?;
    let algorithm = args.algorithm.unwrap_or(if mfpt { Algorithm::Egth } else { Algorithm::Gth });
    let reference = reference_for(&problem, args.precision, algorithm, mfpt)?;
    let mut report = match args.precision {
        Precision::Double => run_in::<f64>(&problem, algorithm, mfpt, reference)?,
        Precision::Single => run_in::<f32>(&problem, algorithm, mfpt, reference)?,
    };
    report.timestamp = timestamp(&args.output);
    Ok(Outcome::ok(render(&args.output, &report)))
}

/// Each entry passes when within `max(1e-9 |g|, resolution)` of `g`.
fn check_entries(values: impl Iterator<Item = (f64, f64, f64)>) -> VerifyEntry {
    let mut max_relative_error: f64 = 0.0;
    let mut tolerance_used: f64 = 0.0;
    for (computed, golden, resolution) in values {
        let diff = (computed - golden).abs();
        if golden != 0.0 {
            max_relative_error = max_relative_error.max(diff / golden.abs());
        }
        let tol = (1e-9 * golden.abs()).max(resolution);
        tolerance_used = tolerance_used.max(if tol > 0.0 { diff / tol } else if diff > 0.0 { f64::INFINITY } else { 0.0 });
    }
    VerifyEntry { max_relative_error, tolerance_used, passed: tolerance_used <= 1.0 }
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let problems = corpus_problems(&args.corpus)?;
    let mut reports = Vec::new();
    for problem in problems {
        let golden = problem
            .golden
            .ok_or_else(|| CliError::Core(egth::Error::NoGoldenData(problem.name.clone())))?;
        let m = mfpt_in(&problem.process, args.algorithm)?;
        let n = m.n();
        let mfpt = check_entries((0..n * n).map(|k| {
            let (i, j) = (k / n, k % n);
            (m[(i, j)], golden.mfpt[(i, j)], golden.mfpt_resolution[(i, j)])
        }));
        let pi = match (&golden.pi, &golden.pi_resolution) {
            (Some(g), Some(res)) => {
                let pi = stationary_from_mfpt(&m, &problem.process);
                Some(check_entries((0..n).map(|j| (pi[j], g[j], res[j]))))
            }
            _ => None,
        };
        reports.push(VerifyReport { problem: problem.name, algorithm: args.algorithm.as_str().into(), mfpt, pi });
    }
    let ts = timestamp(&args.output);
    let stdout = match args.output.report {
        ReportFormat::Table => report::verify_table(&reports, ts),
        ReportFormat::Csv => report::verify_csv(&reports, ts),
        ReportFormat::Json => report::verify_json(&reports, ts),
    };
    let status = if reports.iter().all(VerifyReport::passed) { 0 } else { 3 };
    Ok(Outcome { stdout, status })
}

pub fn compare(args: &CompareArgs) -> Result<Outcome, CliError> {
    let problems = match &args.source.corpus {
        Some(id) if args.source.input.is_none() => corpus_problems(id)?,
        _ => vec![single_source(&args.source)?],
    };
    let mut reports = Vec::new();
    for problem in problems {
        let study = compare_precisions(&problem.process)?;
        reports.push(CompareReport {
            problem: problem.name,
            mfpt_double: study.double.mfpt_errors.into(),
            mfpt_single: study.single.mfpt_errors.into(),
            accurate_digits: study.mfpt.accurate_digits,
            excluded_pairs: study.mfpt.excluded_pairs.clone(),
            egth_double: study.double.egth_stationary_errors.into(),
            gth_double: study.double.gth_stationary_errors.into(),
            egth_single: study.single.egth_stationary_errors.into(),
            gth_single: study.single.gth_stationary_errors.into(),
            egth_relative_error: study.pi_egth.relative_error,
            gth_relative_error: study.pi_gth.relative_error,
        });
    }
    let ts = timestamp(&args.output);
    Ok(Outcome::ok(match args.output.report {
        ReportFormat::Table => report::compare_table(&reports, ts),
        ReportFormat::Csv => report::compare_csv(&reports, ts),
        ReportFormat::Json => report::compare_json(&reports, ts),
    }))
}

pub fn corpus(action: &CorpusAction) -> Result<Outcome, CliError> {
    match action {
        CorpusAction::List { output } => Ok(Outcome::ok(list(output)?)),
        CorpusAction::Show { id } => {
            let id: ProblemId = id.parse()?;
            Ok(Outcome::ok(id.matrix_text().replace("\r\n", "\n")))
        }
        CorpusAction::Export { id, output } => {
            let id: ProblemId = id.parse()?;
            let text = MatrixDocument::parse(id.matrix_text())?.serialize();
            match output {
                Some(path) => {
                    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
    }
}

fn list(output: &Output) -> Result<String, CliError> {
    let mut rows = Vec::new();
    for id in ProblemId::ALL {
        let loaded = id.load()?;
        rows.push((id.to_string(), loaded.process.n(), loaded.golden.is_some()));
    }
    Ok(match output.report {
        ReportFormat::Table => {
            let mut out = format!("{:<14}{:>8}  reference data\n", "problem", "states");
            for (id, n, golden) in rows {
                out.push_str(&format!("{id:<14}{n:>8}  {}\n", if golden { "yes" } else { "no" }));
            }
            out
        }
        ReportFormat::Csv => {
            let mut out = String::from("problem,states,reference_data\n");
            for (id, n, golden) in rows {
                out.push_str(&format!("{id},{n},{golden}\n"));
            }
            out
        }
        ReportFormat::Json => {
            let items: Vec<serde_json::Value> = rows
                .into_iter()
                .map(|(id, n, golden)| serde_json::json!({ "problem": id, "states": n, "reference_data": golden }))
                .collect();
            serde_json::to_string_pretty(&items).expect("list serializes") + "\n"
        }
    })
}
