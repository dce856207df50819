//! Plain-text matrix documents.
//!
//! ```text
//! # optional comment lines, anywhere
//! 3
//! 0.5 0.25 0.25
//! 0.2 0.3  0.5
//! 1   0    0
//! mu 1 2.5 4
//! ```
//!
//! The first non-comment line is the state count `n`, followed by `n` rows
//! of `n` decimal literals. A final `mu` line gives holding times; without it
//! every holding time is 1. Blank lines are ignored, LF and CRLF are both
//! accepted, and serialization emits LF.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::model::{MarkovRenewalProcess, StochasticMatrix};
use crate::scalar::Precision;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub comments: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
}

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_literals(line: usize, tokens: &[&str], n: usize, what: &str) -> Result<Vec<f64>> {
    if tokens.len() != n {
        return Err(parse_error(
            line,
            format!("{what} has {} entries, expected {n}", tokens.len()),
        ));
    }
    tokens
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| parse_error(line, format!("{t:?} is not a decimal literal")))
        })
        .collect()
}

impl MatrixDocument {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut n: Option<usize> = None;
        let mut rows = Vec::new();
        let mut mu = None;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                comments.push(comment.strip_prefix(' ').unwrap_or(comment).to_string());
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let Some(n) = n else {
                let count = match tokens.as_slice() {
                    [count] => count.parse::<usize>().ok(),
                    _ => None,
                };
                match count {
                    Some(0) => return Err(Error::Empty),
                    Some(count) => n = Some(count),
                    None => return Err(parse_error(line_no, "expected the number of states")),
                }
                continue;
            };
            if mu.is_some() {
                return Err(parse_error(line_no, "unexpected content after the mu line"));
            }
            if tokens[0] == "mu" {
                if rows.len() < n {
                    return Err(parse_error(line_no, format!("mu line before all {n} rows")));
                }
                mu = Some(parse_literals(line_no, &tokens[1..], n, "mu line")?);
            } else if rows.len() < n {
                rows.push(parse_literals(line_no, &tokens, n, "row")?);
            } else {
                return Err(parse_error(line_no, format!("more than {n} rows")));
            }
        }

        let Some(n) = n else {
            return Err(parse_error(last_line.max(1), "missing number of states"));
        };
        if rows.len() < n {
            return Err(parse_error(
                last_line.max(1),
                format!("found {} rows, expected {n}", rows.len()),
            ));
        }
        Ok(MatrixDocument { comments, rows, mu })
    }

    /// Validate into a process with the double-precision row-sum tolerance.
    pub fn to_process(&self) -> Result<MarkovRenewalProcess<f64>> {
        self.to_process_with_tolerance(Precision::Double.stochastic_tolerance())
    }

    pub fn to_process_with_tolerance(&self, tol: f64) -> Result<MarkovRenewalProcess<f64>> {
        let n = self.n();
        let data = self.rows.iter().flatten().copied().collect();
        let p = SquareMatrix::from_row_major(n, data).ok_or(Error::Empty)?;
        let p = StochasticMatrix::from_matrix(p, tol)?;
        match &self.mu {
            Some(mu) => MarkovRenewalProcess::new(p, mu.clone()),
            None => Ok(MarkovRenewalProcess::markov_chain(p)),
        }
    }

    pub fn from_process(mrp: &MarkovRenewalProcess<f64>) -> Self {
        MatrixDocument {
            comments: Vec::new(),
            rows: mrp.p().to_rows(),
            mu: (!mrp.is_markov_chain()).then(|| mrp.mu().to_vec()),
        }
    }

    /// Shortest decimal literals that parse back to the same bits.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.n());
        let join = |xs: &[f64]| xs.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
        for row in &self.rows {
            let _ = writeln!(out, "{}", join(row));
        }
        if let Some(mu) = &self.mu {
            let _ = writeln!(out, "mu {}", join(mu));
        }
        out
    }
}

/// Parse and validate a document in one step.
pub fn parse_matrix_document(text: &str) -> Result<MarkovRenewalProcess<f64>> {
    MatrixDocument::parse(text)?.to_process()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markov_chain_document() {
        let mrp = parse_matrix_document("2\n0.5 0.5\n0.25 0.75\n").unwrap();
        assert!(mrp.is_markov_chain());
        assert_eq!(mrp.p().to_rows(), vec![vec![0.5, 0.5], vec![0.25, 0.75]]);
    }

    #[test]
    fn holding_times() {
        let mrp = parse_matrix_document("2\n0.5 0.5\n0.25 0.75\nmu 2 3\n").unwrap();
        assert_eq!(mrp.mu(), &[2.0, 3.0]);
        assert!(!mrp.is_markov_chain());
    }

    #[test]
    fn invalid_row_sum() {
        let err = parse_matrix_document("# comment\n2\n0.5 0.5\n0.3 0.8\n").unwrap_err();
        match err {
            Error::RowSumOutOfTolerance { state, sum } => {
                assert_eq!(state, 2);
                assert!((sum - 1.1).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn crlf_and_comments() {
        let doc = MatrixDocument::parse("# a\r\n\r\n1\r\n# b\r\n1\r\n").unwrap();
        assert_eq!(doc.comments, vec!["a", "b"]);
        assert_eq!(doc.rows, vec![vec![1.0]]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("x\n", 1),
            ("2\n0.5 0.5\n0.5\n", 3),
            ("2\n0.5 0.5\n0.5 abc\n", 3),
            ("1\n1\n1\n", 3),
            ("1\nmu 1\n", 2),
            ("1\n1\nmu 1\n2\n", 4),
            ("2\n1 0\n", 2),
        ];
        for (text, line) in cases {
            match MatrixDocument::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert_eq!(MatrixDocument::parse("0\n"), Err(Error::Empty));
    }

    #[test]
    fn non_positive_holding_time_is_rejected() {
        let err = parse_matrix_document("1\n1\nmu 0\n").unwrap_err();
        assert!(matches!(err, Error::NonPositiveHoldingTime { state: 1, .. }));
    }

    #[test]
    fn serialization_round_trips() {
        let text = "# c\n3\n0.1 0.6 0.3\n1e-7 0.9999999 0\n0.3333333333333333 0.3333333333333333 0.3333333333333334\nmu 1 2.5 0.1\n";
        let doc = MatrixDocument::parse(text).unwrap();
        let again = MatrixDocument::parse(&doc.serialize()).unwrap();
        assert_eq!(doc, again);
        let bits = |d: &MatrixDocument| d.rows.iter().flatten().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&doc), bits(&again));
    }
}
