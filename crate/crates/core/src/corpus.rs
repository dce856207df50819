//! The bundled test problems and their reference passage-time matrices.
//!
//! Matrices are stored as [`MatrixDocument`] text. Reference data is stored
//! as printed: every entry is a decimal mantissa scaled by a common power of
//! ten, and the number of printed digits fixes each entry's display
//! resolution.

use std::fmt;
use std::str::FromStr;

use crate::document::MatrixDocument;
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::model::{MarkovRenewalProcess, MfptMatrix, StationaryDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    Tp1,
    Tp2,
    Tp3,
    Tp41,
    Tp42,
    Tp43,
    Tp44,
    /// The ten-state chain whose recurrent class is `Tp1`.
    Tp1Original,
}

impl ProblemId {
    pub const ALL: [ProblemId; 8] = [
        ProblemId::Tp1,
        ProblemId::Tp2,
        ProblemId::Tp3,
        ProblemId::Tp41,
        ProblemId::Tp42,
        ProblemId::Tp43,
        ProblemId::Tp44,
        ProblemId::Tp1Original,
    ];

    /// The problems that carry reference data.
    pub const WITH_GOLDEN: [ProblemId; 7] = [
        ProblemId::Tp1,
        ProblemId::Tp2,
        ProblemId::Tp3,
        ProblemId::Tp41,
        ProblemId::Tp42,
        ProblemId::Tp43,
        ProblemId::Tp44,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Tp1 => "TP1",
            ProblemId::Tp2 => "TP2",
            ProblemId::Tp3 => "TP3",
            ProblemId::Tp41 => "TP41",
            ProblemId::Tp42 => "TP42",
            ProblemId::Tp43 => "TP43",
            ProblemId::Tp44 => "TP44",
            ProblemId::Tp1Original => "TP1_original",
        }
    }

    /// Source text of the transition matrix.
    pub fn matrix_text(self) -> &'static str {
        match self {
            ProblemId::Tp1 => include_str!("../corpus/tp1.mat"),
            ProblemId::Tp2 => include_str!("../corpus/tp2.mat"),
            ProblemId::Tp3 => include_str!("../corpus/tp3.mat"),
            ProblemId::Tp41 => include_str!("../corpus/tp41.mat"),
            ProblemId::Tp42 => include_str!("../corpus/tp42.mat"),
            ProblemId::Tp43 => include_str!("../corpus/tp43.mat"),
            ProblemId::Tp44 => include_str!("../corpus/tp44.mat"),
            ProblemId::Tp1Original => include_str!("../corpus/tp1_original.mat"),
        }
    }

    /// Source text of the reference data, if any.
    pub fn golden_text(self) -> Option<&'static str> {
        Some(match self {
            ProblemId::Tp1 => include_str!("../corpus/tp1.golden"),
            ProblemId::Tp2 => include_str!("../corpus/tp2.golden"),
            ProblemId::Tp3 => include_str!("../corpus/tp3.golden"),
            ProblemId::Tp41 => include_str!("../corpus/tp41.golden"),
            ProblemId::Tp42 => include_str!("../corpus/tp42.golden"),
            ProblemId::Tp43 => include_str!("../corpus/tp43.golden"),
            ProblemId::Tp44 => include_str!("../corpus/tp44.golden"),
            ProblemId::Tp1Original => return None,
        })
    }

    /// Coupling exponent `k` of the `TP4x` family, `epsilon = 10^-k`.
    pub fn tp4_exponent(self) -> Option<u32> {
        match self {
            ProblemId::Tp41 => Some(1),
            ProblemId::Tp42 => Some(3),
            ProblemId::Tp43 => Some(5),
            ProblemId::Tp44 => Some(7),
            _ => None,
        }
    }

    pub fn load(self) -> Result<TestProblem> {
        let process = MatrixDocument::parse(self.matrix_text())?.to_process()?;
        let golden = self.golden_text().map(Golden::parse).transpose()?;
        Ok(TestProblem {
            id: self,
            process,
            golden,
        })
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// Reference values as printed, with the half-unit display resolution of
/// every entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Golden {
    /// Common power-of-ten factor of the printed matrix.
    pub scale_exponent: i32,
    pub mfpt: MfptMatrix<f64>,
    pub mfpt_resolution: SquareMatrix<f64>,
    pub pi: Option<StationaryDistribution<f64>>,
    pub pi_resolution: Option<Vec<f64>>,
}

/// Value of `mantissa * 10^exp` and half a unit in its last printed digit.
fn scaled_literal(line: usize, mantissa: &str, exp: i32) -> Result<(f64, f64)> {
    let bad = || Error::Parse {
        line,
        reason: format!("{mantissa:?} is not a plain decimal"),
    };
    if !mantissa.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return Err(bad());
    }
    let value = format!("{mantissa}e{exp}").parse::<f64>().map_err(|_| bad())?;
    let decimals = mantissa.split_once('.').map_or(0, |(_, frac)| frac.len()) as i32;
    let half_unit = format!("5e{}", exp - decimals - 1).parse::<f64>().map_err(|_| bad())?;
    Ok((value, half_unit))
}

impl Golden {
    /// Grammar: `#` comments, `scale k`, the state count, `n` rows of
    /// mantissas, and an optional `pi` line of unscaled probabilities.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                reason: format!("missing {what}"),
            })
        };
        let parse_err = |line: usize, reason: &str| Error::Parse {
            line,
            reason: reason.to_string(),
        };

        let (line, scale) = next("scale line")?;
        let exp: i32 = scale
            .strip_prefix("scale ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| parse_err(line, "expected `scale k`"))?;
        let (line, count) = next("state count")?;
        let n: usize = count.parse().map_err(|_| parse_err(line, "expected the number of states"))?;

        let mut values = Vec::with_capacity(n * n);
        let mut halves = Vec::with_capacity(n * n);
        for _ in 0..n {
            let (line, row) = next("matrix row")?;
            let tokens: Vec<&str> = row.split_whitespace().collect();
            if tokens.len() != n {
                return Err(parse_err(line, "row length differs from the state count"));
            }
            for t in tokens {
                let (v, h) = scaled_literal(line, t, exp)?;
                values.push(v);
                halves.push(h);
            }
        }

        let (pi, pi_resolution) = match next("pi line") {
            Err(_) => (None, None),
            Ok((line, row)) => {
                let tokens: Vec<&str> = row
                    .strip_prefix("pi ")
                    .ok_or_else(|| parse_err(line, "expected `pi ...`"))?
                    .split_whitespace()
                    .collect();
                if tokens.len() != n {
                    return Err(parse_err(line, "pi length differs from the state count"));
                }
                let parsed = tokens
                    .into_iter()
                    .map(|t| scaled_literal(line, t, 0))
                    .collect::<Result<Vec<_>>>()?;
                let (v, h): (Vec<f64>, Vec<f64>) = parsed.into_iter().unzip();
                (Some(StationaryDistribution::new(v)), Some(h))
            }
        };

        let square = |data| SquareMatrix::from_row_major(n, data).expect("n * n entries");
        Ok(Golden {
            scale_exponent: exp,
            mfpt: MfptMatrix::new(square(values)),
            mfpt_resolution: square(halves),
            pi,
            pi_resolution,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestProblem {
    pub id: ProblemId,
    pub process: MarkovRenewalProcess<f64>,
    pub golden: Option<Golden>,
}

/// Load a problem by name, e.g. `"TP42"` or `"tp1_original"`.
pub fn load(id: &str) -> Result<TestProblem> {
    id.parse::<ProblemId>()?.load()
}

/// Reference passage-time matrix with its scale factor applied.
pub fn golden_mfpt(id: &str) -> Result<MfptMatrix<f64>> {
    let problem = load(id)?;
    problem
        .golden
        .map(|g| g.mfpt)
        .ok_or_else(|| Error::NoGoldenData(problem.id.to_string()))
}

/// The `TP4x` transition matrix for `epsilon = 10^-k`, with the two
/// `.1 - epsilon` entries written as exact decimal literals.
pub fn tp4_document(k: u32) -> MatrixDocument {
    assert!(k >= 1, "epsilon must be at most 0.1");
    let eps = format!("1e-{k}");
    let a = if k == 1 {
        "0".to_string()
    } else {
        format!("0.0{}", "9".repeat(k as usize - 1))
    };
    let template = [
        ["A", ".3", ".1", ".2", ".3", "E", "0", "0", "0", "0"],
        [".2", ".1", ".1", ".2", ".4", "0", "0", "0", "0", "0"],
        [".1", ".2", ".2", ".4", ".1", "0", "0", "0", "0", "0"],
        [".4", ".2", ".1", ".2", ".1", "0", "0", "0", "0", "0"],
        [".6", ".3", "0", "0", ".1", "0", "0", "0", "0", "0"],
        ["E", "0", "0", "0", "0", "A", ".2", ".2", ".4", ".1"],
        ["0", "0", "0", "0", "0", ".2", ".2", ".1", ".3", ".2"],
        ["0", "0", "0", "0", "0", ".1", ".5", "0", ".2", ".2"],
        ["0", "0", "0", "0", "0", ".5", ".2", ".1", "0", ".2"],
        ["0", "0", "0", "0", "0", ".1", ".2", ".2", ".3", ".2"],
    ];
    let literal = |t: &str| match t {
        "A" => a.parse::<f64>(),
        "E" => eps.parse::<f64>(),
        other => other.parse::<f64>(),
    };
    MatrixDocument {
        comments: Vec::new(),
        rows: template
            .iter()
            .map(|row| row.iter().map(|t| literal(t).expect("valid literal")).collect())
            .collect(),
        mu: None,
    }
}
