//! Mean first passage times and stationary distributions of Markov chains
//! and Markov renewal processes by subtraction-free state reduction.
//!
//! Everything is generic over [`Scalar`], implemented for `f64` and `f32`.
//! The `*64` and `*32` aliases below name the concrete instantiations.
//!
//! Indices in the API are zero-based. State numbers inside [`Error`]
//! values and in reports are one-based.

pub mod closed_form;
pub mod corpus;
pub mod diagnostics;
pub mod document;
pub mod egth;
pub mod error;
pub mod gth;
pub mod instrumented;
pub mod kohlas;
pub mod matrix;
pub mod model;
pub mod scalar;

pub use diagnostics::{
    accurate_digits, compare_precisions, compare_stationary, mfpt_residual, stationary_residual, MfptErrorReport,
    PrecisionComparison, PrecisionRun, PrecisionStudy, StationaryErrorReport,
};
pub use egth::{mfpt_egth, mfpt_egth_parallel, stationary_from_mfpt};
pub use error::{Error, Result};
pub use gth::{reduce_fully, stationary_gth, ReductionTrace};
pub use kohlas::theorem7_mfpt;
pub use matrix::SquareMatrix;
pub use model::{
    check_irreducible, mean_asymptotic_increment, recurrent_class, validate_stochastic, MarkovRenewalProcess,
    MfptMatrix, StationaryDistribution, StochasticMatrix,
};
pub use scalar::{Precision, Scalar};

pub type StochasticMatrix64 = StochasticMatrix<f64>;
pub type StochasticMatrix32 = StochasticMatrix<f32>;
pub type MarkovRenewalProcess64 = MarkovRenewalProcess<f64>;
pub type MarkovRenewalProcess32 = MarkovRenewalProcess<f32>;
pub type StationaryDistribution64 = StationaryDistribution<f64>;
pub type StationaryDistribution32 = StationaryDistribution<f32>;
pub type MfptMatrix64 = MfptMatrix<f64>;
pub type MfptMatrix32 = MfptMatrix<f32>;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeExamples;
