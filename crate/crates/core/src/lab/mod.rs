//! Polynomial families generated by recurrences: generation, the Favard
//! normal-form check, moment-functional Gram matrices and QES truncation.

mod energy;
mod favard;
mod generate;
mod moments;
mod truncation;

pub use energy::{energy_from_s, energy_ratio, s_from_energy};
pub use favard::{favard_check, favard_check_with, FavardOptions, FavardReport, Violation, ViolationCode};
pub use generate::{generate_at, generate_sequence};
pub use moments::{
    default_probe_grid, gram_matrix, moments_from_sequence, probe_orthogonality, GramMatrix, MomentFunctional,
    OrthogonalityProbe, PaddedFunctional,
};
pub use truncation::{truncation_scan, NumericCandidate, TruncationRecord, TruncationResult};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::ode::PolySequence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("WRONG_SHAPE: {0}")]
    WrongShape(String),
    #[error("LEADING_ZERO_AT: leading coefficient vanishes at n = {n}")]
    LeadingZeroAt { n: usize, partial: PolySequence },
    #[error("leading coefficient at n = {n} depends on the spectral variable")]
    LeadNotConstant { n: usize },
    #[error("UNBOUND_PARAMETER: {0}")]
    UnboundParameter(String),
    #[error("DEGREE_DEFECT: deg P_{n} != {n}")]
    DegreeDefect { n: usize },
    #[error("INSUFFICIENT_MOMENTS: need {need}, have {have}")]
    InsufficientMoments { need: usize, have: usize },
    #[error("S_IMAGINARY: E = {e} exceeds mu^2 = {mu2}")]
    SImaginary { e: String, mu2: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
