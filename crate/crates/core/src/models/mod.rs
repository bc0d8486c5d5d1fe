//! The concrete systems: the kink-stability potential and its periodic
//! partner, and the angular/radial two-body problem.

mod bhaduri;
mod kink;
mod printed;
mod states;
mod tables;

pub use bhaduri::{
    bhaduri_radial_problem, bhaduri_recurrence_sym, build_bhaduri_ode, build_bhaduri_ode_sym, BhaduriParams,
    RadialProblem,
};
pub use kink::{
    build_kink_heun_ode, build_kink_t_ode, heun_to_t, kink_potential, kink_potential_complex, kink_recurrence,
    kink_sectors, kink_transform, periodic_potential, sym_eps2, sym_s, ComplexValue, HeunParams, KinkParams,
    ASYMPTOTE_BOUND,
};
pub use printed::{
    diff_recurrences, printed_bhaduri, printed_kink_even, printed_kink_odd, printed_kink_q, CoeffDiff,
};
pub use states::{kink_qes_states, reconstruct_wavefunction, QesState, Sector, System, Wavefunction};
pub use tables::potential_table;

use thiserror::Error;

use crate::lab::LabError;
use crate::ode::OdeError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("INVALID_G1: g1 = {0} is below -1/4")]
    InvalidG1(String),
    #[error("BETA_OUT_OF_RANGE: beta = {0} is below 1")]
    BetaOutOfRange(f64),
    #[error("NUMERIC_OVERFLOW: {0}")]
    NumericOverflow(String),
    #[error("RESIDUAL_NONZERO: {0}")]
    ResidualNonzero(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Lab(#[from] LabError),
}
