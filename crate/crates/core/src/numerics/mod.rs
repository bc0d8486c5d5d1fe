//! Floating-point verification: finite-difference Hamiltonians, symmetric
//! eigensolvers and pointwise residuals.

mod eigen;
mod grid;
mod hamiltonian;
mod residual;

pub use eigen::{
    count_below, eig_sym, eigenvector_tridiagonal, eigenvectors_csv, jacobi_eigenvalues, sign_changes,
    tridiagonal_eigenvalues, Spectrum,
};
pub use grid::{Boundary, Grid};
pub use hamiltonian::{build_hamiltonian, SymMatrix};
pub use residual::{pointwise_residual, richardson_refine, ResidualReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("NONFINITE_POTENTIAL at x = {x}")]
    NonfinitePotential { x: f64 },
    #[error("NO_CONVERGENCE after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("DEGENERATE_PSI: max |psi| = {max_abs} on the grid")]
    DegeneratePsi { max_abs: f64 },
    #[error("MISMATCHED_PROBLEMS: {0}")]
    MismatchedProblems(String),
    #[error("requested {k} eigenvalues of a {n}x{n} matrix")]
    TooManyEigenvalues { k: usize, n: usize },
}

/// Every numerical tolerance in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute width of the bisection bracket.
    pub bisection_abs: f64,
    /// Jacobi stops when the off-diagonal Frobenius norm drops below this
    /// times the Frobenius norm of the input.
    pub jacobi_rel: f64,
    pub jacobi_max_sweeps: usize,
    pub inverse_iterations: usize,
    /// Entries below this fraction of the largest are ignored when
    /// counting sign changes.
    pub node_threshold: f64,
    /// `max |psi|` below this is degenerate.
    pub degenerate_psi: f64,
    /// Relative agreement of grid spacings for Richardson extrapolation.
    pub spacing_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bisection_abs: 1e-10,
            jacobi_rel: 1e-12,
            jacobi_max_sweeps: 100,
            inverse_iterations: 4,
            node_threshold: 1e-6,
            degenerate_psi: 1e-300,
            spacing_rel: 1e-9,
        }
    }
}
