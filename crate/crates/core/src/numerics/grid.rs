use serde::{Deserialize, Serialize};

use super::NumericsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// `N` points including both endpoints, `ψ = 0` at the endpoints.
    Dirichlet,
    /// `N` points on `[lo, hi)`, `hi` identified with `lo`.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub boundary: Boundary,
}

impl Grid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(lo: f64, hi: f64, n: usize, boundary: Boundary) -> Result<Self, NumericsError> {
        if n < Self::MIN_POINTS {
            return Err(NumericsError::InvalidGrid(format!("N = {n} < {}", Self::MIN_POINTS)));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(NumericsError::InvalidGrid(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Grid { lo, hi, n, boundary })
    }

    pub fn h(&self) -> f64 {
        match self.boundary {
            Boundary::Dirichlet => (self.hi - self.lo) / (self.n - 1) as f64,
            Boundary::Periodic => (self.hi - self.lo) / self.n as f64,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.h()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Indices carrying unknowns: interior points for Dirichlet, all for
    /// periodic.
    pub fn unknowns(&self) -> std::ops::Range<usize> {
        match self.boundary {
            Boundary::Dirichlet => 1..self.n - 1,
            Boundary::Periodic => 0..self.n,
        }
    }

    /// Same interval with half the spacing.
    pub fn halved(&self) -> Grid {
        let n = match self.boundary {
            Boundary::Dirichlet => 2 * self.n - 1,
            Boundary::Periodic => 2 * self.n,
        };
        Grid { n, ..*self }
    }
}
