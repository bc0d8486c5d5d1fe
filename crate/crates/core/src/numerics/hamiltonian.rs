use serde::{Deserialize, Serialize};

use super::{Boundary, Grid, NumericsError};

/// Real symmetric matrices in the three layouts the solvers use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymMatrix {
    Tridiagonal { diag: Vec<f64>, off: Vec<f64> },
    /// Tridiagonal plus the `(0, n−1)` corner entry.
    CyclicTridiagonal { diag: Vec<f64>, off: Vec<f64>, corner: f64 },
    /// Row-major `n × n`.
    Dense { n: usize, a: Vec<f64> },
}

impl SymMatrix {
    pub fn size(&self) -> usize {
        match self {
            SymMatrix::Tridiagonal { diag, .. } | SymMatrix::CyclicTridiagonal { diag, .. } => diag.len(),
            SymMatrix::Dense { n, .. } => *n,
        }
    }

    pub fn diagonal(n: usize, d: &[f64]) -> SymMatrix {
        let mut a = vec![0.0; n * n];
        for (i, v) in d.iter().enumerate() {
            a[i * n + i] = *v;
        }
        SymMatrix::Dense { n, a }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.size();
        match self {
            SymMatrix::Dense { a, .. } => a.clone(),
            SymMatrix::Tridiagonal { diag, off } | SymMatrix::CyclicTridiagonal { diag, off, .. } => {
                let mut a = vec![0.0; n * n];
                for i in 0..n {
                    a[i * n + i] = diag[i];
                }
                for (i, v) in off.iter().enumerate() {
                    a[i * n + i + 1] = *v;
                    a[(i + 1) * n + i] = *v;
                }
                if let SymMatrix::CyclicTridiagonal { corner, .. } = self {
                    a[n - 1] += corner;
                    a[(n - 1) * n] += corner;
                }
                a
            }
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            SymMatrix::Tridiagonal { diag, .. } | SymMatrix::CyclicTridiagonal { diag, .. } => diag.iter().sum(),
            SymMatrix::Dense { n, a } => (0..*n).map(|i| a[i * n + i]).sum(),
        }
    }
}

/// `−d²/dx² + V` by second-order central differences on the unknowns of `g`.
pub fn build_hamiltonian(v: &dyn Fn(f64) -> f64, g: &Grid) -> Result<SymMatrix, NumericsError> {
    let h = g.h();
    let k = 1.0 / (h * h);
    let diag = g
        .unknowns()
        .map(|i| {
            let x = g.x(i);
            let vx = v(x);
            if vx.is_finite() {
                Ok(2.0 * k + vx)
            } else {
                Err(NumericsError::NonfinitePotential { x })
            }
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let off = vec![-k; diag.len() - 1];
    Ok(match g.boundary {
        Boundary::Dirichlet => SymMatrix::Tridiagonal { diag, off },
        Boundary::Periodic => SymMatrix::CyclicTridiagonal { diag, off, corner: -k },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts() {
        let g = Grid::new(0.0, 1.0, 16, Boundary::Periodic).unwrap();
        let m = build_hamiltonian(&|_| 0.0, &g).unwrap();
        let a = m.to_dense();
        let n = m.size();
        assert_eq!(n, 16);
        for i in 0..n {
            let row: f64 = (0..n).map(|j| a[i * n + j]).sum();
            assert!(row.abs() < 1e-9);
            for j in 0..n {
                assert_eq!(a[i * n + j], a[j * n + i]);
            }
        }
        let d = Grid::new(0.0, 1.0, 16, Boundary::Dirichlet).unwrap();
        assert_eq!(build_hamiltonian(&|_| 0.0, &d).unwrap().size(), 14);
    }

    #[test]
    fn nonfinite() {
        let g = Grid::new(0.0, 1.0, 16, Boundary::Periodic).unwrap();
        assert!(matches!(
            build_hamiltonian(&|x| 1.0 / x, &g),
            Err(NumericsError::NonfinitePotential { .. })
        ));
    }
}
