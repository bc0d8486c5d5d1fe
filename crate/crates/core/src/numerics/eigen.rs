use serde::{Deserialize, Serialize};

use super::{build_hamiltonian, Grid, NumericsError, SymMatrix, Tolerances};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub grid: Grid,
    pub potential: String,
    pub method: String,
}

impl Spectrum {
    /// Builds the finite-difference Hamiltonian of `v` on `grid` and returns
    /// its `k` lowest eigenvalues.
    pub fn compute(
        v: &dyn Fn(f64) -> f64,
        grid: &Grid,
        potential: &str,
        k: usize,
        tol: &Tolerances,
    ) -> Result<Spectrum, NumericsError> {
        let m = build_hamiltonian(v, grid)?;
        let method = match m {
            SymMatrix::Tridiagonal { .. } => "sturm-bisection",
            _ => "jacobi",
        };
        Ok(Spectrum {
            eigenvalues: eig_sym(&m, k, tol)?,
            grid: *grid,
            potential: potential.to_string(),
            method: method.to_string(),
        })
    }
}

/// The `k` smallest eigenvalues, ascending.
pub fn eig_sym(m: &SymMatrix, k: usize, tol: &Tolerances) -> Result<Vec<f64>, NumericsError> {
    let n = m.size();
    if k > n {
        return Err(NumericsError::TooManyEigenvalues { k, n });
    }
    match m {
        SymMatrix::Tridiagonal { diag, off } => Ok(tridiagonal_eigenvalues(diag, off, k, tol.bisection_abs)),
        _ => {
            let mut all = jacobi_eigenvalues(m, tol)?;
            all.truncate(k);
            Ok(all)
        }
    }
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`
/// (negative pivots of the `LDLᵀ` factorization of `T − x`).
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// Sturm-sequence bisection for the `k` smallest eigenvalues.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64], k: usize, abs_tol: f64) -> Vec<f64> {
    let (glo, ghi) = gershgorin(diag, off);
    let mut out = Vec::with_capacity(k);
    let mut lo = glo;
    for j in 0..k {
        let mut a = lo;
        let mut b = ghi;
        while b - a > abs_tol {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(diag, off, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let ev = 0.5 * (a + b);
        out.push(ev);
        lo = a;
    }
    out
}

/// Cyclic Jacobi rotations on a dense copy; all eigenvalues, ascending.
pub fn jacobi_eigenvalues(m: &SymMatrix, tol: &Tolerances) -> Result<Vec<f64>, NumericsError> {
    let n = m.size();
    let mut a = m.to_dense();
    let scale = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = tol.jacobi_rel * scale;
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off_norm(&a) > target {
        if sweeps == tol.jacobi_max_sweeps {
            return Err(NumericsError::NoConvergence { iterations: sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    a[k * n + p] = np;
                    a[p * n + k] = np;
                    a[k * n + q] = nq;
                    a[q * n + k] = nq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Solves `(T − σ) x = b` by Gaussian elimination with partial pivoting.
fn solve_shifted(diag: &[f64], off: &[f64], sigma: f64, b: &mut [f64]) {
    let n = diag.len();
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut d: Vec<f64> = diag.iter().map(|v| v - sigma).collect();
    let mut dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            let bi = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bi - f * b[i + 1];
        }
        dl[i] = 0.0;
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

/// Unit eigenvector for the eigenvalue `lambda` by inverse iteration.
pub fn eigenvector_tridiagonal(diag: &[f64], off: &[f64], lambda: f64, tol: &Tolerances) -> Vec<f64> {
    let n = diag.len();
    let sigma = lambda + 1e-9 * lambda.abs().max(1.0);
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * (0.7 * i as f64).sin()).collect();
    for _ in 0..tol.inverse_iterations.max(1) {
        solve_shifted(diag, off, sigma, &mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    // deterministic sign: largest entry positive
    let imax = (0..n).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap_or(0);
    if v[imax] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Sign changes of `v`, ignoring entries below `threshold · max |v|`.
pub fn sign_changes(v: &[f64], threshold: f64) -> usize {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cut = threshold * max;
    let signs: Vec<bool> = v.iter().filter(|x| x.abs() > cut).map(|x| *x > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `x,v0,v1,...` rows over the unknowns of `grid`.
pub fn eigenvectors_csv(grid: &Grid, vectors: &[Vec<f64>]) -> String {
    let mut out = String::from("x");
    for k in 0..vectors.len() {
        out.push_str(&format!(",v{k}"));
    }
    out.push('\n');
    for (row, i) in grid.unknowns().enumerate() {
        out.push_str(&format!("{:.12e}", grid.x(i)));
        for v in vectors {
            out.push_str(&format!(",{:.12e}", v[row]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Boundary;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn small_matrices() {
        let d = SymMatrix::diagonal(3, &[3.0, 1.0, 2.0]);
        assert_eq!(eig_sym(&d, 3, &tol()).unwrap(), vec![1.0, 2.0, 3.0]);
        let m = SymMatrix::Dense {
            n: 2,
            a: vec![0.0, 1.0, 1.0, 0.0],
        };
        let ev = eig_sym(&m, 2, &tol()).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
        let t = SymMatrix::Tridiagonal {
            diag: vec![0.0, 0.0],
            off: vec![1.0],
        };
        let ev = eig_sym(&t, 2, &tol()).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-10 && (ev[1] - 1.0).abs() < 1e-10);
        assert!(eig_sym(&t, 3, &tol()).is_err());
    }

    #[test]
    fn particle_in_a_box() {
        let g = Grid::new(0.0, PI, 2000, Boundary::Dirichlet).unwrap();
        let s = Spectrum::compute(&|_| 0.0, &g, "zero", 3, &tol()).unwrap();
        for (k, e) in s.eigenvalues.iter().enumerate() {
            let want = ((k + 1) * (k + 1)) as f64;
            assert!((e - want).abs() < 1e-3, "{e} vs {want}");
        }
    }

    #[test]
    fn box_convergence_order() {
        let mut errs = Vec::new();
        let mut g = Grid::new(0.0, PI, 101, Boundary::Dirichlet).unwrap();
        for _ in 0..3 {
            let s = Spectrum::compute(&|_| 0.0, &g, "zero", 1, &tol()).unwrap();
            errs.push((s.eigenvalues[0] - 1.0).abs());
            g = g.halved();
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((2.0..8.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn free_rotor() {
        let g = Grid::new(0.0, 2.0 * PI, 400, Boundary::Periodic).unwrap();
        let s = Spectrum::compute(&|_| 0.0, &g, "zero", 5, &tol()).unwrap();
        let want = [0.0, 1.0, 1.0, 4.0, 4.0];
        for (e, w) in s.eigenvalues.iter().zip(want) {
            assert!((e - w).abs() < 1e-3, "{e} vs {w}");
        }
    }

    #[test]
    fn node_counts_in_a_box() {
        let g = Grid::new(0.0, PI, 500, Boundary::Dirichlet).unwrap();
        let SymMatrix::Tridiagonal { diag, off } = build_hamiltonian(&|_| 0.0, &g).unwrap() else {
            unreachable!()
        };
        let ev = tridiagonal_eigenvalues(&diag, &off, 4, 1e-10);
        for (k, e) in ev.iter().enumerate() {
            let v = eigenvector_tridiagonal(&diag, &off, *e, &tol());
            assert_eq!(sign_changes(&v, 1e-6), k);
            // residual of the eigenpair
            let n = diag.len();
            let r = (0..n)
                .map(|i| {
                    let mut s = (diag[i] - e) * v[i];
                    if i > 0 {
                        s += off[i - 1] * v[i - 1];
                    }
                    if i + 1 < n {
                        s += off[i] * v[i + 1];
                    }
                    s.abs()
                })
                .fold(0.0, f64::max);
            assert!(r < 1e-6, "residual {r}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn jacobi_matches_bisection(
            diag in prop::collection::vec(-5.0f64..5.0, 2..24),
            offs in prop::collection::vec(-3.0f64..3.0, 23),
        ) {
            let n = diag.len();
            let off = offs[..n - 1].to_vec();
            let t = SymMatrix::Tridiagonal { diag: diag.clone(), off: off.clone() };
            let a = jacobi_eigenvalues(&t, &tol()).unwrap();
            let b = tridiagonal_eigenvalues(&diag, &off, n, 1e-12);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-8, "{} vs {}", x, y);
            }
            let tr = t.trace();
            let sum: f64 = a.iter().sum();
            prop_assert!((tr - sum).abs() <= 1e-10 * tr.abs().max(1.0));
        }
    }
}
