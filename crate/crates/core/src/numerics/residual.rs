use serde::{Deserialize, Serialize};

use super::{Boundary, Grid, NumericsError, Spectrum, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `max |−ψ″ + Vψ − Eψ| / max |ψ|`.
    pub max_rel: f64,
    pub max_abs_psi: f64,
    /// Where the largest residual occurs.
    pub worst_x: f64,
    pub points: usize,
}

/// Residual of `−ψ″ + Vψ = Eψ` with a fourth-order stencil for `ψ″`.
///
/// Dirichlet grids skip the two points nearest each end so the stencil stays
/// inside the interval; periodic grids use every point.
pub fn pointwise_residual(
    psi: &dyn Fn(f64) -> f64,
    e: f64,
    v: &dyn Fn(f64) -> f64,
    g: &Grid,
    tol: &Tolerances,
) -> Result<ResidualReport, NumericsError> {
    let h = g.h();
    let idx = match g.boundary {
        Boundary::Dirichlet => 2..g.n - 2,
        Boundary::Periodic => 0..g.n,
    };
    let max_abs_psi = g.points().iter().fold(0.0f64, |m, &x| m.max(psi(x).abs()));
    if !(max_abs_psi > tol.degenerate_psi) {
        return Err(NumericsError::DegeneratePsi { max_abs: max_abs_psi });
    }
    let mut worst = 0.0f64;
    let mut worst_x = g.lo;
    let points = idx.len();
    for i in idx {
        let x = g.x(i);
        let p0 = psi(x);
        let d2 = (-psi(x + 2.0 * h) + 16.0 * psi(x + h) - 30.0 * p0 + 16.0 * psi(x - h) - psi(x - 2.0 * h))
            / (12.0 * h * h);
        let vx = v(x);
        if !vx.is_finite() {
            return Err(NumericsError::NonfinitePotential { x });
        }
        let r = (-d2 + (vx - e) * p0).abs();
        if r > worst {
            worst = r;
            worst_x = x;
        }
    }
    Ok(ResidualReport {
        max_rel: worst / max_abs_psi,
        max_abs_psi,
        worst_x,
        points,
    })
}

/// `E* = (4 E_{h/2} − E_h)/3` per eigenvalue.
pub fn richardson_refine(coarse: &Spectrum, fine: &Spectrum, tol: &Tolerances) -> Result<Spectrum, NumericsError> {
    let (gc, gf) = (&coarse.grid, &fine.grid);
    let mismatch = |msg: String| Err(NumericsError::MismatchedProblems(msg));
    if coarse.potential != fine.potential {
        return mismatch(format!("potentials {} and {}", coarse.potential, fine.potential));
    }
    if gc.boundary != gf.boundary || gc.lo != gf.lo || gc.hi != gf.hi {
        return mismatch("grids cover different problems".into());
    }
    if coarse.eigenvalues.len() != fine.eigenvalues.len() {
        return mismatch(format!(
            "{} and {} eigenvalues",
            coarse.eigenvalues.len(),
            fine.eigenvalues.len()
        ));
    }
    if coarse == fine {
        return Ok(fine.clone());
    }
    let ratio = gc.h() / gf.h();
    if (ratio - 2.0).abs() > tol.spacing_rel * 2.0 {
        return mismatch(format!("spacing ratio {ratio}, expected 2"));
    }
    let eigenvalues = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    Ok(Spectrum {
        eigenvalues,
        grid: *gf,
        potential: fine.potential.clone(),
        method: format!("{}+richardson", fine.method),
    })
}
