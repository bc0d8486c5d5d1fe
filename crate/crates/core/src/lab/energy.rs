use super::LabError;
use crate::algebra::Rat;

/// `E / μ² = 1 − s²`, exact.
pub fn energy_ratio(s: &Rat) -> Rat {
    Rat::one() - s * s
}

/// `E = μ² (1 − s²)`.
pub fn energy_from_s(s: f64, mu: f64) -> f64 {
    mu * mu * (1.0 - s * s)
}

/// Nonnegative branch `s = (1 − E/μ²)^{1/2}`.
pub fn s_from_energy(e: f64, mu: f64) -> Result<f64, LabError> {
    let mu2 = mu * mu;
    if e > mu2 {
        return Err(LabError::SImaginary {
            e: e.to_string(),
            mu2: mu2.to_string(),
        });
    }
    Ok((1.0 - e / mu2).max(0.0).sqrt())
}
