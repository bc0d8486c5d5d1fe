//! Closed-form QES states of the kink problem and its periodic partner.

use serde::{Deserialize, Serialize};

use super::kink::{build_kink_t_ode, kink_sectors, KinkParams};
use super::ModelError;
use crate::algebra::{Bindings, MPoly, Rat, UPoly};
use crate::lab::{energy_ratio, generate_sequence, truncation_scan};
use crate::ode::exact_residual;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Line,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QesState {
    pub system: System,
    pub sector: Sector,
    pub s: Rat,
    pub eps2: Rat,
    /// `E / μ²`.
    pub energy_ratio: Rat,
    /// Truncation index in the sector.
    pub m: usize,
    /// `f(t)`.
    pub series: UPoly,
    pub description: String,
}

impl QesState {
    pub fn energy(&self, mu: f64) -> f64 {
        self.energy_ratio.to_f64() * mu * mu
    }

    /// Exact residual of `f` in the `t`-equation.
    pub fn residual(&self) -> MPoly {
        let ode = build_kink_t_ode(&MPoly::constant(self.s.clone()), &MPoly::constant(self.eps2.clone()));
        exact_residual(&ode, &self.series, &Bindings::new()).expect("all parameters bound")
    }

    /// Same `f` and `s` seen through `x → iθ`: the energy changes sign.
    pub fn periodic_partner(&self) -> QesState {
        let mut out = self.clone();
        out.system = System::Periodic;
        out.energy_ratio = -&self.energy_ratio;
        out.description = format!("{} continued to x = i*theta", self.description);
        out
    }
}

fn build_f(entries: &[UPoly], s: &Rat, m: usize, sector: Sector) -> UPoly {
    let offset = if sector == Sector::Odd { 1 } else { 0 };
    let mut coeffs = vec![Rat::zero(); 2 * m + 1 + offset];
    // Q_n t^n / n! with n = 2j + offset
    for (j, e) in entries.iter().enumerate().take(m + 1) {
        let n = 2 * j + offset;
        let nf: Rat = (1..=n as i64).map(Rat::int).product();
        coeffs[n] = e.eval(s) / nf;
    }
    UPoly::new("t", coeffs)
}

/// QES states of the line problem at `ε²`, found by scanning both parity
/// sectors for truncation points `s ∈ [0, 2]` with `M ≤ m_max`.
pub fn kink_qes_states(eps2: &Rat, m_max: usize) -> Result<Vec<QesState>, ModelError> {
    let (even, odd) = kink_sectors()?;
    let b: Bindings = [("eps2".to_string(), eps2.clone())].into_iter().collect();
    let mut out = Vec::new();
    for (sector, rec) in [(Sector::Even, even), (Sector::Odd, odd)] {
        let scan = truncation_scan(&rec, &b, m_max, &Rat::zero(), &Rat::int(2))?;
        let seq = generate_sequence(&rec, &b, m_max + 2)?;
        for (m, s) in scan.points() {
            let series = build_f(&seq.entries, &s, m, sector);
            let e = energy_ratio(&s);
            out.push(QesState {
                system: System::Line,
                sector,
                s: s.clone(),
                eps2: eps2.clone(),
                energy_ratio: e.clone(),
                m,
                description: format!("psi = (1-y)^({s}) * ({series}), t = sqrt(y + {eps2}), E/mu^2 = {e}"),
                series,
            });
        }
    }
    out.sort_by(|a, b| a.energy_ratio.cmp(&b.energy_ratio));
    Ok(out)
}

/// `ψ(x) = (1 − y)^s f(t)` on the line, or its continuation to `x = iθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub system: System,
    pub mu: f64,
    pub eps2: f64,
    pub s: f64,
    pub f: UPoly,
}

impl Wavefunction {
    pub fn eval(&self, x: f64) -> f64 {
        let d0 = 1.0 + 1.0 / self.eps2;
        let half = self.mu * x / 2.0;
        match self.system {
            System::Line => {
                let sh = half.sinh();
                let u = sh * sh;
                if !u.is_finite() {
                    return 0.0;
                }
                let one_minus_y = d0 / (d0 + u);
                let t = (u / (d0 + u) + self.eps2).sqrt();
                one_minus_y.powf(self.s) * self.f.eval_f64(t)
            }
            System::Periodic => {
                // y = −S/D, 1 − y = d0/D, t = cos(μθ/2)·((1+ε²)/D)^{1/2}
                let sn = half.sin();
                let d = d0 - sn * sn;
                let t = half.cos() * ((1.0 + self.eps2) / d).sqrt();
                (d0 / d).powf(self.s) * self.f.eval_f64(t)
            }
        }
    }
}

/// Refuses states whose series does not solve the `t`-equation exactly.
pub fn reconstruct_wavefunction(state: &QesState, p: &KinkParams) -> Result<Wavefunction, ModelError> {
    if state.eps2 != p.eps2 {
        return Err(ModelError::InvalidParams(format!(
            "state built for eps2 = {}, parameters give {}",
            state.eps2, p.eps2
        )));
    }
    let r = state.residual();
    if !r.is_zero() {
        return Err(ModelError::ResidualNonzero(r.to_string()));
    }
    Ok(Wavefunction {
        system: state.system,
        mu: p.mu,
        eps2: p.eps2_f64(),
        s: state.s.to_f64(),
        f: state.series.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_states(eps2: Rat) -> Vec<QesState> {
        kink_qes_states(&eps2, 6).unwrap()
    }

    #[test]
    fn zero_mode_for_every_eps2() {
        for e in [Rat::new(1, 3), Rat::new(1, 2), Rat::int(2)] {
            let states = line_states(e.clone());
            let ground = states.iter().find(|s| s.s == Rat::one()).expect("s = 1 state");
            assert_eq!(ground.sector, Sector::Odd);
            assert_eq!(ground.series, UPoly::x("t"));
            assert_eq!(ground.energy_ratio, Rat::zero());
        }
    }

    #[test]
    fn second_excited_only_at_half() {
        let states = line_states(Rat::new(1, 2));
        let st = states.iter().find(|s| s.s == Rat::new(1, 2)).expect("s = 1/2 state");
        assert_eq!(st.sector, Sector::Even);
        assert_eq!(st.series, UPoly::new("t", vec![Rat::one(), Rat::zero(), Rat::new(-4, 3)]));
        assert_eq!(st.energy_ratio, Rat::new(3, 4));
        for e in [Rat::new(1, 3), Rat::one()] {
            assert!(line_states(e).iter().all(|s| s.sector == Sector::Odd));
        }
    }

    #[test]
    fn closed_forms() {
        let p = KinkParams::new(1.3, Rat::new(1, 2)).unwrap();
        let states = line_states(p.eps2.clone());
        let psi0 = reconstruct_wavefunction(&states[0], &p).unwrap();
        let psi2 = reconstruct_wavefunction(&states[1], &p).unwrap();
        let chi2 = reconstruct_wavefunction(&states[0].periodic_partner(), &p).unwrap();
        let chi0 = reconstruct_wavefunction(&states[1].periodic_partner(), &p).unwrap();
        for k in -40..40 {
            let x = k as f64 * 0.17;
            let (y, _) = super::super::kink::kink_transform(x, &p);
            let r0 = (1.0 - y) * (y + 0.5).sqrt();
            let r2 = (1.0 - y).sqrt() * (1.0 - 4.0 * y) / 3.0;
            assert!((psi0.eval(x) - r0).abs() < 1e-13);
            assert!((psi2.eval(x) - r2).abs() < 1e-13);
            let sn2 = (p.mu * x / 2.0).sin().powi(2);
            let c0 = (1.0 + sn2) / (3.0 - sn2).powf(1.5);
            let c2 = (p.mu * x / 2.0).cos() / (3.0 - sn2).powf(1.5);
            // fixed normalizations: χ0 = √3·c0, χ2 = 3·(3/2)^{1/2}·c2
            assert!((chi0.eval(x) - 3f64.sqrt() * c0).abs() < 1e-12);
            assert!((chi2.eval(x) - 3.0 * 1.5f64.sqrt() * c2).abs() < 1e-12);
        }
    }

    #[test]
    fn unverified_state_rejected() {
        let p = KinkParams::new(1.0, Rat::new(1, 2)).unwrap();
        let mut st = line_states(p.eps2.clone())[0].clone();
        st.s = Rat::new(1, 2);
        assert!(matches!(reconstruct_wavefunction(&st, &p), Err(ModelError::ResidualNonzero(_))));
    }
}
