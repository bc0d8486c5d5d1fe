//! The kink-stability potential, its periodic partner under `x → iθ`, and
//! the polynomial ODE satisfied by `f(t)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::algebra::{MPoly, Rat};
use crate::ode::{derive_recurrence, parity_decouple, LinearOde, OdeTerm, Recurrence, SeriesAnsatz};

/// Beyond this `|Re(μx)|` the complex evaluator returns the `μ²` asymptote.
pub const ASYMPTOTE_BOUND: f64 = 1400.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KinkParams {
    pub mu: f64,
    pub eps2: Rat,
}

impl KinkParams {
    pub fn new(mu: f64, eps2: Rat) -> Result<Self, ModelError> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(ModelError::InvalidParams(format!("mu must be positive, got {mu}")));
        }
        if !eps2.is_positive() {
            return Err(ModelError::InvalidParams(format!("eps2 must be positive, got {eps2}")));
        }
        Ok(KinkParams { mu, eps2 })
    }

    pub fn eps2_f64(&self) -> f64 {
        self.eps2.to_f64()
    }

    /// `1 + 1/ε²`.
    fn d0(&self) -> f64 {
        1.0 + 1.0 / self.eps2_f64()
    }

    /// `(a4, a2, a0)` of the numerator `a4 u² + a2 u + a0`, `u = sinh²`.
    fn numerator(&self) -> (f64, f64, f64) {
        let e = self.eps2_f64();
        (8.0, -4.0 * (5.0 / e - 1.0), 2.0 * (1.0 / (e * e) - 1.0 / e - 2.0))
    }
}

/// `μ² [a4 u² + a2 u + a0] / (8 (d0 + u)²)`, rescaled by `1/u²` for large
/// `|u|` so that overflow of `u` yields the `μ²` limit.
fn rational_in_u(p: &KinkParams, u: Complex64) -> Complex64 {
    let (a4, a2, a0) = p.numerator();
    let d0 = p.d0();
    let mu2 = p.mu * p.mu;
    if u.norm() > 1.0 {
        let w = if u.is_finite() { u.inv() } else { Complex64::new(0.0, 0.0) };
        let num = a4 + a2 * w + a0 * w * w;
        let den = 1.0 + d0 * w;
        mu2 * num / (8.0 * den * den)
    } else {
        let num = a4 * u * u + a2 * u + a0;
        let den = d0 + u;
        mu2 * num / (8.0 * den * den)
    }
}

/// Kink-stability potential on the real line.
pub fn kink_potential(x: f64, p: &KinkParams) -> f64 {
    let sh = (p.mu * x / 2.0).sinh();
    rational_in_u(p, Complex64::new(sh * sh, 0.0)).re
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexValue {
    pub value: Complex64,
    /// True when the `μ²` asymptote was returned instead of evaluating.
    pub asymptotic: bool,
}

/// Analytic continuation of the kink potential to complex `z`.
pub fn kink_potential_complex(z: Complex64, p: &KinkParams) -> Result<ComplexValue, ModelError> {
    if (p.mu * z.re).abs() > ASYMPTOTE_BOUND {
        return Ok(ComplexValue {
            value: Complex64::new(p.mu * p.mu, 0.0),
            asymptotic: true,
        });
    }
    let sh = (p.mu * z / 2.0).sinh();
    let v = rational_in_u(p, sh * sh);
    if !v.is_finite() {
        return Err(ModelError::NumericOverflow(format!("potential at {z} is not finite")));
    }
    Ok(ComplexValue {
        value: v,
        asymptotic: false,
    })
}

/// Periodic potential obtained from the kink potential by `x → iθ`.
pub fn periodic_potential(theta: f64, p: &KinkParams) -> f64 {
    let sn = (p.mu * theta / 2.0).sin();
    let s2 = sn * sn;
    let (a4, a2, a0) = p.numerator();
    let den = p.d0() - s2;
    -p.mu * p.mu * (a4 * s2 * s2 - a2 * s2 + a0) / (8.0 * den * den)
}

/// `y = sinh²/(1 + 1/ε² + sinh²)` and `t = (y + ε²)^{1/2}`.
pub fn kink_transform(x: f64, p: &KinkParams) -> (f64, f64) {
    let sh = (p.mu * x / 2.0).sinh();
    let u = sh * sh;
    let y = if u.is_finite() { u / (p.d0() + u) } else { 1.0 };
    (y, (y + p.eps2_f64()).sqrt())
}

/// Heun parameters `α`, `β_H`, `q_H` as polynomials in `s` and `ε²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeunParams {
    pub alpha: MPoly,
    pub beta_h: MPoly,
    pub q_h: MPoly,
}

impl HeunParams {
    pub fn new(s: &MPoly, eps2: &MPoly) -> Self {
        let half = |k: i64| MPoly::constant(Rat::new(k, 2));
        let alpha = half(-5).sub(s);
        let beta_h = half(3).sub(s);
        let one = MPoly::one();
        let q_h = one
            .sub(&s.mul(s))
            .mul(&one.add(eps2))
            .sub(&s.mul(eps2).scale(&Rat::new(1, 2)))
            .sub(&one.sub(&eps2.scale(&Rat::int(2))).scale(&Rat::new(1, 4)));
        HeunParams { alpha, beta_h, q_h }
    }
}

/// Symbolic `s` and `ε²`.
pub fn sym_s() -> MPoly {
    MPoly::var("s")
}

pub fn sym_eps2() -> MPoly {
    MPoly::var("eps2")
}

/// `(t²−ε²)(t²−1−ε²) f″ + [(t²−1−ε²) + 2(1+2s)(t²−ε²)] t f′
///  + [4αβ_H t² − 4(αβ_H ε² + q_H)] f = 0`.
pub fn build_kink_t_ode(s: &MPoly, eps2: &MPoly) -> LinearOde {
    let t = MPoly::var("t");
    let t2 = t.mul(&t);
    let one = MPoly::one();
    let a = t2.sub(eps2);
    let b = t2.sub(&one).sub(eps2);
    let h = HeunParams::new(s, eps2);
    let ab = h.alpha.mul(&h.beta_h);
    let c2 = a.mul(&b);
    let c1 = b
        .add(&one.add(&s.scale(&Rat::int(2))).scale(&Rat::int(2)).mul(&a))
        .mul(&t);
    let c0 = ab
        .mul(&t2)
        .sub(&ab.mul(eps2).add(&h.q_h))
        .scale(&Rat::int(4));
    LinearOde::new("t", vec![OdeTerm::new(2, c2), OdeTerm::new(1, c1), OdeTerm::new(0, c0)])
        .expect("second-order ODE")
}

/// Heun's equation in `y`, cleared of denominators:
/// `y(y−1)(y+ε²) f″ + [½(y−1)(y+ε²) + (1+2s) y(y+ε²) + ½ y(y−1)] f′
///  + (αβ_H y − q_H) f = 0`.
pub fn build_kink_heun_ode(s: &MPoly, eps2: &MPoly) -> LinearOde {
    let y = MPoly::var("y");
    let one = MPoly::one();
    let ym1 = y.sub(&one);
    let ype = y.add(eps2);
    let half = Rat::new(1, 2);
    let h = HeunParams::new(s, eps2);
    let c2 = y.mul(&ym1).mul(&ype);
    let c1 = ym1
        .mul(&ype)
        .scale(&half)
        .add(&one.add(&s.scale(&Rat::int(2))).mul(&y).mul(&ype))
        .add(&y.mul(&ym1).scale(&half));
    let c0 = h.alpha.mul(&h.beta_h).mul(&y).sub(&h.q_h);
    LinearOde::new("y", vec![OdeTerm::new(2, c2), OdeTerm::new(1, c1), OdeTerm::new(0, c0)])
        .expect("second-order ODE")
}

/// Applies `y = t² − ε²` to a second-order ODE in `y` and multiplies by 4:
/// `d/dy = (1/2t) d/dt`, `d²/dy² = (1/4t²) d²/dt² − (1/4t³) d/dt`.
pub fn heun_to_t(heun: &LinearOde, eps2: &MPoly) -> Result<LinearOde, ModelError> {
    let c = heun.polynomial_coeffs()?;
    if c.len() != 3 || heun.indep != "y" {
        return Err(ModelError::InvalidParams("expected a second-order ODE in y".into()));
    }
    let t = MPoly::var("t");
    let y_of_t = t.mul(&t).sub(eps2);
    let sub = |p: &MPoly| p.compose("y", &y_of_t);
    let (h0, h1, h2) = (sub(&c[0]), sub(&c[1]), sub(&c[2]));
    let not_poly = || ModelError::InvalidParams("t-map leaves a pole at t = 0".into());
    let d2 = h2.div_var_power("t", 2).ok_or_else(not_poly)?;
    let d1 = h1
        .mul(&t.mul(&t))
        .scale(&Rat::int(2))
        .sub(&h2)
        .div_var_power("t", 3)
        .ok_or_else(not_poly)?;
    let d0 = h0.scale(&Rat::int(4));
    Ok(LinearOde::new("t", vec![OdeTerm::new(2, d2), OdeTerm::new(1, d1), OdeTerm::new(0, d0)])?)
}

/// Step-2 recurrence for `Q_n` from the `t`-ODE with factorial scaling.
pub fn kink_recurrence() -> Result<Recurrence, ModelError> {
    let ode = build_kink_t_ode(&sym_s(), &sym_eps2());
    Ok(derive_recurrence(&ode, &SeriesAnsatz::factorial("n"), "s")?)
}

/// `(even, odd)` sectors: `P_m = Q_{2m}` and `P_m = Q_{2m+1}`.
pub fn kink_sectors() -> Result<(Recurrence, Recurrence), ModelError> {
    Ok(parity_decouple(&kink_recurrence()?, "m")?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> KinkParams {
        KinkParams::new(1.0, Rat::new(1, 2)).unwrap()
    }

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn potential_values() {
        assert!(kink_potential(0.0, &half()).abs() < 1e-15);
        assert!(periodic_potential(0.0, &half()).abs() < 1e-15);
        for x in [40.0, 400.0, 4000.0, -4000.0] {
            assert!((kink_potential(x, &half()) - 1.0).abs() < 1e-12);
        }
        let big = kink_potential_complex(Complex64::new(1e4, 1.0), &half()).unwrap();
        assert!(big.asymptotic);
        assert_eq!(big.value, Complex64::new(1.0, 0.0));
        let p2 = KinkParams::new(2.0, Rat::new(1, 3)).unwrap();
        let period = 2.0 * std::f64::consts::PI / p2.mu;
        assert!((periodic_potential(0.3, &p2) - periodic_potential(0.3 + period, &p2)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_periodic_potential() {
        // μ = 1, ε² = 1/2: V = −(8S² + 36S)/(8(3 − S)²)
        for k in 0..50 {
            let th = k as f64 * 0.13;
            let s = (th / 2.0).sin().powi(2);
            let v = -(8.0 * s * s + 36.0 * s) / (8.0 * (3.0 - s).powi(2));
            assert!((periodic_potential(th, &half()) - v).abs() < 1e-14);
        }
    }

    #[test]
    fn anti_isospectral_pointwise() {
        let p = half();
        let th = std::f64::consts::FRAC_PI_2;
        let v = kink_potential_complex(Complex64::new(0.0, th), &p).unwrap().value;
        assert!((v.re + periodic_potential(th, &p)).abs() < 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn transform_limits() {
        let p = half();
        let (y, t) = kink_transform(0.0, &p);
        assert_eq!(y, 0.0);
        assert!((t - 0.5f64.sqrt()).abs() < 1e-15);
        let (y, t) = kink_transform(1e3, &p);
        assert!((y - 1.0).abs() < 1e-12);
        assert!((t - 1.5f64.sqrt()).abs() < 1e-12);
        let mut last = -1.0;
        for k in 0..200 {
            let (y, _) = kink_transform(k as f64 * 0.1, &p);
            assert!(y > last && (0.0..1.0).contains(&y));
            last = y;
        }
    }

    #[test]
    fn heun_params() {
        let h = HeunParams::new(&sym_s(), &sym_eps2());
        assert_eq!(h.alpha, p("-5/2 - s"));
        assert_eq!(h.beta_h, p("3/2 - s"));
        assert_eq!(h.q_h, p("(1 - s^2)*(1 + eps2) - s*eps2/2 - (1 - 2*eps2)/4"));
    }

    #[test]
    fn zero_mode_constant_term() {
        let ode = build_kink_t_ode(&MPoly::one(), &MPoly::constant(Rat::new(1, 2)));
        let c0 = ode.polynomial_coeffs().unwrap()[0].clone();
        let constant = c0.coeffs_in("t")[0].clone();
        assert_eq!(constant, MPoly::constant(Rat::new(9, 2)));
    }

    #[test]
    fn heun_form_consistency() {
        let s = sym_s();
        let e = sym_eps2();
        let mapped = heun_to_t(&build_kink_heun_ode(&s, &e), &e).unwrap();
        let direct = build_kink_t_ode(&s, &e);
        assert_eq!(mapped.polynomial_coeffs().unwrap(), direct.polynomial_coeffs().unwrap());
    }

    #[test]
    fn derived_trailing_factorization() {
        let r = kink_recurrence().unwrap();
        assert_eq!((r.step, r.span(), r.top), (2, 2, 2));
        assert_eq!(r.coeffs[0], p("eps2*(1 + eps2)"));
        assert_eq!(r.coeffs[2], p("n*(n-1)*(n + 2*s - 5)*(n + 2*s + 3)"));
        assert_eq!(r.factored()[2], "n*(n - 1)*(n + 2*s - 5)*(n + 2*s + 3)");
    }
}
