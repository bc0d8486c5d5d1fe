//! Angular Heun equation and radial oscillator of the two-body problem with
//! the `g1 (r1² + r2²)/X²` interaction.

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::algebra::{MPoly, Rat};
use crate::ode::{derive_recurrence, LinearOde, OdeTerm, Recurrence, SeriesAnsatz};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhaduriParams {
    pub l: i64,
    pub mq: i64,
    pub g1: Rat,
}

impl BhaduriParams {
    pub fn new(l: i64, mq: i64, g1: Rat) -> Result<Self, ModelError> {
        if g1 < Rat::new(-1, 4) {
            return Err(ModelError::InvalidG1(g1.to_string()));
        }
        Ok(BhaduriParams { l, mq, g1 })
    }

    /// `b = |l + q|/4`.
    pub fn b(&self) -> Rat {
        Rat::new((self.l + self.mq).abs(), 4)
    }

    /// `c = |l − q|/4`.
    pub fn c(&self) -> Rat {
        Rat::new((self.l - self.mq).abs(), 4)
    }

    /// Regular branch `a = (1 + √(1 + 4 g1))/2 ≥ 1/2`.
    pub fn a_f64(&self) -> f64 {
        (1.0 + (1.0 + 4.0 * self.g1.to_f64()).sqrt()) / 2.0
    }

    /// `a` when `1 + 4 g1` is the square of a rational.
    pub fn a_exact(&self) -> Option<Rat> {
        let d = Rat::one() + Rat::int(4) * &self.g1;
        let root = rational_sqrt(&d)?;
        Some((Rat::one() + root) / Rat::int(2))
    }

    /// `a` as a rational constant, or the symbol `a` when irrational.
    pub fn a_poly(&self) -> MPoly {
        self.a_exact().map(MPoly::constant).unwrap_or_else(|| MPoly::var("a"))
    }
}

fn rational_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rat::from_bigs(n, d))
}

/// Heun's equation for `Θ(x)` multiplied through by `x`:
/// `x(1−x²)Θ″ + 2[a − (b−c)x − (a+b+c+1)x²]Θ′
///  + [((β+1)²/4 − (a+b+c+½)²)x + 2a(c−b)]Θ = 0`.
///
/// Built from the form with `a/x` and `2a(c−b)/x` terms and then cleared.
pub fn build_bhaduri_ode_sym(a: &MPoly, b: &MPoly, c: &MPoly, beta: &str) -> LinearOde {
    let x = MPoly::var("x");
    let one = MPoly::one();
    let two = Rat::int(2);
    let beta = MPoly::var(beta);
    let abc = a.add(b).add(c);
    let bracket = beta
        .add(&one)
        .pow(2)
        .scale(&Rat::new(1, 4))
        .sub(&abc.add(&MPoly::constant(Rat::new(1, 2))).pow(2));
    let terms = vec![
        OdeTerm::new(2, one.sub(&x.mul(&x))),
        OdeTerm::over_power(1, a.scale(&two), 1),
        OdeTerm::new(1, b.sub(c).add(&abc.add(&one).mul(&x)).scale(&Rat::int(-2))),
        OdeTerm::new(0, bracket),
        OdeTerm::over_power(0, a.mul(&c.sub(b)).scale(&two), 1),
    ];
    LinearOde::new("x", terms).expect("second-order ODE").cleared()
}

pub fn build_bhaduri_ode(p: &BhaduriParams, beta: &str) -> LinearOde {
    build_bhaduri_ode_sym(&p.a_poly(), &MPoly::constant(p.b()), &MPoly::constant(p.c()), beta)
}

/// Symbolic `a, b, c`.
pub fn bhaduri_recurrence_sym() -> Result<Recurrence, ModelError> {
    let ode = build_bhaduri_ode_sym(&MPoly::var("a"), &MPoly::var("b"), &MPoly::var("c"), "beta");
    Ok(derive_recurrence(&ode, &SeriesAnsatz::factorial("n"), "beta")?)
}

/// `−u″ + (R² + ((β+1)² − ¼)/R²) u = 2E u` on `(0, R_max]`, from
/// `F = u / R^{3/2}` in the four-dimensional radial oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub beta: f64,
    pub r_max: f64,
}

impl RadialProblem {
    /// `(β+1)² − 1/4`.
    pub fn centrifugal(&self) -> f64 {
        (self.beta + 1.0).powi(2) - 0.25
    }

    pub fn potential(&self, r: f64) -> f64 {
        r * r + self.centrifugal() / (r * r)
    }

    /// Eigenvalue `λ` of `−d²/dR² + V` corresponds to `E = λ/2`.
    pub fn energy_from_eigenvalue(&self, lambda: f64) -> f64 {
        lambda / 2.0
    }

    pub fn expected_energy(&self, n_r: u32) -> f64 {
        2.0 * n_r as f64 + self.beta + 2.0
    }
}

pub fn bhaduri_radial_problem(beta: f64, r_max: f64) -> Result<RadialProblem, ModelError> {
    if !(beta >= 1.0) {
        return Err(ModelError::BetaOutOfRange(beta));
    }
    if !(r_max > 0.0) {
        return Err(ModelError::InvalidParams(format!("r_max must be positive, got {r_max}")));
    }
    Ok(RadialProblem { beta, r_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bindings;
    use crate::lab::generate_sequence;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn params() {
        let q = BhaduriParams::new(3, 3, Rat::int(2)).unwrap();
        assert_eq!(q.c(), Rat::zero());
        assert_eq!(q.b(), Rat::new(3, 2));
        assert_eq!(q.a_exact(), Some(Rat::int(2)));
        assert_eq!(q.a_f64(), 2.0);
        assert!(BhaduriParams::new(0, 0, Rat::new(-1, 3)).is_err());
        let irr = BhaduriParams::new(0, 0, Rat::one()).unwrap();
        assert_eq!(irr.a_exact(), None);
        assert_eq!(irr.a_poly(), MPoly::var("a"));
        assert_eq!(BhaduriParams::new(0, 0, Rat::new(-1, 4)).unwrap().a_exact(), Some(Rat::new(1, 2)));
    }

    #[test]
    fn cleared_form() {
        let ode = build_bhaduri_ode_sym(&p("a"), &p("b"), &p("c"), "beta");
        let c = ode.polynomial_coeffs().unwrap();
        assert_eq!(c[2], p("x*(1 - x^2)"));
        assert_eq!(c[1], p("2*(a - (b - c)*x - (a + b + c + 1)*x^2)"));
        assert_eq!(c[0], p("((beta + 1)^2/4 - (a + b + c + 1/2)^2)*x + 2*a*(c - b)"));
    }

    #[test]
    fn derived_recurrence() {
        let r = bhaduri_recurrence_sym().unwrap();
        assert_eq!((r.step, r.top, r.span()), (1, 0, 2));
        assert_eq!(r.coeffs[0], p("n + 2*a - 1"));
        assert_eq!(r.coeffs[1], p("-2*(b - c)*(n + a - 1)"));
        assert_eq!(r.coeffs[2], p("(n - 1)*((beta + 1)^2/4 - (a + b + c + n - 3/2)^2)"));
    }

    #[test]
    fn first_entry() {
        let r = bhaduri_recurrence_sym().unwrap();
        for (a, b, c) in [(2, 1, 0), (3, 2, 5)] {
            let bs = bindings([("a", Rat::int(a)), ("b", Rat::int(b)), ("c", Rat::int(c))]);
            let seq = generate_sequence(&r, &bs, 1).unwrap();
            assert_eq!(seq.entries[1].degree(), Some(0));
            assert_eq!(seq.entries[1].coeff(0), Rat::int(b - c));
        }
    }

    #[test]
    fn radial() {
        let r = bhaduri_radial_problem(1.0, 10.0).unwrap();
        assert_eq!(r.centrifugal(), 15.0 / 4.0);
        assert_eq!(r.expected_energy(0), 3.0);
        assert_eq!(bhaduri_radial_problem(2.0, 10.0).unwrap().expected_energy(1), 6.0);
        assert!(matches!(bhaduri_radial_problem(0.5, 10.0), Err(ModelError::BetaOutOfRange(_))));
    }
}
