//! Series substitution into a polynomial-coefficient ODE.
//!
//! For a term `c_p x^p f^(k)` and `f = Σ a_m x^m` the coefficient of `x^N`
//! is `c_p · (N−p+k)!/(N−p)! · a_{N−p+k}` (plain scaling) or, for
//! `f = Σ P_m x^m / m!` after multiplying the whole relation by `N!`,
//! `c_p · N!/(N−p)! · P_{N−p+k}` (factorial scaling). Collecting by the
//! shift `h = k − p` gives the recurrence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{LinearOde, OdeError, Recurrence};
use crate::algebra::{Bindings, MPoly, Rat, UPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    /// `f = Σ a_n x^n`
    Plain,
    /// `f = Σ P_n x^n / n!`
    Factorial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesAnsatz {
    pub scaling: Scaling,
    pub index: String,
}

impl SeriesAnsatz {
    pub fn plain(index: &str) -> Self {
        SeriesAnsatz {
            scaling: Scaling::Plain,
            index: index.to_string(),
        }
    }

    pub fn factorial(index: &str) -> Self {
        SeriesAnsatz {
            scaling: Scaling::Factorial,
            index: index.to_string(),
        }
    }
}

/// `x (x−1) ··· (x−k+1)`
pub fn falling_factorial(x: &MPoly, k: u32) -> MPoly {
    (0..k).fold(MPoly::one(), |acc, i| acc.mul(&x.sub(&MPoly::int(i as i64))))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Derives the recurrence for the series coefficients of `ode`.
///
/// Indexing: a step-1 result is labelled by its highest index (`top = 0`);
/// a result with step `d > 1` keeps `n` equal to the collected power of the
/// independent variable, so `top` is the largest shift. The overall sign is
/// chosen so the leading coefficient has a positive leading rational.
pub fn derive_recurrence(
    ode: &LinearOde,
    ansatz: &SeriesAnsatz,
    spectral: &str,
) -> Result<Recurrence, OdeError> {
    ode.validate()?;
    let coeffs = ode.polynomial_coeffs()?;
    let big_n = MPoly::var(&ansatz.index);
    if ode.parameters().contains(&ansatz.index) {
        return Err(OdeError::IndexClash(ansatz.index.clone()));
    }

    let mut by_shift: BTreeMap<i64, MPoly> = BTreeMap::new();
    for (k, c) in coeffs.iter().enumerate() {
        for (p, a) in c.coeffs_in(&ode.indep).into_iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (k, p) = (k as i64, p as i64);
            let h = k - p;
            let weight = match ansatz.scaling {
                Scaling::Plain => {
                    let top = big_n.add(&MPoly::int(h));
                    falling_factorial(&top, k as u32)
                }
                Scaling::Factorial => falling_factorial(&big_n, p as u32),
            };
            let e = by_shift.entry(h).or_default();
            *e = e.add(&a.mul(&weight));
        }
    }
    by_shift.retain(|_, c| !c.is_zero());
    let shifts: Vec<i64> = by_shift.keys().rev().copied().collect();
    let Some(&h_max) = shifts.first() else {
        return Err(OdeError::WrongShape("series substitution gives no relation".into()));
    };
    let step = shifts
        .windows(2)
        .fold(0u64, |g, w| gcd(g, (w[0] - w[1]) as u64))
        .max(1);
    let h_min = *shifts.last().unwrap();
    let span = ((h_max - h_min) as u64 / step) as usize;
    let mut rec_coeffs: Vec<MPoly> = (0..=span)
        .map(|j| {
            by_shift
                .get(&(h_max - (j as i64) * step as i64))
                .cloned()
                .unwrap_or_default()
        })
        .collect();

    let top = if step == 1 {
        // N = n − h_max
        let sub = big_n.sub(&MPoly::int(h_max));
        rec_coeffs = rec_coeffs.iter().map(|c| c.compose(&ansatz.index, &sub)).collect();
        0
    } else {
        h_max
    };

    let rec = Recurrence::new(&ansatz.index, spectral, step as u32, top, rec_coeffs)
        .map_err(|_| OdeError::LeadingCoeffVanishes { n: None })?;
    check_indicial(&rec)?;
    Ok(rec.sign_normalized())
}

/// Rejects a leading coefficient that vanishes at an integer index whose
/// target lies beyond the free initial window `0..step`. Coefficients that
/// depend on parameters are not decided here; `generate_sequence` reports
/// those at generation time.
fn check_indicial(rec: &Recurrence) -> Result<(), OdeError> {
    let lead = rec.leading();
    if lead.vars().iter().any(|v| *v != rec.index) {
        return Ok(());
    }
    let u = lead.to_upoly(&rec.index).expect("univariate in index");
    if u.degree() == Some(0) {
        return Ok(());
    }
    for r in u.rational_roots().unwrap_or_default() {
        if r.is_integer() {
            let n = r.to_f64() as i64;
            if n + rec.top >= rec.step as i64 {
                return Err(OdeError::LeadingCoeffVanishes { n: Some(n) });
            }
        }
    }
    Ok(())
}

/// Converts a plain-scaling recurrence to factorial scaling via
/// `P_k = k! a_k`: coefficient `j` is multiplied by `(n+top)!/(n+top−j·step)!`.
pub fn plain_to_factorial(rec: &Recurrence) -> Recurrence {
    let hi = MPoly::var(&rec.index).add(&MPoly::int(rec.top));
    let mut out = rec.clone();
    out.coeffs = rec
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c.mul(&falling_factorial(&hi, j as u32 * rec.step)))
        .collect();
    out
}

/// Splits a step-2 three-term recurrence (indices n+2, n, n−2) into the
/// even sector `P_m = Q_{2m}` (n = 2m−2) and the odd sector
/// `P_m = Q_{2m+1}` (n = 2m−1). Both sectors are seeded with `P_0 = 1`.
/// A two-term step-2 relation is padded with a zero trailing coefficient.
pub fn parity_decouple(rec: &Recurrence, sector_index: &str) -> Result<(Recurrence, Recurrence), OdeError> {
    if rec.span() > 2 || rec.step != 2 {
        return Err(OdeError::WrongShape(format!(
            "parity decoupling needs span 2 and step 2, got span {} step {}",
            rec.span(),
            rec.step
        )));
    }
    let mut r = rec.with_top(2);
    r.coeffs.resize(3, MPoly::zero());
    let m = MPoly::var(sector_index);
    let map = |sub: MPoly| -> Result<Recurrence, OdeError> {
        let coeffs = r.coeffs.iter().map(|c| c.compose(&r.index, &sub)).collect();
        Recurrence::new(sector_index, &r.spectral, 1, 0, coeffs)
    };
    let even = map(m.scale(&Rat::int(2)).sub(&MPoly::int(2)))?;
    let odd = map(m.scale(&Rat::int(2)).sub(&MPoly::int(1)))?;
    Ok((even, odd))
}

/// `Σ coeff_k · f^(k)` with all parameters bound; zero iff `f` solves the ODE.
pub fn exact_residual(ode: &LinearOde, f: &UPoly, b: &Bindings) -> Result<MPoly, OdeError> {
    if let Some(p) = ode.parameters().into_iter().find(|p| !b.contains_key(p)) {
        return Err(OdeError::UnboundParameter(p));
    }
    let coeffs = ode.polynomial_coeffs()?;
    let mut deriv = f.with_var(&ode.indep);
    let mut acc = MPoly::zero();
    for c in &coeffs {
        acc = acc.add(&c.substitute(b).mul(&deriv.to_mpoly()));
        deriv = deriv.derivative();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::OdeTerm;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    fn hermite() -> LinearOde {
        LinearOde::new(
            "x",
            vec![
                OdeTerm::new(2, MPoly::one()),
                OdeTerm::new(1, p("-2*x")),
                OdeTerm::new(0, p("2*lambda")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn hermite_plain() {
        let r = derive_recurrence(&hermite(), &SeriesAnsatz::plain("n"), "lambda").unwrap();
        assert_eq!(r.step, 2);
        assert_eq!(r.top, 2);
        assert_eq!(r.span(), 1);
        // (n+2)(n+1) a_{n+2} = 2(n − λ) a_n
        assert_eq!(r.coeffs[0], p("(n+2)*(n+1)"));
        assert_eq!(r.coeffs[1], p("-2*(n - lambda)"));
    }

    #[test]
    fn exponential_control() {
        // f' = f: (n+1) a_{n+1} = a_n, rewritten with highest index n
        let ode = LinearOde::new("x", vec![OdeTerm::new(1, MPoly::one()), OdeTerm::new(0, MPoly::int(-1))]).unwrap();
        let r = derive_recurrence(&ode, &SeriesAnsatz::plain("n"), "z").unwrap();
        assert_eq!(r.coeffs, vec![p("n"), MPoly::int(-1)]);
        // generated coefficients are 1/n!
        let mut a = vec![Rat::one()];
        let mut fact = Rat::one();
        for n in 1..=30i64 {
            let c0 = r.coeff_at(0, n).constant_value().unwrap();
            let c1 = r.coeff_at(1, n).constant_value().unwrap();
            let next = -(c1 * &a[(n - 1) as usize]) / c0;
            fact = fact * Rat::int(n);
            assert_eq!(next, fact.recip());
            a.push(next);
        }
    }

    #[test]
    fn constant_multiple_of_ode() {
        let r1 = derive_recurrence(&hermite(), &SeriesAnsatz::factorial("n"), "lambda").unwrap();
        let r2 = derive_recurrence(&hermite().scaled(&Rat::new(-7, 3)), &SeriesAnsatz::factorial("n"), "lambda").unwrap();
        assert_eq!(r1.monic(), r2.monic());
    }

    #[test]
    fn scalings_agree() {
        let plain = derive_recurrence(&hermite(), &SeriesAnsatz::plain("n"), "lambda").unwrap();
        let fact = derive_recurrence(&hermite(), &SeriesAnsatz::factorial("n"), "lambda").unwrap();
        // converted plain = direct factorial · (n+top)!/n!
        let conv = plain_to_factorial(&plain);
        let hi = MPoly::var("n").add(&MPoly::int(plain.top));
        let expected = fact.scaled_by(&falling_factorial(&hi, plain.top as u32));
        assert_eq!(conv.monic(), expected.monic());
    }

    #[test]
    fn uncleared_denominator() {
        let ode = LinearOde::new(
            "x",
            vec![OdeTerm::new(2, MPoly::one()), OdeTerm::over_power(1, p("a"), 1)],
        )
        .unwrap();
        assert!(matches!(
            derive_recurrence(&ode, &SeriesAnsatz::plain("n"), "a"),
            Err(OdeError::NotPolynomial { .. })
        ));
        assert!(derive_recurrence(&ode.cleared(), &SeriesAnsatz::plain("n"), "a").is_ok());
    }

    #[test]
    fn indicial_obstruction() {
        // x f'' − 2 f' = 0: n(n−3) a_n = 0 style obstruction at n = 3
        let ode = LinearOde::new("x", vec![OdeTerm::new(2, p("x")), OdeTerm::new(1, MPoly::int(-2))]).unwrap();
        assert_eq!(
            derive_recurrence(&ode, &SeriesAnsatz::plain("n"), "z"),
            Err(OdeError::LeadingCoeffVanishes { n: Some(3) })
        );
    }

    #[test]
    fn trivial_parity() {
        // Q_{n+2} = Q_n gives P_m = P_{m-1} in both sectors
        let r = Recurrence::new("n", "s", 2, 2, vec![MPoly::one(), MPoly::int(-1)]).unwrap();
        let (e, o) = parity_decouple(&r, "m").unwrap();
        for sector in [e, o] {
            assert_eq!(sector.coeffs, vec![MPoly::one(), MPoly::int(-1), MPoly::zero()]);
        }
        let bad = Recurrence::new("n", "s", 1, 0, vec![MPoly::one(), MPoly::one()]).unwrap();
        assert!(matches!(parity_decouple(&bad, "m"), Err(OdeError::WrongShape(_))));
    }

    #[test]
    fn residual_needs_bindings() {
        let f = UPoly::x("x");
        assert_eq!(
            exact_residual(&hermite(), &f, &Bindings::new()),
            Err(OdeError::UnboundParameter("lambda".into()))
        );
        // H_1 = 2x solves the Hermite equation at λ = 1
        let b = crate::algebra::bindings([("lambda", Rat::one())]);
        assert!(exact_residual(&hermite(), &f, &b).unwrap().is_zero());
    }
}
