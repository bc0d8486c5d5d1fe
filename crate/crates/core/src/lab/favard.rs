//! Structural check of `P_n = (A_n E + B_n) P_{n−1} + C_n P_{n−2}` with
//! `A_n ≠ 0`, `C_n ≠ 0` for `n ≥ 2`, `E`-independent coefficients and
//! `deg P_n = n`.

use serde::{Deserialize, Serialize};

use super::generate::{bind, generate_sequence};
use super::LabError;
use crate::algebra::{Bindings, UPoly};
use crate::ode::Recurrence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    LeadNotConst,
    MiddleNotDeg1,
    AZero,
    CDependsOnSpectral,
    CZero,
    C1Nonzero,
    DegGrowth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub n: usize,
    pub code: ViolationCode,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FavardReport {
    pub pass: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl FavardReport {
    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.iter().min_by_key(|v| v.n)
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FavardOptions {
    /// Also require the raw trailing coefficient at `n = 1` to vanish. By
    /// default `C_1` multiplies `P_{−1} ≡ 0` and is not inspected.
    pub strict_c1: bool,
}

pub fn favard_check(rec: &Recurrence, b: &Bindings, n_max: usize) -> Result<FavardReport, LabError> {
    favard_check_with(rec, b, n_max, FavardOptions::default())
}

pub fn favard_check_with(
    rec: &Recurrence,
    b: &Bindings,
    n_max: usize,
    opts: FavardOptions,
) -> Result<FavardReport, LabError> {
    if rec.span() != 2 || rec.step != 1 {
        return Err(LabError::WrongShape(format!(
            "Favard form needs span 2 and step 1, got span {} step {}",
            rec.span(),
            rec.step
        )));
    }
    let r = bind(&rec.with_top(0), b)?;
    let spec = r.spectral.clone();
    let up = |p: crate::algebra::MPoly| p.to_upoly(&spec).expect("bound");
    let mut violations = Vec::new();
    let mut push = |n: usize, code, detail: String| violations.push(Violation { n, code, detail });

    for n in 1..=n_max {
        let ni = n as i64;
        let c0 = up(r.coeff_at(0, ni));
        if c0.is_zero() || c0.degree() != Some(0) {
            push(n, ViolationCode::LeadNotConst, format!("leading coefficient {c0}"));
            continue;
        }
        let inv = -c0.leading().recip();
        // P_n = a·P_{n−1} + c·P_{n−2}
        let a = up(r.coeff_at(1, ni)).scale(&inv);
        let c = up(r.coeff_at(2, ni)).scale(&inv);
        match a.degree() {
            Some(1) => {}
            None | Some(0) => push(
                n,
                ViolationCode::AZero,
                format!("A_{n} = 0: middle coefficient {a} has no {spec}"),
            ),
            Some(d) => push(
                n,
                ViolationCode::MiddleNotDeg1,
                format!("middle coefficient {a} has degree {d} in {spec}"),
            ),
        }
        if n == 1 {
            if opts.strict_c1 && !c.is_zero() {
                push(n, ViolationCode::C1Nonzero, format!("C_1 = {c}"));
            }
            continue;
        }
        match c.degree() {
            None => push(n, ViolationCode::CZero, format!("C_{n} = 0")),
            Some(0) => {}
            Some(d) => push(
                n,
                ViolationCode::CDependsOnSpectral,
                format!("C_{n} = {c} has degree {d} in {spec}"),
            ),
        }
    }

    // degree growth on the generated family
    let (seq, stopped) = match generate_sequence(&r, &Bindings::new(), n_max) {
        Ok(s) => (s.entries, None),
        Err(LabError::LeadingZeroAt { n, partial }) => (partial.entries, Some(n)),
        Err(LabError::LeadNotConstant { n }) => (Vec::new(), Some(n)),
        Err(e) => return Err(e),
    };
    for (n, p) in seq.iter().enumerate() {
        if p.degree() != Some(n) {
            push(
                n,
                ViolationCode::DegGrowth,
                format!("deg P_{n} = {} ({})", fmt_deg(p), p),
            );
        }
    }
    if let Some(n) = stopped {
        push(n, ViolationCode::DegGrowth, format!("generation stopped at P_{n}"));
    }
    violations.sort_by_key(|v| v.n);
    Ok(FavardReport {
        pass: violations.is_empty(),
        checked: n_max,
        violations,
    })
}

fn fmt_deg(p: &UPoly) -> String {
    p.degree().map(|d| d.to_string()).unwrap_or_else(|| "-inf".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MPoly, Rat};
    use proptest::prelude::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn hermite_passes() {
        let r = Recurrence::new("n", "x", 1, 0, vec![MPoly::one(), p("-x"), p("(n-1)/2")]).unwrap();
        let rep = favard_check(&r, &Bindings::new(), 50).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn strict_c1() {
        let r = Recurrence::new("n", "x", 1, 0, vec![MPoly::one(), p("-x"), p("1/4")]).unwrap();
        assert!(favard_check(&r, &Bindings::new(), 10).unwrap().pass);
        let strict = favard_check_with(&r, &Bindings::new(), 10, FavardOptions { strict_c1: true }).unwrap();
        assert_eq!(strict.violations.len(), 1);
        assert_eq!(strict.violations[0].code, ViolationCode::C1Nonzero);
    }

    #[test]
    fn codes() {
        // quadratic middle, spectral trailing
        let r = Recurrence::new("n", "s", 1, 0, vec![MPoly::int(2), p("s^2"), p("s*n")]).unwrap();
        let rep = favard_check(&r, &Bindings::new(), 3).unwrap();
        assert!(rep.has(ViolationCode::MiddleNotDeg1));
        assert!(rep.has(ViolationCode::CDependsOnSpectral));
        assert!(rep.has(ViolationCode::DegGrowth));
        // vanishing trailing coefficient
        let r = Recurrence::new("n", "s", 1, 0, vec![MPoly::one(), p("-s"), MPoly::zero()]).unwrap();
        let rep = favard_check(&r, &Bindings::new(), 3).unwrap();
        assert!(rep.has(ViolationCode::CZero));
        // spectral leading coefficient
        let r = Recurrence::new("n", "s", 1, 0, vec![p("s"), p("-s"), MPoly::one()]).unwrap();
        let rep = favard_check(&r, &Bindings::new(), 3).unwrap();
        assert!(rep.has(ViolationCode::LeadNotConst));
    }

    #[test]
    fn wrong_shape() {
        let r = Recurrence::new("n", "s", 2, 2, vec![MPoly::one(), p("s"), p("n")]).unwrap();
        assert!(matches!(favard_check(&r, &Bindings::new(), 3), Err(LabError::WrongShape(_))));
    }

    proptest! {
        #[test]
        fn degree_growth_iff_no_a_zero(
            lead in 1i64..4,
            slopes in prop::collection::vec(prop_oneof![Just(0i64), 1i64..3], 2),
            b in -3i64..4,
            c in 1i64..5,
        ) {
            // c1(n) = -(slope(n)·s + b), slope alternates with n parity
            let slope = p(&format!("{} + {}*n", slopes[0], slopes[1]));
            let c1 = slope.mul(&p("-s")).sub(&MPoly::int(b));
            let r = Recurrence::new("n", "s", 1, 0, vec![MPoly::int(lead), c1, MPoly::constant(Rat::int(c))]).unwrap();
            let n_max = 12;
            let rep = favard_check(&r, &Bindings::new(), n_max).unwrap();
            let seq = generate_sequence(&r, &Bindings::new(), n_max).unwrap();
            let degrees_ok = seq.entries.iter().enumerate().all(|(n, e)| e.degree() == Some(n));
            prop_assert_eq!(
                degrees_ok,
                !rep.has(ViolationCode::DegGrowth) && !rep.has(ViolationCode::AZero)
            );
        }
    }
}
