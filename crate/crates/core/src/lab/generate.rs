use super::LabError;
use crate::algebra::{Bindings, Rat, UPoly};
use crate::ode::{PolySequence, Recurrence};

/// Binds every parameter and checks that only the index and the spectral
/// variable remain.
pub(crate) fn bind(rec: &Recurrence, b: &Bindings) -> Result<Recurrence, LabError> {
    let r = rec.substitute(b);
    if let Some(p) = r.parameters().into_iter().next() {
        return Err(LabError::UnboundParameter(p));
    }
    Ok(r)
}

fn as_upoly(rec: &Recurrence, p: &crate::algebra::MPoly) -> UPoly {
    p.to_upoly(&rec.spectral)
        .expect("bound recurrence has only index and spectral variables")
}

/// `P_0 ..= P_count` generated exactly from the seed.
pub fn generate_sequence(rec: &Recurrence, b: &Bindings, count: usize) -> Result<PolySequence, LabError> {
    let r = bind(rec, b)?;
    let mut entries: Vec<UPoly> = r
        .seed
        .iter()
        .take(count + 1)
        .map(|c| as_upoly(&r, c))
        .collect();
    let custom_seed = !(r.seed.len() == 1 && r.seed[0].constant_value() == Some(Rat::one()));
    let d = r.step as usize;
    for k in entries.len()..=count {
        let n = k as i64 - r.top;
        let lead = as_upoly(&r, &r.coeff_at(0, n));
        let partial = || PolySequence {
            spectral: r.spectral.clone(),
            entries: entries.clone(),
            custom_seed,
        };
        if lead.is_zero() {
            return Err(LabError::LeadingZeroAt { n: k, partial: partial() });
        }
        if lead.degree() != Some(0) {
            return Err(LabError::LeadNotConstant { n: k });
        }
        let mut acc = UPoly::zero(&r.spectral);
        for j in 1..r.coeffs.len() {
            let Some(idx) = k.checked_sub(j * d) else {
                break;
            };
            let c = as_upoly(&r, &r.coeff_at(j, n));
            acc = acc.add(&c.mul(&entries[idx]));
        }
        entries.push(acc.scale(&(-lead.leading().recip())));
    }
    Ok(PolySequence {
        spectral: r.spectral.clone(),
        entries,
        custom_seed,
    })
}

/// Values `P_0 ..= P_count` at a rational value of the spectral variable.
pub fn generate_at(rec: &Recurrence, b: &Bindings, spectral: &Rat, count: usize) -> Result<Vec<Rat>, LabError> {
    let mut full = b.clone();
    full.insert(rec.spectral.clone(), spectral.clone());
    let seq = generate_sequence(rec, &full, count)?;
    Ok(seq.entries.iter().map(|e| e.coeff(0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{bindings, MPoly};

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    fn monic_hermite() -> Recurrence {
        // p_n = x p_{n-1} - (n-1)/2 p_{n-2}
        Recurrence::new("n", "x", 1, 0, vec![MPoly::one(), p("-x"), p("(n-1)/2")]).unwrap()
    }

    #[test]
    fn hermite_two_steps() {
        let seq = generate_sequence(&monic_hermite(), &Bindings::new(), 2).unwrap();
        assert_eq!(seq.entries[1], UPoly::x("x"));
        assert_eq!(seq.entries[2], UPoly::new("x", vec![Rat::new(-1, 2), Rat::zero(), Rat::one()]));
    }

    #[test]
    fn seed_only() {
        let seq = generate_sequence(&monic_hermite(), &Bindings::new(), 0).unwrap();
        assert_eq!(seq.entries, vec![UPoly::one("x")]);
        assert!(!seq.custom_seed);
    }

    #[test]
    fn leading_zero_returns_partial() {
        // (n - 3) P_n = s P_{n-1}
        let r = Recurrence::new("n", "s", 1, 0, vec![p("n-3"), p("-s")]).unwrap();
        match generate_sequence(&r, &Bindings::new(), 5) {
            Err(LabError::LeadingZeroAt { n, partial }) => {
                assert_eq!(n, 3);
                assert_eq!(partial.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbound_parameter() {
        let r = Recurrence::new("n", "s", 1, 0, vec![p("a"), p("-s")]).unwrap();
        assert!(matches!(
            generate_sequence(&r, &Bindings::new(), 2),
            Err(LabError::UnboundParameter(_))
        ));
        let ok = generate_sequence(&r, &bindings([("a", Rat::int(2))]), 2).unwrap();
        assert_eq!(ok.entries[2], UPoly::new("s", vec![Rat::zero(), Rat::zero(), Rat::new(1, 4)]));
    }

    #[test]
    fn point_values() {
        let v = generate_at(&monic_hermite(), &Bindings::new(), &Rat::int(2), 3).unwrap();
        // p2(2) = 4 - 1/2, p3 = x^3 - 3/2 x
        assert_eq!(v, vec![Rat::one(), Rat::int(2), Rat::new(7, 2), Rat::int(5)]);
    }
}
