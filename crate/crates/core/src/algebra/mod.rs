//! Exact arithmetic: rationals, multivariate and univariate polynomials,
//! and real-root isolation.

mod factor;
mod mpoly;
mod parse;
mod rat;
mod roots;
mod upoly;

pub use factor::{factor_linear, Factored};
pub use mpoly::{bindings, Bindings, MPoly};
pub use rat::Rat;
pub use roots::{refine_root, sturm_isolate_roots, RootInterval, SturmChain};
pub use upoly::UPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("malformed rational '{0}' (expected p or p/q)")]
    MalformedRational(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("empty interval")]
    EmptyInterval,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expected a polynomial in {var} only, found {found}")]
    NotUnivariate { var: String, found: String },
    #[error("schema violation: {0}")]
    Schema(String),
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = MPoly> {
        let term = (0u32..3, 0u32..3, 0u32..2, -5i64..6, 1i64..4);
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            let vars = ["s".to_string(), "n".to_string(), "eps2".to_string()];
            MPoly::from_terms(
                &vars,
                ts.into_iter()
                    .map(|(a, b, c, num, den)| (vec![a, b, c], Rat::new(num, den))),
            )
            .unwrap()
        })
    }

    fn full_binding() -> impl Strategy<Value = Bindings> {
        (-6i64..7, 1i64..5, -6i64..7, -6i64..7).prop_map(|(a, d, b, c)| {
            bindings([
                ("s", Rat::new(a, d)),
                ("n", Rat::int(b)),
                ("eps2", Rat::new(c, d)),
            ])
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assert_eq!((&p * &q) * &r, &p * (&q * &r));
            prop_assert_eq!(&p * (&q + &r), &p * &q + &p * &r);
            prop_assert!((&p + &(-&p)).is_zero());
            prop_assert_eq!(&p + &q, &q + &p);
        }

        #[test]
        fn evaluation_is_a_homomorphism(p in small_poly(), q in small_poly(), b in full_binding()) {
            let lhs = (&p * &q).substitute(&b);
            let rhs = p.substitute(&b) * q.substitute(&b);
            prop_assert!(lhs.is_constant());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_and_json_are_canonical(p in small_poly()) {
            let text = p.to_string();
            let back: MPoly = text.parse().unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(back.to_string(), text);
            let json = serde_json::to_string(&p).unwrap();
            let back: MPoly = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        }

        #[test]
        fn sturm_count_matches_grid_sign_changes(roots in prop::collection::btree_set(-6i64..7, 1..8)) {
            // distinct integer roots, so every root is a sign change
            let mut p = UPoly::one("x");
            for r in &roots {
                p = p.mul(&UPoly::linear_root("x", &Rat::int(*r)));
            }
            let lo = Rat::new(-123, 20);
            let hi = Rat::new(127, 20);
            let iso = sturm_isolate_roots(&p, &lo, &hi).unwrap();
            // grid points have odd numerator over 20, never an integer
            let mut changes = 0;
            let mut prev = p.eval(&lo).signum();
            for k in 1..=125 {
                let x = &lo + &Rat::new(k, 10);
                let sgn = p.eval(&x).signum();
                if sgn != 0 && sgn != prev {
                    changes += 1;
                    prev = sgn;
                }
            }
            prop_assert_eq!(iso.len(), changes);
            prop_assert_eq!(iso.len(), roots.len());
            for w in iso.windows(2) {
                prop_assert!(w[0].hi <= w[1].lo);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn rational_roots_recovered(
            roots in prop::collection::vec((-40i64..41, 1i64..13), 1..6),
            extra in prop::collection::vec(-3i64..4, 0..3),
        ) {
            // Π (q x − p) times a factor without rational roots
            let mut p = UPoly::one("x");
            for &(num, den) in &roots {
                p = p.mul(&UPoly::from_ints("x", &[-num, den]));
            }
            p = p.mul(&UPoly::from_ints("x", &[3, 0, 1]));
            for &c in &extra {
                p = p.mul(&UPoly::from_ints("x", &[c, 1]));
            }
            let mut want: Vec<Rat> = roots.iter().map(|&(n, d)| Rat::new(n, d)).collect();
            want.extend(extra.iter().map(|&c| Rat::int(-c)));
            want.sort();
            want.dedup();
            prop_assert_eq!(p.rational_roots().unwrap(), want);
        }
    }
}
