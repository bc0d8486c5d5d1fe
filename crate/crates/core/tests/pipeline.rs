use proptest::prelude::*;
use qes_core::algebra::{bindings, Bindings, MPoly, Rat, UPoly};
use qes_core::lab::{favard_check, generate_sequence, truncation_scan};
use qes_core::models::{
    build_kink_t_ode, kink_potential, kink_qes_states, kink_sectors, periodic_potential, reconstruct_wavefunction,
    KinkParams, Sector,
};
use qes_core::numerics::{pointwise_residual, richardson_refine, Boundary, Grid, Spectrum, Tolerances};
use qes_core::ode::exact_residual;

fn kink(eps2: Rat) -> KinkParams {
    KinkParams::new(1.0, eps2).unwrap()
}

#[test]
fn richardson_moves_toward_three_quarters() {
    let tol = Tolerances::default();
    let kp = kink(Rat::new(1, 2));
    let v = |x: f64| kink_potential(x, &kp);
    let g = Grid::new(-25.0, 25.0, 2000, Boundary::Dirichlet).unwrap();
    let a = Spectrum::compute(&v, &g, "kink", 3, &tol).unwrap();
    let b = Spectrum::compute(&v, &g.halved(), "kink", 3, &tol).unwrap();
    let r = richardson_refine(&a, &b, &tol).unwrap();
    let err = |s: &Spectrum| (s.eigenvalues[2] - 0.75).abs();
    assert!(err(&r) < err(&b) && err(&b) < err(&a), "{} {} {}", err(&a), err(&b), err(&r));
}

#[test]
fn periodic_refinement_is_consistent() {
    let tol = Tolerances::default();
    let kp = kink(Rat::new(1, 2));
    let v = |x: f64| periodic_potential(x, &kp);
    let g = Grid::new(0.0, 4.0 * std::f64::consts::PI, 128, Boundary::Periodic).unwrap();
    let a = Spectrum::compute(&v, &g, "periodic", 3, &tol).unwrap();
    let b = Spectrum::compute(&v, &g.halved(), "periodic", 3, &tol).unwrap();
    let r = richardson_refine(&a, &b, &tol).unwrap();
    assert!((r.eigenvalues[0] + 0.75).abs() < 1e-5, "{}", r.eigenvalues[0]);
    assert!((b.eigenvalues[0] + 0.75).abs() < (a.eigenvalues[0] + 0.75).abs());
}

#[test]
fn wrong_energy_is_detected() {
    let tol = Tolerances::default();
    let kp = kink(Rat::new(1, 2));
    let states = kink_qes_states(&kp.eps2, 4).unwrap();
    let wf = reconstruct_wavefunction(&states[1], &kp).unwrap();
    let g = Grid::new(-20.0, 20.0, 4001, Boundary::Dirichlet).unwrap();
    let v = |x: f64| kink_potential(x, &kp);
    let right = pointwise_residual(&|x| wf.eval(x), 0.75, &v, &g, &tol).unwrap();
    let wrong = pointwise_residual(&|x| wf.eval(x), 0.7, &v, &g, &tol).unwrap();
    assert!(right.max_rel < 1e-6);
    assert!(wrong.max_rel > 1e-2);
}

#[test]
fn sector_families_fail_favard_early() {
    let (even, odd) = kink_sectors().unwrap();
    let b = bindings([("eps2", Rat::new(1, 2))]);
    for r in [even, odd] {
        let rep = favard_check(&r, &b, 6).unwrap();
        assert!(!rep.pass);
        assert!(rep.first_violation().unwrap().n <= 3);
    }
}

#[test]
fn truncated_sequence_stays_zero() {
    let (even, _) = kink_sectors().unwrap();
    let mut b = bindings([("eps2", Rat::new(1, 2))]);
    b.insert("s".into(), Rat::new(1, 2));
    let seq = generate_sequence(&even, &b, 8).unwrap();
    assert!(!seq.entries[1].is_zero());
    assert!(seq.entries[2..].iter().all(UPoly::is_zero));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zero_mode_for_any_positive_eps2(p in 1i64..20, q in 1i64..20) {
        let e = Rat::new(p, q);
        let (_, odd) = kink_sectors().unwrap();
        let b: Bindings = bindings([("eps2", e.clone())]);
        let res = truncation_scan(&odd, &b, 1, &Rat::zero(), &Rat::int(2)).unwrap();
        prop_assert!(res.records[0].qes_points.contains(&Rat::one()));
        let ode = build_kink_t_ode(&MPoly::one(), &MPoly::constant(e));
        let r = exact_residual(&ode, &UPoly::x("t"), &Bindings::new()).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn found_states_solve_the_t_equation(p in 1i64..6, q in 1i64..6) {
        for st in kink_qes_states(&Rat::new(p, q), 3).unwrap() {
            prop_assert!(st.residual().is_zero());
            if st.sector == Sector::Odd {
                prop_assert_eq!(st.series.coeff(0), Rat::zero());
            }
        }
    }
}
