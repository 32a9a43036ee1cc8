//! Property tests over seeded random instances.

mod common;

use proptest::prelude::*;
use widthlab::covering::{self, classify_wg, VerdictTag, DEFAULT_TOL};
use widthlab::equations;
use widthlab::expanding;
use widthlab::linalg::{self, Matrix, RANK_CUTOFF};
use widthlab::random;
use widthlab::seqlab::{self, SequenceModel};
use widthlab::spectra::{self, Ellipsoid};

fn rank(m: &Matrix) -> usize {
    linalg::numerical_rank(&linalg::singular_values(m), RANK_CUTOFF)
}

fn base_model() -> impl Strategy<Value = SequenceModel> {
    prop_oneof![
        (0.1f64..0.9).prop_map(|q| SequenceModel::geometric(q).unwrap()),
        (0.2f64..3.0).prop_map(|p| SequenceModel::power(p).unwrap()),
        (1.1f64..3.0).prop_map(|b| SequenceModel::super_geometric(b).unwrap()),
    ]
}

fn model() -> impl Strategy<Value = SequenceModel> {
    (base_model(), 0usize..3, prop::option::of(0.1f64..10.0)).prop_map(|(m, k, c)| {
        let m = if k > 0 { m.shifted(k) } else { m };
        match c {
            Some(c) => m.scaled(c).unwrap(),
            None => m,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn widths_are_orthogonally_invariant(seed in any::<u64>(), d in 1usize..10) {
        let mut rng = random::rng(seed);
        let a = common::random_generator(&mut rng, d, 0.3);
        let u = random::orthonormal_columns(&mut rng, d, d);
        let v = random::orthonormal_columns(&mut rng, d, d);
        let w1 = spectra::kolmogorov_widths(&Ellipsoid::new(a.clone()).unwrap());
        let w2 = spectra::kolmogorov_widths(&Ellipsoid::new(&u * &a * v.transpose()).unwrap());
        let s1 = w1.d(0);
        for n in 0..d {
            prop_assert!((w1.d(n) - w2.d(n)).abs() <= 1e-10 * s1.max(1e-300), "n = {n}");
        }
    }

    #[test]
    fn widths_are_shifted_s_numbers(seed in any::<u64>(), d in 1usize..12) {
        let mut rng = random::rng(seed);
        let a = common::random_generator(&mut rng, d, 0.3);
        let w = spectra::kolmogorov_widths(&Ellipsoid::new(a.clone()).unwrap());
        let s = spectra::singular_spectrum(&a).unwrap();
        for n in 0..d + 2 {
            prop_assert_eq!(w.d(n), s.s(n + 1));
        }
    }

    #[test]
    fn sections_interlace(seed in any::<u64>(), m in 1usize..4, extra in 1usize..8) {
        let d = m + extra;
        let mut rng = random::rng(seed);
        let e = Ellipsoid::new(common::random_generator(&mut rng, d, 0.3)).unwrap();
        let y = random::orthonormal_columns(&mut rng, d, m);
        let sigma = spectra::section_spectrum(&e, &y).unwrap();
        let s = e.spectrum();
        let tol = 1e-9 * s.s(1);
        for n in 1..=d {
            prop_assert!(sigma.s(n) <= s.s(n) + tol);
            prop_assert!(sigma.s(n) + tol >= s.s(n + m));
        }
    }

    #[test]
    fn truncation_only_removes_tail(seed in any::<u64>(), d in 1usize..10, r in 1usize..10) {
        let mut rng = random::rng(seed);
        let e = Ellipsoid::new(random::gaussian_matrix(&mut rng, d, d)).unwrap();
        let t = spectra::truncate_ellipsoid(&e, r.min(d)).unwrap();
        let (we, wt) = (spectra::kolmogorov_widths(&e), spectra::kolmogorov_widths(&t));
        for n in 0..d {
            prop_assert!(wt.d(n) <= we.d(n) * (1.0 + 1e-12));
            if n < r.min(d) {
                prop_assert!((wt.d(n) - we.d(n)).abs() <= 1e-12 * we.d(0));
            } else {
                prop_assert_eq!(wt.d(n), 0.0);
            }
        }
        prop_assert!(covering::covers(&Matrix::identity(d, d), &e, &t, DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn verdicts_ignore_scaling(a in model(), b in model(), c in 0.01f64..100.0) {
        let ac = a.clone().scaled(c).unwrap();
        let bc = b.clone().scaled(c).unwrap();
        prop_assert_eq!(seqlab::is_lacunary(&a).unwrap().lacunary, seqlab::is_lacunary(&ac).unwrap().lacunary);
        let m = seqlab::majorizes(&a, &b).unwrap().holds;
        prop_assert_eq!(m, seqlab::majorizes(&ac, &b).unwrap().holds);
        prop_assert_eq!(m, seqlab::majorizes(&a, &bc).unwrap().holds);
        let sm = seqlab::strictly_majorizes(&a, &b).unwrap().holds;
        prop_assert_eq!(sm, seqlab::strictly_majorizes(&ac, &b).unwrap().holds);
        let k = seqlab::max_majorizing_shift(&a, &b, 8).ok().map(|s| s.k);
        prop_assert_eq!(k, seqlab::max_majorizing_shift(&ac, &bc, 8).ok().map(|s| s.k));
    }

    #[test]
    fn majorizing_shifts_are_downward_closed(a in model(), b in model(), k in 0usize..4) {
        if seqlab::majorizes(&a.clone().shifted(k + 1), &b).unwrap().holds {
            prop_assert!(seqlab::majorizes(&a.clone().shifted(k), &b).unwrap().holds);
        }
        if seqlab::strictly_majorizes(&a.clone().shifted(k + 1), &b).unwrap().holds {
            prop_assert!(seqlab::strictly_majorizes(&a.clone().shifted(k), &b).unwrap().holds);
        }
    }

    #[test]
    fn equivalence_is_an_equivalence(a in model(), b in model(), c in model()) {
        prop_assert!(seqlab::equivalent(&a, &a).unwrap());
        let ab = seqlab::equivalent(&a, &b).unwrap();
        prop_assert_eq!(ab, seqlab::equivalent(&b, &a).unwrap());
        if ab && seqlab::equivalent(&b, &c).unwrap() {
            prop_assert!(seqlab::equivalent(&a, &c).unwrap());
        }
    }

    #[test]
    fn self_classification_is_a_dichotomy(a in model()) {
        let lacunary = seqlab::is_lacunary(&a).unwrap().lacunary;
        let tag = classify_wg(&a, &a, 16).unwrap().tag;
        let expected = if lacunary { VerdictTag::AlgebraAK } else { VerdictTag::Everything };
        prop_assert_eq!(tag, expected);
    }

    #[test]
    fn covers_bound_s_numbers(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (t, a1, a2) = common::cover_instance(&mut rng, 6);
        let (e1, e2) = (Ellipsoid::new(a1).unwrap(), Ellipsoid::new(a2).unwrap());
        if covering::covers(&t, &e1, &e2, DEFAULT_TOL).unwrap().holds {
            let norm = linalg::spectral_norm(&t);
            for n in 1..=t.nrows() {
                prop_assert!(e2.spectrum().s(n) <= (1.0 + 1e-9) * norm * e1.spectrum().s(n) + 1e-12);
            }
        }
    }

    #[test]
    fn covers_compose(seed in any::<u64>(), d in 1usize..7) {
        let mut rng = random::rng(seed);
        let es: Vec<Ellipsoid> = (0..3)
            .map(|_| Ellipsoid::new(random::gaussian_matrix(&mut rng, d, d)).unwrap())
            .collect();
        let t = covering::schmidt_cover(&es[0], &es[1]).unwrap().operator;
        let s = covering::schmidt_cover(&es[1], &es[2]).unwrap().operator;
        prop_assert!(covering::covers(&(s * t), &es[0], &es[2], DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn minimal_norm_cover_is_tight(seed in any::<u64>(), d in 1usize..7) {
        let mut rng = random::rng(seed);
        let e1 = Ellipsoid::new(random::gaussian_matrix(&mut rng, d, d)).unwrap();
        let e2 = Ellipsoid::new(random::gaussian_matrix(&mut rng, d, d)).unwrap();
        let sc = covering::schmidt_cover(&e1, &e2).unwrap();
        prop_assert!(covering::covers(&sc.operator, &e1, &e2, DEFAULT_TOL).unwrap().holds);
        let norm = linalg::spectral_norm(&sc.operator);
        prop_assert!((norm - sc.constant).abs() <= 1e-10 * sc.constant);
    }

    #[test]
    fn products_never_gain_rank(seed in any::<u64>(), d in 1usize..8, r in 0usize..8) {
        let mut rng = random::rng(seed);
        let a = random::matrix_of_rank(&mut rng, d, d, r.min(d));
        let x = random::gaussian_matrix(&mut rng, d, d);
        let y = random::gaussian_matrix(&mut rng, d, d);
        prop_assert!(rank(&(x * &a * y)) <= rank(&a));
    }

    #[test]
    fn solutions_solve(seed in any::<u64>(), d in 1usize..8, ra in 1usize..8, rb in 0usize..8) {
        let mut rng = random::rng(seed);
        let ra = ra.min(d);
        let a = random::matrix_of_rank(&mut rng, d, d, ra);
        let b = random::matrix_of_rank(&mut rng, d, d, rb.min(d));
        let verdict = equations::xay_solvable(&a, &b, None, None).unwrap();
        prop_assert_eq!(verdict.solvable, rb.min(d) <= ra);
        match equations::solve_xay(&a, &b) {
            Ok(sol) => {
                prop_assert!(verdict.solvable);
                prop_assert!((&sol.x * &a * &sol.y - &b).norm() <= 1e-9 * (1.0 + b.norm()));
                prop_assert!(equations::first_component_member(&sol.x, &a, &b).unwrap());
            }
            Err(_) => prop_assert!(!verdict.solvable),
        }
    }

    #[test]
    fn expanding_maps_compose(seed in any::<u64>(), d in 1usize..7, c1 in 1.01f64..2.0, c2 in 1.01f64..2.0) {
        let mut rng = random::rng(seed);
        let vals: Vec<f64> = (0..d).map(|i| 2.0 - i as f64 / d as f64).collect();
        let a = common::with_singular_values(&mut rng, &vals);
        let ainv = a.clone().try_inverse().unwrap();
        // A^-1 Q A scaled by c satisfies |A T x| = c |A x|
        let mut expander = |c: f64| &ainv * random::orthonormal_columns(&mut rng, d, d) * &a * c;
        let (t, s) = (expander(c1), expander(c2));
        prop_assert!(expanding::is_expanding(&t, &a, DEFAULT_TOL).unwrap().expanding);
        prop_assert!(expanding::is_expanding(&s, &a, DEFAULT_TOL).unwrap().expanding);
        prop_assert!(expanding::is_expanding(&(&t * &s), &a, DEFAULT_TOL).unwrap().expanding);
        prop_assert!(expanding::is_expanding(&(&t * 1.5), &a, DEFAULT_TOL).unwrap().expanding);
    }

    #[test]
    fn expanding_ignores_scale_of_a(seed in any::<u64>(), d in 1usize..7, c in 0.1f64..10.0) {
        let mut rng = random::rng(seed);
        let a = common::random_generator(&mut rng, d, 0.3);
        let t = random::gaussian_matrix(&mut rng, d, d) * 2.0;
        let v = expanding::is_expanding(&t, &a, DEFAULT_TOL).unwrap();
        let vc = expanding::is_expanding(&t, &(&a * c), DEFAULT_TOL).unwrap();
        if v.margin.abs() > expanding::BAND && vc.margin.abs() > expanding::BAND {
            prop_assert_eq!(v.expanding, vc.expanding);
        }
    }

    #[test]
    fn expanding_matches_transposed_cover(seed in any::<u64>(), d in 1usize..9) {
        let mut rng = random::rng(seed);
        let a = common::random_generator(&mut rng, d, 0.3);
        let t = random::gaussian_matrix(&mut rng, d, d) * 1.5;
        prop_assert!(expanding::expanding_dual_check(&t, &a).unwrap());
    }
}
