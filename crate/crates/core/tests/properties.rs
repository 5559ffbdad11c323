use genan::function_algebra::peak_at_point;
use genan::haar::{integrate_x, orbit_integral, verify_orbit_invariance, QuadratureScheme};
use genan::interpolation::{tangential_defect, Curve, TrigPath};
use genan::semicharacter::sample_semicharacter;
use genan::spectrum::{boundary_spectrum, classify_arens_singer, AsVerdict, DEFAULT_COEF_TOL};
use genan::torus;
use genan::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn semigroups() -> Vec<SemigroupDesc> {
    vec![
        SemigroupDesc::polycube(1).unwrap(),
        SemigroupDesc::polycube(2).unwrap(),
        SemigroupDesc::numerical(&[2, 3]).unwrap(),
        SemigroupDesc::numerical(&[3, 5, 7]).unwrap(),
        SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![1, 1]]).unwrap(),
        SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![0, 1], vec![-1, 0]]).unwrap(),
    ]
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semicharacters_are_multiplicative(idx in 0usize..6, seed in any::<u64>()) {
        let sg = &semigroups()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let faces = sg.prime_faces().unwrap();
        let psi = sample_semicharacter(sg, &faces, &mut rng).unwrap();
        for _ in 0..20 {
            let s = sg.random_element(&mut rng, 4);
            let t = sg.random_element(&mut rng, 4);
            let lhs = psi.value_at(&s.add(&t));
            let rhs = psi.value_at(&s) * psi.value_at(&t);
            prop_assert!(close(lhs, rhs, 1e-12));
            prop_assert!(psi.value_at(&s).norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn modulus_is_positive_part(idx in 0usize..6, seed in any::<u64>()) {
        let sg = &semigroups()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let faces = sg.prime_faces().unwrap();
        let psi = sample_semicharacter(sg, &faces, &mut rng).unwrap();
        let (rho, _) = psi.decompose(sg).unwrap();
        for _ in 0..100 {
            let s = sg.random_element(&mut rng, 5);
            prop_assert!((psi.value_at(&s).norm() - rho.value_at(&s)).abs() <= 1e-12);
        }
    }

    #[test]
    fn complex_powers_add(
        l1 in 0.05f64..3.0, l2 in 0.05f64..3.0,
        a in 0.1f64..2.0, b in -2.0f64..2.0, c in 0.1f64..2.0, d in -2.0f64..2.0,
        s1 in 0i64..6, s2 in 0i64..6,
    ) {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let rho = PositiveSemicharacter::full(&sg, vec![l1, l2]).unwrap();
        let (z1, z2) = (Complex64::new(a, b), Complex64::new(c, d));
        let lhs = rho.power(z1 + z2).unwrap();
        let rhs = rho.power(z1).unwrap().multiply(&sg, &rho.power(z2).unwrap()).unwrap();
        let s = Element(vec![s1, s2]);
        prop_assert!(close(lhs.value_at(&s), rhs.value_at(&s), 1e-12));
        // Independent route: rho(s)^z = exp(-z lambda.s).
        let direct = (-(z1 + z2) * (l1 * s1 as f64 + l2 * s2 as f64)).exp();
        prop_assert!(close(lhs.value_at(&s), direct, 1e-12));
    }

    #[test]
    fn evaluation_is_linear(seed in any::<u64>(), ar in -2.0f64..2.0, ai in -2.0f64..2.0) {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = AnalyticPolynomial::random(&sg, 3, &mut rng).unwrap();
        let q = AnalyticPolynomial::random(&sg, 3, &mut rng).unwrap();
        let (alpha, beta) = (Complex64::new(ar, ai), Complex64::new(0.5, -1.5));
        let combo = AnalyticElement::Sum(vec![(alpha, p.clone().into()), (beta, q.clone().into())]);
        let faces = sg.prime_faces().unwrap();
        for _ in 0..10 {
            let psi = sample_semicharacter(&sg, &faces, &mut rng).unwrap();
            let expected = alpha * p.eval(&psi) + beta * q.eval(&psi);
            prop_assert!(close(combo.eval(&psi), expected, 1e-12));
            let laplace = AnalyticElement::Laplace(p.to_laplace());
            prop_assert_eq!(laplace.eval(&psi), p.eval(&psi));
        }
    }

    #[test]
    fn point_peak_is_bounded(seed in any::<u64>(), theta in 0.0f64..1.0) {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let w = Weight::geometric(&sg, vec![0.5]).unwrap();
        let h = peak_at_point(&sg, &Character::new(vec![theta]), &w);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let faces = sg.prime_faces().unwrap();
        for _ in 0..20 {
            let psi = sample_semicharacter(&sg, &faces, &mut rng).unwrap();
            prop_assert!(h.eval(&psi).norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn parseval(seed in any::<u64>()) {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let p: AnalyticElement =
            AnalyticPolynomial::random(&sg, 4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap().into();
        let n = 16;
        let values = torus::grid_values(&p, &Semicharacter::one(&sg), n);
        let mean_sq = values.iter().map(|v| v.norm_sqr()).sum::<f64>() / values.len() as f64;
        let rep = boundary_spectrum(&sg, &p, n, 1e-300).unwrap();
        let coef_sq: f64 = rep.frequencies.iter().map(|l| Complex64::from(l.coefficient).norm_sqr()).sum();
        prop_assert!((mean_sq - coef_sq).abs() <= 1e-10);
    }

    #[test]
    fn spectrum_recovers_coefficients(seed in any::<u64>()) {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let p = AnalyticPolynomial::random(&sg, 5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let (verdict, rep) = classify_arens_singer(&sg, &p.clone().into(), 16, DEFAULT_COEF_TOL).unwrap();
        prop_assert_eq!(verdict, AsVerdict::ConsistentWithAs);
        for (c, s) in p.terms() {
            prop_assert!(close(rep.coefficient(s.coords()).unwrap_or_default(), *c, 1e-12));
        }
    }

    #[test]
    fn trapezoid_integrates_monomials(a in 0i64..8, b in 0i64..8) {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let f: AnalyticElement = AnalyticPolynomial::monomial(&sg, Complex64::new(1.0, 0.0), Element(vec![a, b]))
            .unwrap()
            .into();
        let v = integrate_x(&sg, &f, &QuadratureScheme::TensorTrapezoid { nodes_per_dim: 9 }).unwrap().value;
        if a == 0 && b == 0 {
            prop_assert!(close(v, Complex64::new(1.0, 0.0), 1e-15));
        } else {
            prop_assert!(v.norm() <= 1e-14);
        }
    }

    #[test]
    fn orbit_integral_ignores_lambda_scale(seed in any::<u64>(), scale in 0.1f64..10.0) {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let p = AnalyticPolynomial::random(&sg, 4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let rho1 = PositiveSemicharacter::full(&sg, vec![0.3, 0.8]).unwrap();
        let rho2 = PositiveSemicharacter::full(&sg, vec![0.3 * scale, 0.8 * scale]).unwrap();
        let scheme = QuadratureScheme::TensorTrapezoid { nodes_per_dim: 16 };
        let f: AnalyticElement = p.clone().into();
        let r = verify_orbit_invariance(&sg, &f, &rho1, &rho2, &scheme, 1e-12).unwrap();
        prop_assert!(r.passed());
        let a = orbit_integral(&sg, &f, &rho1, &scheme).unwrap().value;
        prop_assert!(close(a, p.coefficient(&Element(vec![0, 0])), 1e-12));
    }

    #[test]
    fn defect_symmetric_under_reversal(
        s1 in -2.0f64..2.0, s2 in -2.0f64..2.0, c1 in -0.5f64..0.5, t in 0.0f64..1.0,
    ) {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let w = Weight::geometric(&sg, vec![0.5, 0.4]).unwrap();
        let forward = Curve::from_trig(w.clone(), TrigPath {
            offset: vec![0.1, 0.2],
            linear: vec![s1, s2],
            cos: vec![vec![c1, 0.0]],
            sin: vec![],
        }).unwrap();
        // theta(1 - t) written as a path in t.
        let shift: Vec<f64> = (0..2).map(|i| [0.1, 0.2][i] + [s1, s2][i]).collect();
        let backward = Curve::from_trig(w, TrigPath {
            offset: shift,
            linear: vec![-s1, -s2],
            cos: vec![vec![c1, 0.0]],
            sin: vec![],
        }).unwrap();
        let a = tangential_defect(&forward, t).unwrap();
        let b = tangential_defect(&backward, 1.0 - t).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }
}

#[test]
fn numerical_23_gaps() {
    let sg = SemigroupDesc::numerical(&[2, 3]).unwrap();
    let gaps: Vec<i64> = (0..10).filter(|&v| !sg.contains(&[v]).unwrap()).collect();
    assert_eq!(gaps, vec![1]);
}

#[test]
fn members_lie_in_group_of_fractions() {
    for sg in semigroups() {
        let basis = sg.group_of_fractions();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let s = sg.random_element(&mut rng, 5);
            assert!(genan::lattice::in_lattice(&basis.basis, s.coords()));
        }
    }
}

#[test]
fn pointedness_matches_brute_force() {
    for sg in semigroups() {
        let gens = sg.generators();
        let mut zero_sum = false;
        let k = gens.len();
        let mut coeffs = vec![0i64; k];
        'outer: loop {
            let mut i = 0;
            while i < k {
                coeffs[i] += 1;
                if coeffs[i] <= 5 {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == k {
                break 'outer;
            }
            let sum: Vec<i64> = (0..sg.ambient_dim())
                .map(|c| (0..k).map(|j| coeffs[j] * gens[j][c]).sum())
                .collect();
            if sum.iter().all(|&x| x == 0) {
                zero_sum = true;
            }
        }
        assert_eq!(sg.is_pointed(), !zero_sum, "{:?}", sg.spec());
    }
}

#[test]
fn prime_faces_have_ideal_complements() {
    for sg in semigroups() {
        let elems = sg.elements_in_box(4).unwrap();
        for face in sg.prime_faces().unwrap() {
            for s in &elems {
                if sg.face_contains(&face, s.coords()).unwrap() {
                    continue;
                }
                for t in &elems {
                    assert!(!sg.face_contains(&face, s.add(t).coords()).unwrap());
                }
            }
        }
    }
}

#[test]
fn omega_exists_iff_pointed() {
    for sg in semigroups() {
        assert_eq!(PositiveSemicharacter::omega(&sg).is_ok(), sg.is_pointed());
    }
}
