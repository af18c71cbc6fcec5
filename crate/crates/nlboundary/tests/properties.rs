use nlboundary::degeneration::DegenerationData;
use nlboundary::exact::{kernel_saturated, rat, smith_normal_form, solve_integer, to_rat, IntMatrix, Matrix};
use nlboundary::fixtures;
use nlboundary::orbitlab::{seed_model_ii, seed_model_iii};
use nlboundary::quadlattice::Lattice;
use nlboundary::special::beta32;
use nlboundary::thetaforms::{rep_numbers, theta_series};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn mat(rows: usize, cols: usize, v: &[i64]) -> IntMatrix {
    Matrix::from_vec(rows, cols, v.iter().map(|&x| BigInt::from(x)).collect())
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = BigInt::from(k);
        u = &u * &e;
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_diagonal_with_divisibility(v in prop::collection::vec(-6i64..=6, 12)) {
        let m = mat(3, 4, &v);
        let (u, d, w) = smith_normal_form(&m);
        prop_assert_eq!(&(&u * &m) * &w, d.clone());
        for i in 0..3 {
            for j in 0..4 {
                if i != j {
                    prop_assert!(d[(i, j)].is_zero());
                }
            }
        }
        for i in 0..2 {
            let (a, b) = (&d[(i, i)], &d[(i + 1, i + 1)]);
            if !a.is_zero() {
                prop_assert!((b % a).is_zero());
            } else {
                prop_assert!(b.is_zero());
            }
        }
    }

    #[test]
    fn kernel_is_annihilated(v in prop::collection::vec(-5i64..=5, 10)) {
        let m = mat(2, 5, &v);
        let k = kernel_saturated(&m);
        prop_assert!((&m * &k.transpose()).is_zero());
        let rank = nlboundary::exact::rank_int(&m);
        prop_assert_eq!(k.rows(), 5 - rank);
        if k.rows() > 0 {
            prop_assert!(nlboundary::exact::is_primitive(&k));
        }
    }

    #[test]
    fn solve_recovers_consistent_systems(v in prop::collection::vec(-5i64..=5, 9), x in prop::collection::vec(-4i64..=4, 3)) {
        let m = mat(3, 3, &v);
        let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
        let c = m.mul_vec(&x);
        let s = solve_integer(&m, &c).expect("consistent system");
        prop_assert_eq!(m.mul_vec(&s), c);
    }

    #[test]
    fn signature_is_basis_invariant(
        a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, p in -4i64..=4, q in -4i64..=4, r in -4i64..=4,
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
    ) {
        let g = mat(3, 3, &[2 * a, p, q, p, 2 * b, r, q, r, 2 * c]);
        let Ok(l) = Lattice::new(g.clone(), "g") else { return Ok(()) };
        let u = unimodular(3, &ops);
        let g2 = &(&u.transpose() * &g) * &u;
        let l2 = Lattice::new(g2, "g'").unwrap();
        prop_assert_eq!(l.signature(), l2.signature());
        prop_assert_eq!(l.det(), l2.det());
    }

    #[test]
    fn rep_numbers_match_brute_force(a in 1i64..=3, c in 1i64..=3, b in -2i64..=2, m_max in 1i64..=6) {
        prop_assume!(4 * a * c - b * b > 0);
        let l = Lattice::new(mat(2, 2, &[2 * a, b, b, 2 * c]), "bin").unwrap();
        let zero = vec![BigRational::zero(); 2];
        let got = rep_numbers(&l, &zero, &rat(m_max, 1)).unwrap();
        let det = (4 * a * c - b * b) as f64;
        let rx = ((2.0 * m_max as f64) * (2 * c) as f64 / det).sqrt() as i64 + 1;
        let ry = ((2.0 * m_max as f64) * (2 * a) as f64 / det).sqrt() as i64 + 1;
        let mut want = std::collections::BTreeMap::new();
        for x in -rx..=rx {
            for y in -ry..=ry {
                let qv = 2 * a * x * x + 2 * b * x * y + 2 * c * y * y;
                if qv <= 2 * m_max {
                    *want.entry(rat(qv, 2)).or_insert(0u64) += 1;
                }
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn expansions_are_linear(k in 1i64..=3, s in -5i64..=5, x in -0.5f64..0.5, y in 0.7f64..2.0) {
        let la = Lattice::new(mat(1, 1, &[2 * k]), "a").unwrap();
        let f = theta_series(&la, &rat(30, 1)).unwrap();
        let mut g = f.mul_g2();
        g.weight = f.weight.clone();
        let h = f.scale(&rat(s, 1)).plus(&g).unwrap();
        let tau = Complex::new(x, y);
        let lhs = h.to_expansion::<f64>().eval(tau).unwrap();
        let fe = f.to_expansion::<f64>().eval(tau).unwrap();
        let ge = g.to_expansion::<f64>().eval(tau).unwrap();
        for i in 0..lhs.len() {
            let rhs = fe[i] * s as f64 + ge[i];
            prop_assert!((lhs[i] - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn hodge_norm_relation(coef in prop::collection::vec(-6i64..=6, 4), x in -1.0f64..1.0, y in 0.2f64..5.0, pick in 0usize..2) {
        let model = if pick == 0 {
            let (l, t) = fixtures::type_ii_seed_plus(2);
            seed_model_ii(DegenerationData::from_monodromy(t, l).unwrap()).unwrap()
        } else {
            let (l, t) = fixtures::type_iii_seed();
            seed_model_iii(DegenerationData::from_monodromy(t, l).unwrap()).unwrap()
        };
        let w2 = to_rat(&model.d.w[2]);
        let n = w2.cols();
        let mut v = vec![BigRational::zero(); n];
        for (i, c) in coef.iter().take(w2.rows()).enumerate() {
            for j in 0..n {
                v[j] += &w2[(i, j)] * rat(*c, 3);
            }
        }
        let (normsq, h) = model.hodge_norm(&v, Complex::new(x, y)).unwrap();
        let qv = to_rat(model.d.host.gram()).pair(&v, &v).to_f64().unwrap();
        prop_assert!(h >= 0.0);
        prop_assert!((normsq - qv - 2.0 * h).abs() < 1e-10 * (1.0 + normsq.abs()));
    }

    #[test]
    fn beta_is_positive_and_decreasing(t in 0.0f64..60.0, dt in 1e-3f64..5.0) {
        let a = beta32(t).unwrap();
        let b = beta32(t + dt).unwrap();
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
    }
}
