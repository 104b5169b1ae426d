use std::sync::OnceLock;

use proptest::prelude::*;

use ppalg_core::catalog::{Catalog, ModuleSum};
use ppalg_core::cluster::matrix_mutate;
use ppalg_core::endo_quiver::s_matrix;
use ppalg_core::intmat;
use ppalg_core::linalg::{interpolate_polynomial, poly_eval, Field, Matrix};
use ppalg_core::module::Module;
use ppalg_core::module_rep::ext1_dim;
use ppalg_core::poly::{gcd, LaurentExpr, Poly};
use ppalg_core::quiver::DynkinType;
use ppalg_core::semicanonical::{count_flags_fq, reduce_module};

fn a3() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::enumerate(DynkinType::a(3)).unwrap())
}

fn skew(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-3i64..=3, n * (n - 1) / 2).prop_map(move |up| {
        let mut b = vec![vec![0; n]; n];
        let mut it = up.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = it.next().unwrap();
                b[i][j] = x;
                b[j][i] = -x;
            }
        }
        b
    })
}

fn skew_with_k() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (2usize..=6).prop_flat_map(|n| (skew(n), 0..n))
}

/// Unit lower times unit upper triangular: always invertible.
fn invertible(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (prop::collection::vec(-2i64..=2, n * n), prop::collection::vec(-2i64..=2, n * n)).prop_map(move |(l, u)| {
        let lo: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 1 } else if j < i { l[i * n + j] } else { 0 }).collect()).collect();
        let up: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 1 } else if j > i { u[i * n + j] } else { 0 }).collect()).collect();
        intmat::mul(&lo, &up)
    })
}

fn poly2() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..3, 0u32..3, -3i64..=3), 1..4).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(2), |acc, (a, b, c)| acc.add(&Poly::monomial(2, &[a, b], c.into())))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutation_is_an_involution((b, k) in skew_with_k()) {
        let once = matrix_mutate(&b, k).unwrap();
        prop_assert_eq!(matrix_mutate(&once, k).unwrap(), b);
    }

    #[test]
    fn mutation_is_s_conjugation((b, k) in skew_with_k()) {
        let s = s_matrix(&b, k).unwrap();
        let conj = intmat::mul(&intmat::mul(&intmat::transpose(&s), &b), &s);
        prop_assert_eq!(matrix_mutate(&b, k).unwrap(), conj);
        prop_assert_eq!(intmat::mul(&s, &s), intmat::identity(b.len()));
    }

    #[test]
    fn gcd_recovers_common_factor(a in poly2(), b in poly2(), c in poly2()) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let g = gcd(&a.mul(&c), &b.mul(&c));
        prop_assert!(g.div_exact(&c).is_some(), "gcd {:?} not divisible by {:?}", g, c);
        prop_assert!(a.mul(&c).div_exact(&g).is_some());
        prop_assert!(b.mul(&c).div_exact(&g).is_some());
    }

    #[test]
    fn laurent_division_round_trips(a in poly2(), b in poly2()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let x = LaurentExpr::from_poly(a);
        let y = LaurentExpr::from_poly(b);
        let q = x.div(&y);
        prop_assert_eq!(q.mul(&y), x.clone());
        prop_assert_eq!(x.add(&q), q.add(&x));
    }

    #[test]
    fn interpolation_round_trips(coeffs in prop::collection::vec(-20i64..=20, 1..6)) {
        let f = Field::Rational;
        let c: Vec<_> = coeffs.iter().map(|&x| f.from_i64(x)).collect();
        let pts: Vec<_> = (0..coeffs.len() as i64).map(|x| (f.from_i64(x + 2), poly_eval(&c, &f.from_i64(x + 2)))).collect();
        let back = interpolate_polynomial(&pts).unwrap();
        for x in -3..4 {
            prop_assert_eq!(poly_eval(&back, &f.from_i64(x)), poly_eval(&c, &f.from_i64(x)));
        }
    }

    #[test]
    fn identification_ignores_base_change(
        ids in prop::collection::vec(0usize..12, 1..3),
        seeds in prop::collection::vec(invertible(4), 3),
    ) {
        let cat = a3();
        let parts: Vec<&Module> = ids.iter().map(|&i| cat.rep(i)).collect();
        let m = Module::direct_sum_all(Field::Rational, cat.sig().clone(), &parts);
        let p: Vec<Matrix> = (0..3)
            .map(|v| {
                let d = m.dims()[v];
                let rows: Vec<Vec<i64>> = seeds[v][..d].iter().map(|r| r[..d].to_vec()).collect();
                Matrix::from_i64(Field::Rational, &rows)
            })
            .collect();
        let moved = m.conjugate(&p).unwrap();
        prop_assert_eq!(cat.canonical_sum(&moved).unwrap(), ModuleSum::from_ids(&ids));
    }

    #[test]
    fn ext1_is_symmetric_and_additive(x in 0usize..12, y in 0usize..12, z in 0usize..12) {
        let cat = a3();
        let (rx, ry, rz) = (cat.rep(x), cat.rep(y), cat.rep(z));
        prop_assert_eq!(ext1_dim(rx, ry).unwrap(), ext1_dim(ry, rx).unwrap());
        let sum = Module::direct_sum(rx, ry);
        prop_assert_eq!(ext1_dim(&sum, rz).unwrap(), ext1_dim(rx, rz).unwrap() + ext1_dim(ry, rz).unwrap());
    }

    #[test]
    fn semisimple_flags_count_q_factorial(m in 1usize..=3, p in prop::sample::select(vec![2u64, 3, 5])) {
        let cat = a3();
        let s = cat.rep(cat.by_profile("2").unwrap()).power(m);
        let sp = reduce_module(&s, p).unwrap();
        // [m]_p! = Π (1 + p + … + p^{j−1})
        let expected: u64 = (1..=m as u32).map(|j| (0..j).map(|e| p.pow(e)).sum::<u64>()).product();
        prop_assert_eq!(count_flags_fq(&sp, &vec![1; m]), expected);
    }
}
