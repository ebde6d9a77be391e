use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use toricfan::bipartite::{gale_transform, incidence_matrix};
use toricfan::exact::{
    det, hnf, is_hermite_normal_form, is_saturated, kernel_lattice, lp_feasible, rank,
    IntegerMatrix, LinearConstraint, RationalVector,
};
use toricfan::groebner::{
    buchberger, generators_from_lattice_basis, ip_brute_force, ip_solve, lattice_ideal_gb_any,
    Binomial, Budget, IPInstance, TermOrder,
};

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, c), r)
            .prop_map(move |rows| IntegerMatrix::from_rows_with_cols(&rows, c))
    })
}

/// Exact 2-variable feasibility of `a x >= b` rows by Fourier-Motzkin.
fn fm_feasible(rows: &[(i64, i64, i64)]) -> bool {
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    // a x + c y >= b gives y >= b/c - (a/c) x for c > 0 and y <= ... for
    // c < 0; each lower/upper pair leaves (a1 - a2) x >= b1 - b2
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut ge = Vec::new();
    for &(a, c, b) in rows {
        match c.signum() {
            0 => ge.push((q(a), q(b))),
            1 => lower.push((q(a) / q(c), q(b) / q(c))),
            _ => upper.push((q(a) / q(c), q(b) / q(c))),
        }
    }
    for (a1, b1) in &lower {
        for (a2, b2) in &upper {
            ge.push((a1 - a2, b1 - b2));
        }
    }
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for (a, b) in ge {
        if a.is_zero() {
            if b.is_positive() {
                return false;
            }
        } else if a.is_positive() {
            let v = b / a;
            lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
        } else {
            let v = b / a;
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_a_unimodular_normal_form(m in small_matrix(4, 4)) {
        let (h, u) = hnf(&m);
        prop_assert!(is_hermite_normal_form(&h));
        prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
        prop_assert_eq!(det(&u).unwrap().abs(), BigInt::one());
        prop_assert_eq!(rank(&h), rank(&m));
    }

    #[test]
    fn kernel_is_saturated_and_complementary(m in small_matrix(3, 5)) {
        let k = kernel_lattice(&m);
        prop_assert_eq!(rank(&m) + k.rows(), m.cols());
        if k.rows() > 0 {
            prop_assert!(m.mul(&k.transpose()).unwrap().is_zero());
            prop_assert!(is_saturated(&k));
        }
    }

    #[test]
    fn lp_agrees_with_fourier_motzkin(rows in prop::collection::vec((-3i64..=3, -3i64..=3, -3i64..=3), 1..6)) {
        let cs: Vec<LinearConstraint> = rows
            .iter()
            .filter(|(a, c, _)| *a != 0 || *c != 0)
            .map(|&(a, c, b)| LinearConstraint::new(vec![a.into(), c.into()], toricfan::exact::Relation::Ge, b.into()).unwrap())
            .collect();
        prop_assume!(!cs.is_empty());
        let kept: Vec<(i64, i64, i64)> = rows.iter().copied().filter(|(a, c, _)| *a != 0 || *c != 0).collect();
        let out = lp_feasible(&cs).unwrap();
        prop_assert_eq!(out.is_feasible(), fm_feasible(&kept));
        if let Some(w) = out.witness() {
            for c in &cs {
                prop_assert!(c.is_satisfied_by(w).unwrap());
            }
        }
    }

    #[test]
    fn reduced_basis_is_unique(weights in prop::collection::vec(1i64..=4, 6), perm in Just(()).prop_perturb(|_, mut rng| {
        let mut p: Vec<usize> = (0..5).collect();
        for i in (1..p.len()).rev() {
            let j = (rng.next_u32() as usize) % (i + 1);
            p.swap(i, j);
        }
        p
    })) {
        let cfg = incidence_matrix(2, 3).unwrap();
        let order = TermOrder::weighted(weights, None).unwrap();
        let gens = generators_from_lattice_basis(cfg.matrix(), &order).unwrap();
        let reference = buchberger(&gens, &order).unwrap();
        let shuffled: Vec<Binomial> = perm.iter().map(|&i| gens[i].clone()).collect();
        prop_assert_eq!(buchberger(&shuffled, &order).unwrap(), reference.clone());
        for g in reference.elements() {
            prop_assert_eq!(order.compare(&g.lead(), &g.trail()).unwrap(), std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn ip_matches_enumeration_on_k23(weights in prop::collection::vec(1i64..=3, 6), start in prop::collection::vec(0i64..=3, 6)) {
        let cfg = incidence_matrix(2, 3).unwrap();
        let gale = gale_transform(&cfg);
        let order = TermOrder::weighted(weights.clone(), None).unwrap();
        let gens = generators_from_lattice_basis(cfg.matrix(), &order).unwrap();
        let gb = buchberger(&gens, &order).unwrap();
        let inst = IPInstance::new(gale.matrix().clone(), weights, start).unwrap();
        let s = ip_solve(&inst, &gb).unwrap();
        prop_assert_eq!(s.point, ip_brute_force(&inst, &order).unwrap());
    }

    #[test]
    fn sign_vectors_flip_under_negation(c in prop::collection::vec(1i64..=9, 15)) {
        let cfg = incidence_matrix(3, 5).unwrap();
        let arr = toricfan::chamber::Arrangement::bonds(&cfg).unwrap();
        let p = RationalVector::new(cfg.apply(&c).unwrap().into_iter().map(BigRational::from_integer).collect());
        let s = toricfan::chamber::sign_vector(&arr, &p).unwrap();
        prop_assert_eq!(toricfan::chamber::sign_vector(&arr, &p.neg()).unwrap(), s.negated());
    }
    #[test]
    fn ip_matches_enumeration_on_arbitrary_lattices(
        a in (1usize..=2, 3usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-1i64..=3, c), r)),
        seed in prop::collection::vec((1i64..=3, 0i64..=2), 4),
    ) {
        let cols = a[0].len();
        let m = IntegerMatrix::from_rows(&a);
        let lattice = kernel_lattice(&m);
        prop_assume!(lattice.rows() > 0);
        let cost: Vec<i64> = seed[..cols].iter().map(|p| p.0).collect();
        let start: Vec<i64> = seed[..cols].iter().map(|p| p.1).collect();
        let order = TermOrder::weighted(cost.clone(), None).unwrap();
        let (gb, _) = lattice_ideal_gb_any(&lattice, &order, Budget::default()).unwrap();
        let inst = IPInstance::new(m, cost, start).unwrap();
        let s = ip_solve(&inst, &gb).unwrap();
        prop_assert_eq!(s.point, ip_brute_force(&inst, &order).unwrap());
    }
}
