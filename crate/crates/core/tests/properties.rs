use proptest::prelude::*;

use regen::formulas::{
    bhs_mincut, corollary_low_b, family_plus_mbr_sum, family_plus_mincut, fhs_mbr_point,
    fhs_mincut, fhs_mincut_by_profiles, shs_lower_bound, Scheme,
};
use regen::model::build_family_plus_partition;
use regen::perms::{
    check_mbr_minimizer, enumerate_y_profiles, modify, modify_potential, modify_with, y_vector,
    z_vector, FamilyIndexPermutation, NodeVector, SmallestChoice,
};
use regen::tradeoff::{curve, min_alpha_given_beta};
use regen::{classify::converse_condition, ExactScalar, FamilyStructure, Limits, SystemParams};

fn nkd(max_n: usize) -> impl Strategy<Value = SystemParams> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n, 1..n))
        .prop_map(|(n, k, d)| SystemParams::new(n, k, d).unwrap())
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (0i64..40, 1i64..7).prop_map(|(p, q)| ExactScalar::ratio(p, q))
}

fn shuffled(n: usize, d: usize) -> impl Strategy<Value = (FamilyStructure, Vec<usize>)> {
    let fs = FamilyStructure::new(n, d).unwrap();
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(move |order| (fs.clone(), order))
}

fn structure(max_n: usize) -> impl Strategy<Value = (FamilyStructure, Vec<usize>)> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, d)| shuffled(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn y_entries_are_bounded((fs, order) in structure(12)) {
        let pi: Vec<i64> = order.iter().map(|&i| fs.family_index[i - 1]).collect();
        let y = y_vector(&pi);
        prop_assert_eq!(y[0], 0);
        for (i, &v) in y.iter().enumerate() {
            prop_assert!(v <= i.min(fs.d));
        }
    }

    #[test]
    fn z_entries_are_bounded((fs, _) in structure(9), picks in prop::collection::vec(0usize..1000, 1..9)) {
        let r: Vec<usize> = picks.iter().map(|p| p % fs.n + 1).collect();
        let z = z_vector(&r, &fs.helper_sets);
        prop_assert_eq!(z[0], 0);
        for (i, &v) in z.iter().enumerate() {
            prop_assert!(v <= i.min(fs.d));
        }
    }

    #[test]
    fn distinct_nodes_transcribe_to_family_labels((fs, order) in structure(12)) {
        let z = z_vector(&order, &fs.helper_sets);
        let pi: Vec<i64> = order.iter().map(|&i| fs.family_index[i - 1]).collect();
        prop_assert_eq!(z, y_vector(&pi));
    }

    #[test]
    fn modify_removes_repeats_without_losing_help(
        (fs, _) in structure(9),
        picks in prop::collection::vec(0usize..1000, 1..9),
    ) {
        let k = picks.len().min(fs.n - 1).max(1);
        let r: Vec<usize> = picks[..k].iter().map(|p| p % fs.n + 1).collect();
        let run = modify_with(&r, &fs, &mut SmallestChoice);
        let out = NodeVector::new(run.output.clone(), fs.n).unwrap();
        prop_assert!(out.is_distinct());
        prop_assert_eq!(&modify(&NodeVector::new(r.clone(), fs.n).unwrap(), &fs), &out);
        let (z0, z1) = (z_vector(&r, &fs.helper_sets), z_vector(&run.output, &fs.helper_sets));
        for (a, b) in z0.iter().zip(&z1) {
            prop_assert!(b >= a);
        }
        prop_assert!(run.iterations.len() <= modify_potential(&r, &fs));
        for it in &run.iterations {
            prop_assert!(modify_potential(&it.after, &fs) < modify_potential(&it.before, &fs));
        }
    }

    #[test]
    fn minimizer_check_implies_minimum((fs, order) in structure(9), k_pick in 0usize..100) {
        let k = k_pick % (fs.n - 1) + 1;
        let entries: Vec<i64> = order.iter().map(|&i| fs.family_index[i - 1]).collect();
        let pi = FamilyIndexPermutation::new(entries.clone(), &fs).unwrap();
        if check_mbr_minimizer(&pi, k) {
            let own: usize = y_vector(&entries[..k]).iter().map(|y| fs.d - y).sum();
            let best = enumerate_y_profiles(fs.n, k, fs.d, &Limits::default())
                .unwrap()
                .iter()
                .map(|y| y.iter().map(|v| fs.d - v).sum::<usize>())
                .min()
                .unwrap();
            prop_assert_eq!(own, best);
        }
    }

    #[test]
    fn min_cuts_grow_with_alpha_and_beta(p in nkd(10), a in scalar(), b in scalar(), da in scalar(), db in scalar()) {
        let part = build_family_plus_partition(p.n, p.d).unwrap();
        let eval = |a: ExactScalar, b: ExactScalar| {
            (bhs_mincut(&p, a, b), fhs_mincut(&p, a, b).unwrap(), family_plus_mincut(&part, p.k, a, b).unwrap())
        };
        let base = eval(a, b);
        let more_a = eval(a + da, b);
        let more_b = eval(a, b + db);
        prop_assert!(more_a.0 >= base.0 && more_a.1 >= base.1 && more_a.2 >= base.2);
        prop_assert!(more_b.0 >= base.0 && more_b.1 >= base.1 && more_b.2 >= base.2);
    }

    #[test]
    fn family_selection_never_hurts(p in nkd(11), a in scalar(), b in scalar()) {
        prop_assert!(fhs_mincut(&p, a, b).unwrap() >= bhs_mincut(&p, a, b));
    }

    #[test]
    fn family_plus_no_worse_at_mbr(p in nkd(14), b in scalar()) {
        let a = b.times(p.d as i64);
        let part = build_family_plus_partition(p.n, p.d).unwrap();
        prop_assert!(family_plus_mincut(&part, p.k, a, b).unwrap() >= fhs_mincut(&p, a, b).unwrap());
    }

    #[test]
    fn prefix_dp_matches_profile_enumeration(p in nkd(9), a in scalar(), b in scalar()) {
        let l = Limits::default();
        prop_assert_eq!(fhs_mincut(&p, a, b).unwrap(), fhs_mincut_by_profiles(&p, a, b, &l).unwrap());
    }

    #[test]
    fn family_plus_closed_form_matches_allocation_search(p in nkd(30)) {
        prop_assume!(p.n >= 2 * p.d);
        let one = ExactScalar::int(1);
        let part = build_family_plus_partition(p.n, p.d).unwrap();
        let direct = family_plus_mincut(&part, p.k, ExactScalar::int(p.d as i64), one).unwrap();
        prop_assert_eq!(direct, ExactScalar::int(family_plus_mbr_sum(&p) as i64));
    }

    #[test]
    fn mbr_point_is_tight(p in nkd(12), m in (1i64..20, 1i64..5)) {
        let m = ExactScalar::ratio(m.0, m.1);
        let pt = fhs_mbr_point(&p, m).unwrap();
        prop_assert_eq!(fhs_mincut(&p, pt.alpha, pt.beta).unwrap(), m);
        let less = pt.alpha - pt.alpha / ExactScalar::int(7);
        prop_assert!(fhs_mincut(&p, less, pt.beta).unwrap() < m);
    }

    #[test]
    fn low_k_shape_matches(p in nkd(12), a in scalar(), b in scalar()) {
        if let Ok(v) = corollary_low_b(&p, a, b) {
            prop_assert_eq!(v, fhs_mincut(&p, a, b).unwrap());
        }
    }

    #[test]
    fn blind_optimal_triples_coincide(p in nkd(12), a in scalar(), b in scalar()) {
        if converse_condition(&p).is_some() {
            prop_assert_eq!(fhs_mincut(&p, a, b).unwrap(), bhs_mincut(&p, a, b));
        }
    }

    #[test]
    fn stationary_bound_is_exact_for_families(p in nkd(6), a in scalar(), b in scalar()) {
        let fs = FamilyStructure::new(p.n, p.d).unwrap();
        let lb = shs_lower_bound(&fs.helper_sets, p.k, a, b, &Limits::default()).unwrap();
        prop_assert_eq!(lb, fhs_mincut(&p, a, b).unwrap());
    }

    #[test]
    fn scalars_round_trip(x in scalar()) {
        let back: ExactScalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn curve_corners_are_exact_and_family_dominates(p in nkd(9), b in scalar()) {
        let one = ExactScalar::int(1);
        let l = Limits::default();
        for scheme in [Scheme::Bhs, Scheme::Fhs, Scheme::FamilyPlus] {
            for c in curve(scheme, &p, one).unwrap().corners {
                prop_assert_eq!(regen::formulas::scheme_mincut(scheme, &p, c.alpha, c.beta, &l).unwrap(), one);
            }
        }
        prop_assume!(!b.is_zero());
        if let Ok(blind) = min_alpha_given_beta(Scheme::Bhs, &p, b, one) {
            let fam = min_alpha_given_beta(Scheme::Fhs, &p, b, one).unwrap();
            prop_assert!(fam <= blind);
            prop_assert_eq!(fhs_mincut(&p, fam, b).unwrap(), one);
        }
    }
}
