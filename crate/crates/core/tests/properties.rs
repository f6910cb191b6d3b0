use std::collections::HashSet;

use cayley_core::cayley::bidir;
use cayley_core::classify::{ClassifyOptions, NormaliserMode};
use cayley_core::interval::GradedInterval;
use cayley_core::median::{brute_force_medians, interior, medians, steiner_weight, Triangle};
use cayley_core::perm::factorial;
use cayley_core::{
    classify, normaliser, order_isomorphic, theorem1_check, DistanceOracle, Element, GeodesicMode,
    GroupModel, Perm, Relation,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    (0..factorial(n)).prop_map(move |r| Perm::unrank(n, r))
}

fn elem(n: usize) -> impl Strategy<Value = Element> {
    perm(n).prop_map(Element::Perm)
}

fn circular(n: usize) -> &'static DistanceOracle {
    static CACHE: OnceLock<Vec<DistanceOracle>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (0..=7)
            .map(|k| DistanceOracle::new(GroupModel::sym_circular(k.max(3)).unwrap()).unwrap())
            .collect()
    })[n]
}

fn adjacent(n: usize) -> &'static DistanceOracle {
    static CACHE: OnceLock<Vec<DistanceOracle>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (0..=7)
            .map(|k| DistanceOracle::new(GroupModel::sym_adjacent(k.max(3)).unwrap()).unwrap())
            .collect()
    })[n]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn products_are_bijections(a in perm(7), b in perm(7)) {
        let c = a.then(&b);
        let mut seen = [false; 7];
        for i in 1..=7 {
            let v = c.image(i);
            prop_assert_eq!(v, b.image(a.image(i)));
            prop_assert!(!seen[v - 1]);
            seen[v - 1] = true;
        }
        prop_assert_eq!(Perm::unrank(7, c.rank()), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn sign_is_multiplicative(a in perm(7), b in perm(7)) {
        prop_assert_eq!(a.then(&b).sign(), a.sign() * b.sign());
        prop_assert_eq!(a.inverse().sign(), a.sign());
        prop_assert_eq!(a.sign() == 1, a.inversions() % 2 == 0);
    }

    #[test]
    fn cycle_text_round_trips(a in perm(7)) {
        prop_assert_eq!(Perm::parse(7, &a.to_string()).unwrap(), a.clone());
        let m = GroupModel::sym_circular(7).unwrap();
        let e = Element::Perm(a);
        prop_assert_eq!(m.parse_element(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn geodesic_words_reach_the_target(g in elem(6), h in elem(6)) {
        let o = circular(6);
        let d = o.distance(&g, &h).unwrap();
        let set = o.geodesics(&g, &h, GeodesicMode::Enumerate { cap: 50 }).unwrap();
        prop_assert!(!set.words.is_empty());
        for w in &set.words {
            prop_assert_eq!(w.len() as u32, d);
            prop_assert_eq!(o.model().apply_word(&g, w).unwrap(), h.clone());
        }
    }

    #[test]
    fn left_invariance_and_triangle_inequality(g in elem(6), h in elem(6), k in elem(6), x in elem(6)) {
        let o = circular(6);
        let m = o.model();
        let d = o.distance(&g, &h).unwrap();
        prop_assert_eq!(o.distance(&m.multiply(&k, &g).unwrap(), &m.multiply(&k, &h).unwrap()).unwrap(), d);
        prop_assert!(d <= o.distance(&g, &x).unwrap() + o.distance(&x, &h).unwrap());
        prop_assert_eq!(o.distance(&h, &g).unwrap(), d);
    }

    #[test]
    fn word_length_parity_matches_sign(g in elem(6)) {
        let l = circular(6).length(&g).unwrap();
        prop_assert_eq!(l.is_multiple_of(2), g.as_perm().unwrap().sign() == 1);
        let l = adjacent(6).length(&g).unwrap();
        prop_assert_eq!(l.is_multiple_of(2), g.as_perm().unwrap().sign() == 1);
    }

    #[test]
    fn geodesic_count_matches_interval(g in elem(6), h in elem(6)) {
        let o = circular(6);
        let counted = o.geodesics(&g, &h, GeodesicMode::CountOnly).unwrap().count;
        let stats = GradedInterval::build(o, &g, &h).unwrap().stats();
        prop_assert_eq!(counted, stats.geodesic_count);
        prop_assert_eq!(stats.size, stats.rank_profile.iter().sum::<usize>());
        prop_assert!(stats.max_antichain >= *stats.rank_profile.iter().max().unwrap());
        prop_assert_eq!(stats.is_sperner, stats.max_antichain == *stats.rank_profile.iter().max().unwrap());
    }

    #[test]
    fn membership_is_the_distance_equation(g in elem(5), h in elem(5)) {
        let o = circular(5);
        let d = o.distance(&g, &h).unwrap();
        let i = GradedInterval::build(o, &g, &h).unwrap();
        for x in o.model().elements().unwrap() {
            let on = o.distance(&g, &x).unwrap() + o.distance(&x, &h).unwrap() == d;
            prop_assert_eq!(on, i.contains(&x), "{}", x);
        }
    }

    #[test]
    fn analytic_inversion_count_matches_search(g in elem(7), h in elem(7)) {
        let o = adjacent(7);
        prop_assert_eq!(o.distance(&g, &h).unwrap(), bidir::distance(o.model(), &g, &h).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn table_matches_search_in_s7(g in elem(7), h in elem(7)) {
        let o = circular(7);
        prop_assert_eq!(o.distance(&g, &h).unwrap(), bidir::distance(o.model(), &g, &h).unwrap());
    }

    #[test]
    fn cyclic_semigroup_intervals_are_chains(n in 2u64..40, a in 0u64..40, b in 0u64..40) {
        let o = DistanceOracle::new(GroupModel::cyclic(n, false).unwrap()).unwrap();
        let (g, h) = (Element::Residue(a % n), Element::Residue(b % n));
        let i = GradedInterval::build(&o, &g, &h).unwrap();
        let d = ((b % n) + n - (a % n)) % n;
        prop_assert_eq!(i.length() as u64, d);
        prop_assert!(i.rank_profile().iter().all(|&c| c == 1));
        prop_assert_eq!(i.geodesic_count(), 1);
        prop_assert!(i.is_lattice());
    }

    #[test]
    fn theorem1_on_random_conjugations(g in elem(6), pick in any::<prop::sample::Index>()) {
        for o in [circular(6), adjacent(6)] {
            let m = o.model();
            let norm = normaliser(m, m.generators(), NormaliserMode::Enumerate).unwrap();
            let members = norm.members().unwrap();
            let pi = pick.get(members);
            prop_assert!(theorem1_check(o, &g, pi, m.generators()).unwrap());
        }
    }

    #[test]
    fn medians_are_translation_invariant(c in prop::array::uniform3(elem(5)), k in elem(5)) {
        let o = circular(5);
        let m = o.model();
        let base = medians(o, &Triangle::new(m, &c[0], &c[1], &c[2]).unwrap()).unwrap();
        let moved: Vec<Element> = c.iter().map(|x| m.multiply(&k, x).unwrap()).collect();
        let shifted = medians(o, &Triangle::new(m, &moved[0], &moved[1], &moved[2]).unwrap()).unwrap();
        let mut expected: Vec<Element> = base.minimizers.iter().map(|x| m.multiply(&k, x).unwrap()).collect();
        expected.sort();
        prop_assert_eq!(shifted.minimizers, expected);
        prop_assert_eq!(shifted.weight, base.weight);
        prop_assert_eq!(shifted.interior_size, base.interior_size);
    }

    #[test]
    fn steiner_weight_bounds_and_parity(c in prop::array::uniform3(elem(5))) {
        let o = circular(5);
        let m = o.model();
        let t = Triangle::new(m, &c[0], &c[1], &c[2]).unwrap();
        let [a, b, z] = t.corners().clone();
        let perimeter = o.distance(&a, &b).unwrap() + o.distance(&b, &z).unwrap() + o.distance(&a, &z).unwrap();
        let bound = perimeter.div_ceil(2);
        let mut weight_by_sign = [None, None];
        for h in m.elements().unwrap() {
            let w = steiner_weight(o, &h, &t).unwrap();
            prop_assert!(w >= bound);
            let slot = &mut weight_by_sign[(h.as_perm().unwrap().sign() == 1) as usize];
            match slot {
                None => *slot = Some(w % 2),
                Some(parity) => prop_assert_eq!(*parity, w % 2),
            }
        }
        let region = interior(o, &t).unwrap();
        for p in &region.points {
            for k in 0..3 {
                prop_assert!(p.distances[k] <= region.deltas[k]);
            }
        }
        let brute = brute_force_medians(o, &t).unwrap();
        let signs: HashSet<i8> = brute.minimizers.iter().map(|x| x.as_perm().unwrap().sign()).collect();
        prop_assert_eq!(signs.len(), 1);
    }

    #[test]
    fn deltas_match_a_scan_of_the_interval(c in prop::array::uniform3(elem(5))) {
        let o = circular(5);
        let m = o.model();
        let t = Triangle::new(m, &c[0], &c[1], &c[2]).unwrap();
        let [a, b, z] = t.corners().clone();
        let region = interior(o, &t).unwrap();
        let scan = |corner: &Element, x: &Element, y: &Element| {
            let d = o.distance(x, y).unwrap();
            m.elements()
                .unwrap()
                .filter(|h| o.distance(x, h).unwrap() + o.distance(h, y).unwrap() == d)
                .map(|h| o.distance(corner, &h).unwrap())
                .min()
                .unwrap()
        };
        prop_assert_eq!(region.deltas, [scan(&a, &b, &z), scan(&b, &a, &z), scan(&z, &a, &b)]);
    }
}

fn s5_intervals() -> &'static Vec<GradedInterval> {
    static CACHE: OnceLock<Vec<GradedInterval>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let o = adjacent(5);
        (0..50u64)
            .map(|i| {
                let h = o.model().unrank((i * 37) % 120).unwrap();
                GradedInterval::from_identity(o, &h).unwrap()
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn isomorphism_is_an_equivalence(a in 0usize..50, b in 0usize..50, c in 0usize..50) {
        let all = s5_intervals();
        let (x, y, z) = (&all[a], &all[b], &all[c]);
        prop_assert!(order_isomorphic(x, x));
        prop_assert_eq!(order_isomorphic(x, y), order_isomorphic(y, x));
        if order_isomorphic(x, y) && order_isomorphic(y, z) {
            prop_assert!(order_isomorphic(x, z));
        }
    }

    #[test]
    fn relabelled_posets_stay_isomorphic(i in 0usize..50, seed in any::<u64>()) {
        let base = s5_intervals()[i].poset();
        let n = base.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for k in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(k, (state >> 33) as usize % (k + 1));
        }
        let rank = (0..n).map(|x| base.rank(order[x])).collect();
        let mut where_is = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            where_is[old] = new;
        }
        let covers: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| base.covers_of(x).iter().map(move |&y| (x, y as usize)))
            .map(|(x, y)| (where_is[x], where_is[y]))
            .collect();
        let shuffled = cayley_core::interval::GradedPoset::from_covers(rank, &covers).unwrap();
        prop_assert!(cayley_core::interval::posets_isomorphic(&base, &shuffled));
    }
}

#[test]
fn iso_classes_refine_the_scalar_relations() {
    for o in [adjacent(5), circular(5)] {
        let all: Vec<Element> = o.model().elements().unwrap().collect();
        let iso = classify(
            o,
            &all,
            Relation::SameIntervalIso,
            ClassifyOptions::default(),
        )
        .unwrap();
        assert!(iso.unclassified.is_empty());
        for relation in [
            Relation::SameLength,
            Relation::SameGeodesicCount,
            Relation::SameIntervalSize,
        ] {
            let coarse = classify(o, &all, relation, ClassifyOptions::default()).unwrap();
            for class in &iso.classes {
                let first = coarse.signature_of[&class[0]];
                assert!(
                    class.iter().all(|x| coarse.signature_of[x] == first),
                    "{relation}"
                );
            }
        }
    }
}

#[test]
fn exhaustive_short_corner_triangles_in_s6_satisfy_the_parity_law() {
    let o = circular(6);
    let m = o.model();
    let short: Vec<Element> = o.ball(&m.identity(), 3).unwrap();
    let mut checked = 0;
    for (i, a) in short.iter().enumerate() {
        for b in &short[i..] {
            let t = Triangle::new(m, &m.identity(), a, b).unwrap();
            assert!(cayley_core::median_parity_check(o, &t).unwrap(), "{a} {b}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn s6_interior_scan_equals_whole_group_scan() {
    let o = circular(6);
    let m = o.model();
    for i in 0..50u64 {
        let c: Vec<Element> = (0..3)
            .map(|k| m.unrank((i * 131 + k * 257 + 7) % 720).unwrap())
            .collect();
        let t = Triangle::new(m, &c[0], &c[1], &c[2]).unwrap();
        let fast = medians(o, &t).unwrap();
        let slow = brute_force_medians(o, &t).unwrap();
        assert_eq!(fast.minimizers, slow.minimizers);
        assert_eq!(fast.weight, slow.weight);
    }
}
