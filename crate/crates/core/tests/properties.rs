use proptest::prelude::*;

use circsep::bijection::{backward, forward, zag, zig};
use circsep::count::{
    count_circle, count_system, count_system_convolution, count_system_fixed,
    count_system_fixed_recursive, CountValue,
};
use circsep::enumerate::{
    count_by_enumeration, enumerate_gap, enumerate_naive, EnumerationRequest,
};
use circsep::system::{circular_distance, flatten_set, is_s_separated};
use circsep::{CircleSystem, Element, SelectionSet};

fn sizes(max_p: usize, lo: usize, hi: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(lo..=hi, 1..=max_p)
}

fn system_and_subset() -> impl Strategy<Value = (CircleSystem, SelectionSet)> {
    sizes(3, 1, 9).prop_flat_map(|sizes| {
        let sys = CircleSystem::new(sizes).unwrap();
        let all: Vec<Element> = sys.elements().collect();
        let n = all.len();
        (Just(sys), prop::sample::subsequence(all, 0..=n.min(6)))
            .prop_map(|(sys, elems)| (sys, SelectionSet::new(elems).unwrap()))
    })
}

proptest! {
    #[test]
    fn distance_is_symmetric_and_bounded((sys, set) in system_and_subset()) {
        for a in set.iter() {
            for b in set.iter() {
                let d = circular_distance(a, b, &sys);
                prop_assert_eq!(d, circular_distance(b, a, &sys));
                if let Some(d) = d {
                    prop_assert!(d <= sys.size(a.circle()) / 2);
                }
            }
        }
    }

    #[test]
    fn separation_is_monotone_under_subsets((sys, set) in system_and_subset(), s in 0usize..4, drop in any::<prop::sample::Index>()) {
        prop_assert!(is_s_separated(&set, &sys, 0));
        if is_s_separated(&set, &sys, s) && !set.is_empty() {
            let gone = set.elements()[drop.index(set.len())];
            let smaller = SelectionSet::new(set.iter().copied().filter(|e| *e != gone)).unwrap();
            prop_assert!(is_s_separated(&smaller, &sys, s));
        }
    }

    #[test]
    fn gap_enumerator_matches_brute_force(sizes in sizes(3, 1, 7), s in 0usize..4, k in 0usize..5, fixed in any::<prop::sample::Index>()) {
        let sys = CircleSystem::new(sizes).unwrap();
        let mut req = EnumerationRequest::new(sys.clone(), s, k);
        let naive: Vec<_> = enumerate_naive(&req).collect();
        prop_assert_eq!(enumerate_gap(&req).collect::<Vec<_>>(), naive.clone());
        for set in &naive {
            prop_assert_eq!(set.len(), k);
            prop_assert!(is_s_separated(set, &sys, s));
        }
        let all: Vec<Element> = sys.elements().collect();
        req = req.with_fixed(all[fixed.index(all.len())]).unwrap();
        prop_assert_eq!(
            enumerate_gap(&req).collect::<Vec<_>>(),
            enumerate_naive(&req).collect::<Vec<_>>()
        );
    }

    #[test]
    fn rotation_invariance_on_one_circle(n in 1usize..13, s in 0usize..3, k in 1usize..4) {
        let sys = CircleSystem::single(n).unwrap();
        let counts: Vec<CountValue> = (1..=n)
            .map(|a| count_by_enumeration(&EnumerationRequest::new(sys.clone(), s, k).with_fixed(Element::new(a, 1).unwrap()).unwrap()))
            .collect();
        prop_assert!(counts.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn double_count_identity(sizes in sizes(3, 1, 6), s in 0usize..3, k in 0usize..4) {
        let sys = CircleSystem::new(sizes).unwrap();
        let total = count_by_enumeration(&EnumerationRequest::new(sys.clone(), s, k));
        let per_element: CountValue = sys
            .elements()
            .map(|e| count_by_enumeration(&EnumerationRequest::new(sys.clone(), s, k).with_fixed(e).unwrap()))
            .sum();
        prop_assert_eq!(per_element, CountValue::from(k) * total);
    }

    #[test]
    fn closed_forms_agree_beyond_oracle_range(sizes in sizes(4, 1, 400), s in 0usize..6, k in 0usize..12) {
        let sys = CircleSystem::new(sizes.clone()).unwrap();
        prop_assume!(sizes.iter().all(|&n| n > s * k));
        let closed = count_system(&sys, s, k).unwrap();
        prop_assert_eq!(count_system_convolution(&sys, s, k).unwrap(), closed.clone());
        if k >= 1 {
            let fixed = count_system_fixed(&sys, s, k, &Element::new(1, 1).unwrap()).unwrap();
            prop_assert_eq!(count_system_fixed_recursive(&sys, s, k).unwrap(), fixed.clone());
            prop_assert_eq!(CountValue::from(k) * closed, CountValue::from(sys.total()) * fixed);
        }
        for &n in &sizes {
            prop_assert!(count_circle(n, s, k).is_ok());
        }
    }

    #[test]
    fn counts_are_permutation_invariant(mut sizes in sizes(4, 1, 30), s in 0usize..4, k in 1usize..6, rot in 0usize..4) {
        prop_assume!(sizes.iter().all(|&n| n > s * k));
        let before = CircleSystem::new(sizes.clone()).unwrap();
        let len = sizes.len();
        sizes.rotate_left(rot % len);
        let after = CircleSystem::new(sizes).unwrap();
        prop_assert_eq!(count_system(&before, s, k).unwrap(), count_system(&after, s, k).unwrap());
        // the fixed element's circle moves with the rotation
        let e_before = Element::new(1, 1).unwrap();
        let e_after = Element::new(1, (len - rot % len) % len + 1).unwrap();
        prop_assert_eq!(
            count_system_fixed(&before, s, k, &e_before).unwrap(),
            count_system_fixed(&after, s, k, &e_after).unwrap()
        );
    }

    #[test]
    fn bijection_round_trips(s in 1usize..4, k in 1usize..6, extra1 in 0usize..8, extra2 in 0usize..8, pick in any::<prop::sample::Index>()) {
        let n1 = s * k + 1 + extra1;
        let n2 = s * k + extra2;
        let sys = CircleSystem::new(vec![n1, n2]).unwrap();
        let req = EnumerationRequest::new(sys.clone(), s, k).with_fixed(Element::new(1, 1).unwrap()).unwrap();
        let domain: Vec<_> = enumerate_gap(&req).collect();
        prop_assume!(!domain.is_empty());
        let a = &domain[pick.index(domain.len())];
        let image = forward(a, &sys, s).unwrap();
        let big = CircleSystem::single(n1 + n2).unwrap();
        prop_assert!(is_s_separated(&image, &big, s));
        prop_assert_eq!(&backward(&image, &sys, s).unwrap(), a);
        let (z, zig_trace) = zig(a, &sys, s).unwrap();
        let (_, zag_trace) = zag(&z, &sys, s).unwrap();
        prop_assert_eq!(zig_trace.order, zag_trace.order);
        prop_assert_eq!(flatten_set(&z, &sys).unwrap(), image);
    }
}
