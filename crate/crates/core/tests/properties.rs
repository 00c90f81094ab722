use entry_patterns::canon::{all_permutations, are_equivalent, canonical_form, canonical_key, orbit_size};
use entry_patterns::constructions::with_k_classes;
use entry_patterns::format::{parse_pattern, write_pattern};
use entry_patterns::normality::{
    eq3_filter, is_normal_binary, is_normal_binary_assignments, is_normal_lemma2, is_normal_symbolic,
};
use entry_patterns::{max_nonsymmetric_classes, Pattern};
use proptest::prelude::*;

fn pattern(max_order: usize, max_labels: u16) -> impl Strategy<Value = Pattern> {
    (1..=max_order, 1..=max_labels).prop_flat_map(|(n, k)| {
        prop::collection::vec(0..k, n * n).prop_map(move |cells| Pattern::from_cells(n, &cells).unwrap())
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn pattern_and_permutation(max_order: usize, max_labels: u16) -> impl Strategy<Value = (Pattern, Vec<usize>)> {
    pattern(max_order, max_labels).prop_flat_map(|p| {
        let n = p.order();
        (Just(p), permutation(n))
    })
}

/// A normal nonsymmetric pattern, permuted.
fn normal_pattern() -> impl Strategy<Value = Pattern> {
    (3usize..=6)
        .prop_flat_map(|n| (Just(n), 2..=max_nonsymmetric_classes(n), permutation(n)))
        .prop_map(|(n, k, perm)| with_k_classes(n, k).unwrap().permute(&perm).unwrap())
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

proptest! {
    #[test]
    fn renaming_labels_changes_nothing(p in pattern(5, 6), shift in 1u32..1000) {
        let renamed: Vec<String> = p.cells().iter().map(|&c| format!("x{}", u32::from(c) * 7 + shift)).collect();
        let q = Pattern::from_cells(p.order(), &renamed).unwrap();
        prop_assert_eq!(&q, &p);
    }

    #[test]
    fn permute_then_inverse_is_identity((p, perm) in pattern_and_permutation(6, 5)) {
        let back = p.permute(&perm).unwrap().permute(&inverse(&perm)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn normality_is_invariant_under_similarity((p, perm) in pattern_and_permutation(5, 4)) {
        let normal = is_normal_lemma2(&p);
        prop_assert_eq!(is_normal_lemma2(&p.permute(&perm).unwrap()), normal);
        prop_assert_eq!(is_normal_lemma2(&p.transpose()), normal);
    }

    #[test]
    fn canonical_key_is_a_class_invariant((p, perm) in pattern_and_permutation(5, 5)) {
        let q = p.permute(&perm).unwrap();
        let kp = canonical_key(&p).unwrap();
        prop_assert_eq!(&kp.cells, &canonical_key(&q).unwrap().cells);
        prop_assert!(are_equivalent(&p, &q).unwrap());
        prop_assert_eq!(p.permute(&kp.witness).unwrap(), canonical_form(&p).unwrap());
    }

    #[test]
    fn canonical_form_is_minimal_in_its_orbit(p in pattern(4, 4)) {
        let form = canonical_form(&p).unwrap();
        for perm in all_permutations(p.order()) {
            prop_assert!(form.cells() <= p.permute(&perm).unwrap().cells());
        }
        let factorial: usize = (1..=p.order()).product();
        prop_assert_eq!(factorial % orbit_size(&p).unwrap(), 0);
    }

    #[test]
    fn oracles_agree(p in pattern(4, 5)) {
        let lemma2 = is_normal_lemma2(&p);
        prop_assert_eq!(is_normal_symbolic(&p), lemma2);
        prop_assert_eq!(is_normal_binary_assignments(&p).unwrap(), lemma2);
    }

    #[test]
    fn merging_classes_keeps_normality(p in normal_pattern(), seed in any::<u64>()) {
        prop_assert!(is_normal_lemma2(&p));
        let k = p.class_count();
        let parts = 1 + (seed as usize) % k;
        let mut groups = vec![Vec::new(); parts];
        for c in 0..k {
            let g = if c < parts { c } else { (seed as usize >> (c % 32)) % parts };
            groups[g].push(c);
        }
        let merged = p.merge_classes(&groups).unwrap();
        prop_assert_eq!(merged.class_count(), parts);
        prop_assert!(is_normal_lemma2(&merged));
        prop_assert!(is_normal_symbolic(&merged));
    }

    #[test]
    fn coefficient_matrices_of_normal_patterns_are_balanced_and_normal(p in normal_pattern()) {
        for a in p.coefficient_matrices() {
            prop_assert!(is_normal_binary(&a));
            prop_assert!(eq3_filter(&a));
        }
    }

    #[test]
    fn text_format_round_trips(p in pattern(8, 40)) {
        prop_assert_eq!(parse_pattern(&write_pattern(&p)).unwrap(), p);
    }
}

#[test]
fn order_three_key_buckets_are_single_orbits() {
    use std::collections::BTreeMap;
    use entry_patterns::search::restricted_growth_strings;

    let mut buckets: BTreeMap<Vec<u16>, Vec<Pattern>> = BTreeMap::new();
    for cells in restricted_growth_strings(9) {
        let p = Pattern::from_rgs(3, cells).unwrap();
        buckets.entry(canonical_key(&p).unwrap().cells).or_default().push(p);
    }
    let perms = all_permutations(3);
    let mut checked = 0;
    for members in buckets.values() {
        let first = &members[0];
        let mut sizes = first.class_sizes();
        sizes.sort_unstable();
        for q in members {
            let mut q_sizes = q.class_sizes();
            q_sizes.sort_unstable();
            assert_eq!(q_sizes, sizes);
            assert_eq!(q.class_count(), first.class_count());
            assert_eq!(q.is_symmetric(), first.is_symmetric());
            assert_eq!(is_normal_lemma2(q), is_normal_lemma2(first));
        }
        if members.len() > 1 && checked < 100 {
            checked += 1;
            for q in members {
                assert!(perms.iter().any(|s| &q.permute(s).unwrap() == first), "{q} vs {first}");
            }
        }
    }
    assert_eq!(checked, 100);
}
