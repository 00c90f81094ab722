use entry_patterns::canon::canonical_key;
use entry_patterns::constructions::extremal;
use entry_patterns::search::{
    bordered_forms_search, catalog_cover_search, lemma6_reduction_search, pruned_search, run_search, SearchConfig,
    SearchReport, Strategy,
};

fn assert_agree(a: &SearchReport, b: &SearchReport) {
    assert!(a.completed && b.completed);
    assert_eq!(a.max_classes_found, b.max_classes_found);
    assert_eq!(a.counts_by_k, b.counts_by_k);
    assert_eq!(a.witness_keys(), b.witness_keys());
}

#[test]
fn order_four_strategies_agree() {
    for k in [4, 5, 6] {
        let pruned = pruned_search(&SearchConfig::new(4, Strategy::PrunedDfs).min_classes(k)).unwrap();
        let cover = catalog_cover_search(&SearchConfig::new(4, Strategy::CatalogCover).min_classes(k)).unwrap();
        assert_agree(&pruned, &cover);
        if 3 * k > 16 {
            let l6 = lemma6_reduction_search(&SearchConfig::new(4, Strategy::Lemma6Reduction).min_classes(k)).unwrap();
            assert_agree(&pruned, &l6);
        }
    }
}

#[test]
fn equality_stratum_splits_by_smallest_class() {
    // with 4k > n², a pattern with k classes has a class of at most 3 cells
    for (n, k) in [(4, 5), (5, 8)] {
        let small = bordered_forms_search(&SearchConfig::new(n, Strategy::Lemma6Reduction).min_classes(k)).unwrap();
        let large = catalog_cover_search(
            &SearchConfig::new(n, Strategy::CatalogCover).min_classes(k).min_class_size(3),
        )
        .unwrap();
        assert!(small.completed && large.completed);
        let ext = canonical_key(&extremal(n).unwrap()).unwrap();
        assert_eq!(small.witness_keys(), [ext.cells].into());
        assert_eq!(large.max_classes_found, None);
    }
}

#[test]
fn reports_are_deterministic_across_workers_and_runs() {
    for strategy in [Strategy::PrunedDfs, Strategy::CatalogCover, Strategy::Lemma6Reduction] {
        let base = SearchConfig::new(4, strategy).min_classes(6).seed(11);
        let a = run_search(&base.clone().workers(1)).unwrap();
        let b = run_search(&base.clone().workers(1)).unwrap();
        let c = run_search(&base.clone().workers(4)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let mut c_as_one = c.clone();
        c_as_one.config.worker_count = 1;
        assert_eq!(a, c_as_one);
    }
}

#[test]
fn witnesses_are_pairwise_inequivalent_and_sound() {
    let r = pruned_search(&SearchConfig::new(4, Strategy::PrunedDfs).min_classes(3)).unwrap();
    let keys = r.witness_keys();
    assert_eq!(keys.len(), r.witnesses.len());
    assert!(r.merge_samples_checked > 0);
    for w in &r.witnesses {
        assert_eq!(w.representative.class_count(), r.max_classes_found.unwrap());
        assert!(!w.representative.is_symmetric());
    }
}
