mod common;

#[test]
fn random_corpus_is_deterministic_and_varied() {
    let a = common::random_algebras(7, 20, 8);
    let b = common::random_algebras(7, 20, 8);
    let sizes: Vec<usize> = a.iter().map(|s| s.algebra.size()).collect();
    assert_eq!(sizes, b.iter().map(|s| s.algebra.size()).collect::<Vec<_>>());
    let distinct: std::collections::BTreeSet<usize> = sizes.iter().copied().collect();
    assert!(distinct.len() >= 3, "{sizes:?}");
    assert!(a.iter().all(|s| (2..=8).contains(&s.algebra.size())));
}

#[test]
fn product_list_respects_size_bound() {
    let p = common::pairwise_products(10);
    assert!(!p.is_empty());
    assert!(p.iter().all(|s| s.algebra.size() <= 10));
}
