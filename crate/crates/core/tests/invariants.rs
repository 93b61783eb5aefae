mod common;

use pmalg::algebra::{is_isomorphic, FiniteAlgebra};
use pmalg::congruence::{all_c_subsets, classify, congruence_lattice, is_simple, is_subdirectly_irreducible};
use pmalg::constructions::{
    build_si, closure, si_leq, si_membership_oracle, SiDescriptor,
};
use pmalg::duality::{dual_space, SpaceType};
use pmalg::free_bpk0::{generating_tuples, simple_target, DEFAULT_ORACLE_CAP};
use pmalg::terms::builtin::{c, heyting_imp};
use pmalg::terms::variety::{bpk_law, in_bpk0, in_bpk0_alternative, kleene_law};
use pmalg::terms::{eval, holds, Assignment, Term};
use pmalg::ExactCountTable;

fn assign(pairs: &[(&str, usize)]) -> Assignment {
    pairs.iter().map(|&(v, x)| (v.to_string(), x)).collect()
}

#[test]
fn c_subsets_are_closed_downwards_into_minimal_points() {
    for s in common::corpus() {
        let space = dual_space(&s.algebra);
        let min = space.min_points();
        for y in all_c_subsets(&space) {
            let mut down = space.down_closure(&y.points);
            down.intersect_with(&min);
            assert!(down.is_subset(&y.points), "{}", s.name);
        }
    }
}

#[test]
fn nonempty_c_subsets_of_connected_duals_contain_max_and_min() {
    for s in common::corpus() {
        let space = dual_space(&s.algebra);
        if !space.is_phi_connected() {
            continue;
        }
        let mut mm = space.max_points();
        mm.union_with(&space.min_points());
        for y in all_c_subsets(&space) {
            if y.points.count_ones(..) > 0 {
                assert!(mm.is_subset(&y.points), "{}", s.name);
            }
        }
    }
}

#[test]
fn si_family_simplicity() {
    for i in 1..=3 {
        assert!(is_simple(&common::si(i, 1)), "B({i},1)");
        for m in 2..=3 {
            let l = common::si(i, m);
            assert!(is_subdirectly_irreducible(&l) && !is_simple(&l), "B({i},{m})");
        }
    }
}

#[test]
fn bpk_membership_matches_space_type_on_si_algebras() {
    for s in common::corpus().into_iter().chain(common::si_family(3)) {
        let alg = &s.algebra;
        if !is_subdirectly_irreducible(alg) || !alg.is_kleene() {
            continue;
        }
        let by_identity = holds(alg, &bpk_law()).unwrap().holds();
        let by_shape = matches!(
            dual_space(alg).space_type(),
            SpaceType::Type1 | SpaceType::Type2 | SpaceType::Type3
        );
        assert_eq!(by_identity, by_shape, "{}", s.name);
    }
}

#[test]
fn c_is_least_dense_on_type_one_and_two() {
    for s in common::si_family(3) {
        let alg = &s.algebra;
        let t = dual_space(alg).space_type();
        if alg.size() < 3 || !matches!(t, SpaceType::Type1 | SpaceType::Type2) {
            continue;
        }
        let d = alg.least_dense().unwrap();
        for a in alg.elements().filter(|&a| a != alg.bottom() && a != alg.top()) {
            let ca = eval(alg, &c(Term::var("x")), &assign(&[("x", a)])).unwrap();
            assert_eq!(ca, d, "{} at {a}", s.name);
        }
    }
}

#[test]
fn heyting_sanity_on_simple_bpk0() {
    let imp = heyting_imp(Term::var("x"), Term::var("y"));
    for k in 0..=3 {
        let alg = simple_target(k);
        for a in alg.elements() {
            assert_eq!(eval(&alg, &imp, &assign(&[("x", a), ("y", a)])).unwrap(), alg.top());
            assert_eq!(eval(&alg, &imp, &assign(&[("x", alg.top()), ("y", a)])).unwrap(), a);
        }
    }
}

#[test]
fn both_bpk0_bases_agree() {
    for s in common::corpus().into_iter().chain(common::bpk0_products()) {
        assert_eq!(
            in_bpk0(&s.algebra).unwrap(),
            in_bpk0_alternative(&s.algebra).unwrap(),
            "{}",
            s.name
        );
    }
}

#[test]
fn random_algebras_are_kleene_or_not_consistently() {
    for s in common::random_algebras(11, 20, 8) {
        let by_identity = holds(&s.algebra, &kleene_law()).unwrap().holds();
        assert_eq!(by_identity, s.algebra.is_kleene(), "{}", s.name);
        assert_eq!(by_identity, dual_space(&s.algebra).is_kleene_space(), "{}", s.name);
    }
}

#[test]
fn si_order_agrees_with_oracle() {
    let all = SiDescriptor::all_up_to(3);
    for &d1 in &all {
        for &d2 in &all {
            assert_eq!(si_leq(d1, d2), si_membership_oracle(d1, d2).unwrap(), "{d1} vs {d2}");
        }
    }
}

#[test]
fn projection_into_lower_block_still_generates() {
    for k in 2..=3 {
        let alg = build_si(SiDescriptor::simple(k));
        let block = 1usize << k;
        let project = |x: usize| if x < block { x } else { alg.neg(x) };
        let n = alg.size();
        for a in 0..n {
            for b in a..n {
                if closure(&alg, [a, b]).count_ones(..) != n {
                    continue;
                }
                let lowered = closure(&alg, [project(a), project(b)]);
                assert_eq!(lowered.count_ones(..), n, "B_{k}: {{{a},{b}}}");
            }
        }
    }
}

#[test]
fn generating_tuples_split_into_orbits() {
    let alg = simple_target(2);
    let block = 4usize;
    let d = block - 1;
    for n in 1..=2u32 {
        let tuples = generating_tuples(&alg, n, DEFAULT_ORACLE_CAP).unwrap();
        let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<Vec<usize>>> = Default::default();
        for t in &tuples {
            let u: Vec<usize> = t.iter().map(|&x| if x < block { x } else { alg.neg(x) }).collect();
            groups.entry(u).or_default().push(t.clone());
        }
        for (u, members) in &groups {
            assert!(tuples.contains(u), "representative must generate");
            let fixed = u.iter().filter(|&&x| x == d).count();
            assert_eq!(members.len(), 1 << (n as usize - fixed), "{u:?}");
            let mut orbit = vec![Vec::new()];
            for &x in u {
                orbit = orbit
                    .into_iter()
                    .flat_map(|p: Vec<usize>| {
                        let mut imgs = vec![x, alg.neg(x)];
                        imgs.dedup();
                        imgs.into_iter().map(move |y| {
                            let mut q = p.clone();
                            q.push(y);
                            q
                        })
                    })
                    .collect();
            }
            orbit.sort();
            assert_eq!(&orbit, members);
        }
    }
}

#[test]
fn counting_invariants() {
    let mut t = ExactCountTable::new();
    for n in 1..=4u32 {
        for k in 2..=(1u64 << n) {
            t.m_k(n, k).unwrap();
        }
        if n <= 3 {
            assert!(t.m_k(n, 1 << n).unwrap() >= 1u32.into());
        }
    }
}

#[test]
fn free_size_two_is_exact() {
    let mut t = ExactCountTable::new();
    let size = t.free_size(2, 1e6).unwrap();
    let expected = num_bigint::BigUint::from(2u32).pow(4)
        * num_bigint::BigUint::from(3u32).pow(5)
        * num_bigint::BigUint::from(7u32).pow(20)
        * num_bigint::BigUint::from(15u32).pow(16)
        * num_bigint::BigUint::from(31u32).pow(4);
    assert_eq!(size, expected);
    assert_eq!(size.to_string(), "1881888883163658260368449151229890136718750000");
}

#[test]
fn classification_is_invariant_under_products_with_trivial() {
    let one = pmalg::constructions::trivial_algebra();
    for s in common::si_family(2) {
        let p = s.algebra.direct_product(&one);
        assert!(is_isomorphic(&p, &s.algebra));
        assert_eq!(classify(&p), classify(&s.algebra));
    }
}

fn quotient_sizes(alg: &FiniteAlgebra) -> Vec<usize> {
    congruence_lattice(alg).congruences.iter().map(|c| c.quotient(alg).unwrap().size()).collect()
}

#[test]
fn quotients_are_valid_algebras() {
    for s in common::corpus() {
        for theta in congruence_lattice(&s.algebra).congruences {
            let q = theta.quotient(&s.algebra).unwrap();
            assert!(pmalg::algebra::validate(&q.to_file()).unwrap().passed, "{}", s.name);
        }
        assert_eq!(quotient_sizes(&s.algebra)[0], s.algebra.size());
    }
}
