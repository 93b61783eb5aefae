#![allow(dead_code)]

use pmalg::algebra::FiniteAlgebra;
use pmalg::constructions::{build_si, SiDescriptor};
use pmalg::duality::{upset_algebra, DualSpace};
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Sample {
    pub name: String,
    pub algebra: FiniteAlgebra,
}

pub fn si(i: usize, m: usize) -> FiniteAlgebra {
    build_si(SiDescriptor::new(i, m).unwrap())
}

/// Every `B(i, m)` with `i ≤ max_i`, including the trivial algebra and the 2-chain.
pub fn si_family(max_i: usize) -> Vec<Sample> {
    SiDescriptor::all_up_to(max_i)
        .into_iter()
        .map(|d| Sample {
            name: format!("B{d}"),
            algebra: build_si(d),
        })
        .collect()
}

/// Products of two nontrivial members of the `i ≤ 2` family with at most
/// `max_size` elements.
pub fn pairwise_products(max_size: usize) -> Vec<Sample> {
    let family: Vec<Sample> = si_family(2).into_iter().filter(|s| s.algebra.size() > 1).collect();
    let mut out = Vec::new();
    for (a, x) in family.iter().enumerate() {
        for y in &family[a..] {
            if x.algebra.size() * y.algebra.size() <= max_size {
                out.push(Sample {
                    name: format!("{} x {}", x.name, y.name),
                    algebra: x.algebra.direct_product(&y.algebra),
                });
            }
        }
    }
    out
}

/// A random poset on `n` points with a random order-reversing involution,
/// or `None` when the sampled pieces do not fit together.
fn random_space(rng: &mut ChaCha8Rng, n: usize) -> Option<DualSpace> {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(0.4) {
                pairs.push((a, b));
            }
        }
    }
    let mut phi: Vec<usize> = (0..n).collect();
    let mut pool: Vec<usize> = (0..n).collect();
    pool.shuffle(rng);
    while pool.len() >= 2 && rng.random_bool(0.7) {
        let a = pool.pop().unwrap();
        let b = pool.pop().unwrap();
        phi[a] = b;
        phi[b] = a;
    }
    // close the relation under transitivity before validation
    let mut leq = vec![vec![false; n]; n];
    for (a, row) in leq.iter_mut().enumerate() {
        row[a] = true;
    }
    for &(a, b) in &pairs {
        leq[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    // force order reversal: p ≤ q implies φ(q) ≤ φ(p)
    for i in 0..n {
        for j in 0..n {
            if leq[i][j] && !leq[phi[j]][phi[i]] {
                return None;
            }
        }
    }
    let order: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && leq[i][j])
        .collect();
    DualSpace::new(n, &order, phi).ok()
}

/// `count` random pm-algebras with 2 to `max_size` elements, built as up-set
/// algebras of random spaces and randomly relabelled.
pub fn random_algebras(seed: u64, count: usize, max_size: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100_000, "random corpus generation stalled");
        let n = rng.random_range(1..=4);
        let Some(space) = random_space(&mut rng, n) else {
            continue;
        };
        let Ok(up) = upset_algebra(&space) else {
            continue;
        };
        let alg = up.algebra;
        if alg.size() < 2 || alg.size() > max_size {
            continue;
        }
        let mut perm: Vec<usize> = (0..alg.size()).collect();
        perm.shuffle(&mut rng);
        let relabelled = alg.permuted(&perm);
        let file = relabelled.to_file();
        let reparsed = FiniteAlgebra::from_file(&file).expect("random algebra validates");
        out.push(Sample {
            name: format!("random#{} ({} elements)", out.len(), reparsed.size()),
            algebra: reparsed,
        });
    }
    out
}

/// Full corpus: the `i ≤ 2` family, products up to 10 elements, and 20
/// random algebras with at most 8 elements.
pub fn corpus() -> Vec<Sample> {
    let mut all = si_family(2);
    all.extend(pairwise_products(10));
    all.extend(random_algebras(0x5eed, 20, 8));
    all
}

/// Products of simple members of BPK₀ (2-chain and `B_k`).
pub fn bpk0_products() -> Vec<Sample> {
    let two = si(1, 0);
    let b1 = si(1, 1);
    let b2 = si(2, 1);
    let b3 = si(3, 1);
    let p = |parts: &[(&str, &FiniteAlgebra)]| {
        let mut alg = parts[0].1.clone();
        for (_, x) in &parts[1..] {
            alg = alg.direct_product(x);
        }
        let name = parts.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(" x ");
        Sample { name, algebra: alg }
    };
    vec![
        p(&[("2", &two)]),
        p(&[("B1", &b1)]),
        p(&[("B2", &b2)]),
        p(&[("2", &two), ("2", &two)]),
        p(&[("2", &two), ("B1", &b1)]),
        p(&[("2", &two), ("B2", &b2)]),
        p(&[("B1", &b1), ("B2", &b2)]),
        p(&[("B1", &b1), ("B1", &b1)]),
        p(&[("2", &two), ("B3", &b3)]),
        p(&[("2", &two), ("B1", &b1), ("B2", &b2)]),
    ]
}
