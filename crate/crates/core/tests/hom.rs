mod common;

use fmlocal::hom::{
    core, core_with_retraction, enumerate_homs, find_hom, hom_equivalent, is_core, relative_tree_depth, tree_depth,
    Homomorphism,
};
use fmlocal::structures::{generate, GeneratorKind, Structure, Vocabulary};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

#[test]
fn hom_sets_match_enumeration() {
    let corpus = digraphs(2);
    for a in &corpus {
        for b in &corpus {
            let mut brute = brute_homs(a, b);
            brute.sort();
            let set = enumerate_homs(a, b, 1000).unwrap();
            assert!(!set.truncated);
            let mut got: Vec<Vec<usize>> = set.homs.iter().map(|h| h.map.clone()).collect();
            got.sort();
            assert_eq!(got, brute);
            match find_hom(a, b).unwrap() {
                Some(h) => assert!(preserves(a, b, &h.map)),
                None => assert!(brute.is_empty()),
            }
        }
    }
}

#[test]
fn hom_sets_with_constants() {
    let k3 = generate(GeneratorKind::Clique, 3, 0.0, 0).unwrap();
    let rooted = k3.with_extra_constants(&[0]).unwrap();
    let other = k3.with_extra_constants(&[2]).unwrap();
    let homs = enumerate_homs(&rooted, &other, 100).unwrap().homs;
    assert_eq!(homs.len(), 2);
    assert!(homs.iter().all(|h| h.map[0] == 2));
}

#[test]
fn cores_of_families() {
    let g = |k, n| generate(k, n, 0.0, 0).unwrap();
    let k2 = g(GeneratorKind::Clique, 2);
    for n in [2, 4, 6] {
        assert!(brute_iso(&core(&g(GeneratorKind::Cycle, n)), &k2));
    }
    for n in [3, 5] {
        assert!(is_core(&g(GeneratorKind::Cycle, n)));
    }
    for n in 2..6 {
        assert!(brute_iso(&core(&g(GeneratorKind::Path, n)), &k2));
    }
    let e = g(GeneratorKind::Edgeless, 4);
    assert_eq!(core(&e).size(), 1);
}

#[test]
fn tree_depth_of_paths_and_cycles() {
    // td(P_n) = ceil(log2(n + 1)), td(C_n) = 1 + td(P_{n-1})
    let log = |n: usize| (usize::BITS - n.leading_zeros()) as usize;
    for n in 1..=12 {
        let p = generate(GeneratorKind::Path, n, 0.0, 0).unwrap();
        assert_eq!(tree_depth(&p).unwrap(), log(n), "P{n}");
    }
    for n in 3..=12 {
        let c = generate(GeneratorKind::Cycle, n, 0.0, 0).unwrap();
        assert_eq!(tree_depth(&c).unwrap(), 1 + log(n - 1), "C{n}");
    }
}

#[test]
fn relative_tree_depth_ignores_constants() {
    let p3 = generate(GeneratorKind::Path, 3, 0.0, 0).unwrap();
    assert_eq!(relative_tree_depth(&p3.with_extra_constants(&[1]).unwrap()).unwrap(), 1);
    assert_eq!(relative_tree_depth(&p3.with_extra_constants(&[0]).unwrap()).unwrap(), 2);
    assert_eq!(relative_tree_depth(&p3).unwrap(), 2);
}

proptest! {
    #[test]
    fn core_is_a_retract(seed in any::<u64>(), n in 1usize..7, p in 0.1f64..0.7) {
        let s = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
        let c = core_with_retraction(&s);
        c.retraction.verify(&s, &c.structure).unwrap();
        let embedding = Homomorphism::new(c.embedding.clone());
        embedding.verify(&c.structure, &s).unwrap();
        prop_assert!(embedding.then(&c.retraction).is_identity());
        prop_assert!(is_core(&c.structure));
        prop_assert!(hom_equivalent(&s, &c.structure).unwrap());
    }

    #[test]
    fn homs_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Vocabulary::graph();
        let s: Vec<Structure> = (0..3)
            .map(|_| fmlocal::structures::generate_random(&v, 3, 0.5, rand::Rng::gen(&mut rng)).unwrap())
            .collect();
        if let (Some(f), Some(g)) = (find_hom(&s[0], &s[1]).unwrap(), find_hom(&s[1], &s[2]).unwrap()) {
            f.then(&g).verify(&s[0], &s[2]).unwrap();
            prop_assert!(find_hom(&s[0], &s[2]).unwrap().is_some());
        }
    }

    #[test]
    fn tree_depth_bounds(seed in any::<u64>(), n in 1usize..8, p in 0.1f64..0.8) {
        let s = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
        let td = tree_depth(&s).unwrap();
        let clique = (1..=n).rev().find(|&m| {
            all_maps(m, n).iter().any(|f| {
                (0..m).all(|i| (0..m).all(|j| i == j || s.contains(0, &[f[i], f[j]])))
            })
        }).unwrap_or(1);
        prop_assert!(td >= clique && td <= n);
        // the core is an induced subgraph
        prop_assert!(tree_depth(&core(&s)).unwrap() <= td);
    }
}

#[test]
fn verify_rejects_non_homs() {
    let k2 = generate(GeneratorKind::Clique, 2, 0.0, 0).unwrap();
    assert!(Homomorphism::new(vec![0, 0]).verify(&k2, &k2).is_err());
    assert!(Homomorphism::new(vec![0]).verify(&k2, &k2).is_err());
    assert!(Homomorphism::new(vec![1, 0]).verify(&k2, &k2).is_ok());
}
