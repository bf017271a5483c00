mod common;

use fmlocal::hom::{find_hom, Homomorphism};
use fmlocal::homotopy::{
    ho_quotient, is_weak_equivalence, make_pointed, section, PointedMorphism, PointedObject,
};
use fmlocal::structures::{generate_random, Structure, Vocabulary};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn random_digraph(rng: &mut ChaCha8Rng, max: usize) -> Structure {
    generate_random(&Vocabulary::graph(), rng.gen_range(1..=max), 0.4, rng.gen()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weak_equivalences_form_a_closed_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_digraph(&mut rng, 4);
        prop_assert!(is_weak_equivalence(&a, &a, &Homomorphism::identity(a.size())).unwrap());
        let (b, c) = (random_digraph(&mut rng, 4), random_digraph(&mut rng, 4));
        if let (Some(f), Some(g)) = (find_hom(&a, &b).unwrap(), find_hom(&b, &c).unwrap()) {
            let w = [
                is_weak_equivalence(&a, &b, &f).unwrap(),
                is_weak_equivalence(&b, &c, &g).unwrap(),
                is_weak_equivalence(&a, &c, &f.then(&g)).unwrap(),
            ];
            prop_assert_ne!(w.iter().filter(|&&x| x).count(), 2);
        }
    }

    #[test]
    fn sections_match_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_digraph(&mut rng, 4);
        let b = random_digraph(&mut rng, 3);
        for f in brute_homs(&a, &b) {
            let brute = brute_homs(&b, &a).into_iter().any(|s| (0..b.size()).all(|y| f[s[y]] == y));
            let found = section(&a, &b, &Homomorphism::new(f.clone())).unwrap();
            prop_assert_eq!(found.is_some(), brute);
            if let Some(s) = found {
                s.verify(&b, &a).unwrap();
                prop_assert!(s.then(&Homomorphism::new(f)).is_identity());
            }
        }
    }
}

#[test]
fn quotient_classes_are_hom_equivalence_classes() {
    let corpus = digraphs(3);
    let classes = ho_quotient(&corpus, 10).unwrap();
    let mut class_of = vec![usize::MAX; corpus.len()];
    for (c, class) in classes.iter().enumerate() {
        for &m in &class.members {
            assert_eq!(class_of[m], usize::MAX);
            class_of[m] = c;
        }
    }
    let equivalent = |i: usize, j: usize| {
        !brute_homs(&corpus[i], &corpus[j]).is_empty() && !brute_homs(&corpus[j], &corpus[i]).is_empty()
    };
    for i in 0..corpus.len() {
        for j in 0..corpus.len() {
            assert_eq!(class_of[i] == class_of[j], equivalent(i, j));
        }
    }
    let keys: std::collections::BTreeSet<&str> = classes.iter().map(|c| c.canonical_key.as_str()).collect();
    assert_eq!(keys.len(), classes.len());
}

#[test]
fn pointed_maps_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut composed = 0;
    while composed < 20 {
        let a = random_digraph(&mut rng, 2);
        let zero = PointedObject::zero(&a);
        let x = random_digraph(&mut rng, 3);
        let Some(span) = brute_homs(&a, &x).into_iter().find_map(|i| {
            let i = Homomorphism::new(i);
            brute_homs(&x, &a)
                .into_iter()
                .find_map(|r| make_pointed(&a, &x, &i, &Homomorphism::new(r)).ok())
        }) else {
            continue;
        };
        // zero -> X -> zero through the section and the retraction
        let into = PointedMorphism::new(&zero, &span, &span.section).unwrap();
        let out = PointedMorphism::new(&span, &zero, &span.retraction).unwrap();
        let round = into.then(&out).unwrap();
        assert!(round.map.is_identity());
        assert!(PointedMorphism::new(&span, &span, &Homomorphism::identity(x.size())).is_ok());
        composed += 1;
    }
}
