mod common;

use std::collections::BTreeMap;

use fmlocal::games::{ef_equivalent, ef_transcript, forth_khom, forth_separator, khom_equivalent};
use fmlocal::hom::{find_hom, relative_tree_depth};
use fmlocal::logic::evaluate;
use fmlocal::structures::{generate, GeneratorKind, Structure};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn pick(rng: &mut ChaCha8Rng, corpus: &[Structure]) -> Structure {
    corpus[rng.gen_range(0..corpus.len())].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ef_equivalence_is_an_equivalence(seed in any::<u64>(), k in 0usize..4) {
        let corpus = digraphs(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (pick(&mut rng, &corpus), pick(&mut rng, &corpus), pick(&mut rng, &corpus));
        prop_assert!(ef_equivalent(&a, &[], &a, &[], k).unwrap());
        let ab = ef_equivalent(&a, &[], &b, &[], k).unwrap();
        prop_assert_eq!(ab, ef_equivalent(&b, &[], &a, &[], k).unwrap());
        if ab && ef_equivalent(&b, &[], &c, &[], k).unwrap() {
            prop_assert!(ef_equivalent(&a, &[], &c, &[], k).unwrap());
        }
    }

    #[test]
    fn more_rounds_separate_more(seed in any::<u64>()) {
        let corpus = digraphs(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (pick(&mut rng, &corpus), pick(&mut rng, &corpus));
        for k in 0..3 {
            if ef_equivalent(&a, &[], &b, &[], k + 1).unwrap() {
                prop_assert!(ef_equivalent(&a, &[], &b, &[], k).unwrap());
            }
            if forth_khom(&a, &b, &[], k + 1).unwrap() {
                prop_assert!(forth_khom(&a, &b, &[], k).unwrap());
            }
            // the back-and-forth game is harder for the duplicator
            if ef_equivalent(&a, &[], &b, &[], k).unwrap() {
                prop_assert!(khom_equivalent(&a, &b, k).unwrap());
            }
        }
    }

    #[test]
    fn equivalent_structures_agree_on_sentences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..5);
        let a = random_graph(&mut rng, n, 0.5);
        let m = rng.gen_range(1..5);
        let b = random_graph(&mut rng, m, 0.5);
        if ef_equivalent(&a, &[], &b, &[], 2).unwrap() {
            for _ in 0..20 {
                let phi = random_formula(&mut rng, 2, &[], 6);
                let none = BTreeMap::new();
                prop_assert_eq!(evaluate(&a, &phi, &none).unwrap(), evaluate(&b, &phi, &none).unwrap());
            }
        }
    }
}

#[test]
fn spoiler_transcripts_end_in_a_stuck_duplicator() {
    let lo = |n| generate(GeneratorKind::LinearOrder, n, 0.0, 0).unwrap();
    let t = ef_transcript(&lo(2), &[], &lo(3), &[], 2).unwrap().unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(t.last().unwrap().duplicator, None);
    assert!(ef_transcript(&lo(4), &[], &lo(5), &[], 2).unwrap().is_none());
}

#[test]
fn separators_witness_lost_forth_games() {
    let corpus = digraphs(2);
    for a in &corpus {
        for b in &corpus {
            for k in 1..=2 {
                let wins = forth_khom(a, b, &[], k).unwrap();
                let sep = forth_separator(a, b, k).unwrap();
                assert_eq!(wins, sep.is_none());
                if let Some(c) = sep {
                    assert!(find_hom(&c, a).unwrap().is_some());
                    assert!(find_hom(&c, b).unwrap().is_none());
                    assert!(relative_tree_depth(&c).unwrap() <= k);
                }
            }
        }
    }
}

#[test]
fn anchored_games_respect_the_anchor() {
    let p3 = generate(GeneratorKind::Path, 3, 0.0, 0).unwrap();
    // from an end, the far end is a non-neighbour; the middle has none
    assert!(ef_equivalent(&p3, &[0], &p3, &[2], 3).unwrap());
    assert!(!ef_equivalent(&p3, &[0], &p3, &[1], 1).unwrap());
    assert!(ef_equivalent(&p3, &[0], &p3, &[1], 0).unwrap());
}
