//! Bounded search for a smallest core of tree-depth at most k that is
//! k-homomorphically equivalent to a given structure.

use serde::Serialize;

use super::find_hom;
use crate::error::Result;
use crate::games::forth_khom;
use crate::logic::core_pool;
use crate::structures::{Family, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum KCoreOutcome {
    Found {
        #[serde(skip)]
        structure: Structure,
    },
    /// No candidate up to `size_bound` qualifies; larger ones were not tried.
    NotFoundWithinBound { size_bound: usize },
}

impl KCoreOutcome {
    pub fn found(&self) -> Option<&Structure> {
        match self {
            KCoreOutcome::Found { structure } => Some(structure),
            KCoreOutcome::NotFoundWithinBound { .. } => None,
        }
    }
}

/// Searches all structures over the vocabulary of `a`.
pub fn k_core_search(a: &Structure, k: usize, size_bound: usize) -> Result<KCoreOutcome> {
    k_core_search_in(a, k, size_bound, Family::All)
}

/// As [`k_core_search`], with candidates drawn from `family`. Candidates are
/// scanned by size, then canonical key, so the result is deterministic.
/// With constants, tree-depth is measured after removing the constants.
pub fn k_core_search_in(a: &Structure, k: usize, size_bound: usize, family: Family) -> Result<KCoreOutcome> {
    let pool = core_pool(a.vocab(), k, size_bound, family)?;
    for c in pool.iter() {
        // td(c) <= k, so the k-round forth game from c decides c -> a exactly
        if find_hom(c, a)?.is_some() && forth_khom(a, c, &[], k)? {
            return Ok(KCoreOutcome::Found {
                structure: c.clone(),
            });
        }
    }
    Ok(KCoreOutcome::NotFoundWithinBound { size_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{core, is_core, tree_depth};
    use crate::structures::{generate, is_isomorphic, GeneratorKind};

    fn g(kind: GeneratorKind, n: usize) -> Structure {
        generate(kind, n, 0.0, 0).unwrap()
    }

    #[test]
    fn c4_k_cores() {
        let c4 = g(GeneratorKind::Cycle, 4);
        let one = k_core_search(&c4, 1, 4).unwrap();
        let one = one.found().unwrap();
        assert_eq!((one.size(), one.tuple_count()), (1, 0));
        let two = k_core_search(&c4, 2, 4).unwrap();
        let k2 = g(GeneratorKind::Clique, 2);
        assert!(is_isomorphic(two.found().unwrap(), &k2).unwrap().is_some());
    }

    #[test]
    fn shallow_cores_find_themselves() {
        for a in [g(GeneratorKind::Clique, 3), g(GeneratorKind::Path, 3)] {
            let k = tree_depth(&a).unwrap();
            let found = k_core_search(&a, k, 3).unwrap();
            let c = found.found().unwrap();
            assert!(is_core(c));
            assert!(is_isomorphic(c, &core(&a)).unwrap().is_some());
        }
    }

    #[test]
    fn absence_is_reported() {
        let k3 = g(GeneratorKind::Clique, 3);
        assert_eq!(
            k_core_search(&k3, 3, 2).unwrap(),
            KCoreOutcome::NotFoundWithinBound { size_bound: 2 }
        );
    }
}
