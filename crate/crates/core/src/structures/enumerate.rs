//! Exhaustive enumeration of isomorphism classes by vertex augmentation.
//!
//! Every class on `n` elements arises from a class on `n - 1` elements by
//! adding one element together with some set of tuples that mention it, so
//! extending each representative of the previous level in all ways and
//! deduplicating by canonical key yields each class exactly once. A filter
//! that is closed under deleting elements can be applied level by level.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use super::iso::{canonical_key, DEFAULT_CANON_BOUND};
use super::{Element, Structure, Vocabulary};
use crate::error::{Error, Result};

/// Which structures are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Every interpretation of the relation symbols.
    All,
    /// Tuples have pairwise distinct entries.
    Irreflexive,
    /// Irreflexive with every relation symmetric; all symbols must be binary.
    SymmetricIrreflexive,
}

impl Family {
    pub fn contains(&self, s: &Structure) -> bool {
        match self {
            Family::All => true,
            Family::Irreflexive => s.all_tuples().all(|(_, t)| distinct(t)),
            Family::SymmetricIrreflexive => s.all_tuples().all(|(r, t)| {
                t.len() == 2 && t[0] != t[1] && s.contains(r, &[t[1], t[0]])
            }),
        }
    }
}

fn distinct(t: &[Element]) -> bool {
    (0..t.len()).all(|i| (0..i).all(|j| t[i] != t[j]))
}

/// Largest number of new tuples allowed per augmentation step.
const MAX_NEW_TUPLES: usize = 24;

/// Tuple groups that may be added when element `v` joins `{0, .., v-1}`.
/// Each group is added or omitted as a unit.
fn new_tuple_groups(vocab: &Vocabulary, v: Element, family: Family) -> Vec<(usize, Vec<Vec<Element>>)> {
    let mut out = Vec::new();
    for (r, sym) in vocab.relations().iter().enumerate() {
        if family == Family::SymmetricIrreflexive {
            for u in 0..v {
                out.push((r, vec![vec![u, v], vec![v, u]]));
            }
            continue;
        }
        let n = v + 1;
        let total = n.pow(sym.arity as u32);
        for code in 0..total {
            let mut t = vec![0; sym.arity];
            let mut c = code;
            for slot in t.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            if !t.contains(&v) || (family == Family::Irreflexive && !distinct(&t)) {
                continue;
            }
            out.push((r, vec![t]));
        }
    }
    out
}

/// Representatives of all constant-free classes up to `max_size` that
/// belong to `family` and satisfy `keep`, which must be closed under
/// deleting elements. Sorted by size, then canonical key.
pub(crate) fn augment_classes(
    vocab: &Arc<Vocabulary>,
    max_size: usize,
    family: Family,
    keep: &dyn Fn(&Structure) -> bool,
) -> Result<Vec<Structure>> {
    if vocab.constant_count() != 0 {
        return Err(Error::InvalidArgument(
            "augmentation expects a constant-free vocabulary".into(),
        ));
    }
    if family == Family::SymmetricIrreflexive && vocab.relations().iter().any(|r| r.arity != 2) {
        return Err(Error::InvalidArgument(
            "symmetric family needs binary relation symbols".into(),
        ));
    }
    let mut out = Vec::new();
    let mut level: Vec<Vec<BTreeSet<Vec<Element>>>> = vec![vec![BTreeSet::new(); vocab.relations().len()]];
    for n in 1..=max_size {
        let groups = new_tuple_groups(vocab, n - 1, family);
        if groups.len() > MAX_NEW_TUPLES {
            return Err(Error::BoundExceeded {
                what: "tuples per augmentation step",
                bound: MAX_NEW_TUPLES,
                actual: groups.len(),
            });
        }
        let mut seen = HashSet::new();
        let mut next: Vec<(super::CanonicalKey, Structure)> = Vec::new();
        for base in &level {
            for mask in 0u32..(1u32 << groups.len()) {
                let mut rels = base.clone();
                for (i, (r, tuples)) in groups.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        rels[*r].extend(tuples.iter().cloned());
                    }
                }
                let s = Structure::from_sets(vocab.clone(), n, rels, vec![]);
                if !keep(&s) {
                    continue;
                }
                let (key, canon) = canonical_key(&s, DEFAULT_CANON_BOUND.max(max_size))?;
                if seen.insert(key.clone()) {
                    next.push((key, canon));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.iter().map(|(_, s)| s.relations().to_vec()).collect();
        out.extend(next.into_iter().map(|(_, s)| s));
    }
    Ok(out)
}

/// All expansions of `bases` by `count` constants (repetition allowed),
/// deduplicated up to isomorphism and filtered by `keep`. Sorted by size,
/// then canonical key.
pub(crate) fn add_constants(
    bases: &[Structure],
    count: usize,
    keep: &dyn Fn(&Structure) -> bool,
) -> Result<Vec<Structure>> {
    let mut seen = HashSet::new();
    let mut out: Vec<(usize, super::CanonicalKey, Structure)> = Vec::new();
    for base in bases {
        let n = base.size();
        let total = n.checked_pow(count as u32).ok_or(Error::BoundExceeded {
            what: "constant assignments",
            bound: usize::MAX,
            actual: usize::MAX,
        })?;
        for code in 0..total {
            let mut assign = vec![0; count];
            let mut c = code;
            for slot in assign.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            let s = base.with_extra_constants(&assign)?;
            if !keep(&s) {
                continue;
            }
            let (key, canon) = canonical_key(&s, DEFAULT_CANON_BOUND.max(n))?;
            if seen.insert(key.clone()) {
                out.push((n, key, canon));
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, s)| s).collect())
}

/// One representative per isomorphism class of `family` structures over
/// `vocab` with universe size in `1..=max_size`.
pub fn enumerate_iso_classes(vocab: &Vocabulary, max_size: usize, family: Family) -> Result<Vec<Structure>> {
    let base_vocab = Arc::new(vocab.with_constant_count(0));
    let bases = augment_classes(&base_vocab, max_size, family, &|_| true)?;
    if vocab.constant_count() == 0 {
        return Ok(bases);
    }
    add_constants(&bases, vocab.constant_count(), &|_| true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(vocab: &Vocabulary, max: usize, family: Family) -> Vec<usize> {
        let all = enumerate_iso_classes(vocab, max, family).unwrap();
        (1..=max)
            .map(|n| all.iter().filter(|s| s.size() == n).count())
            .collect()
    }

    // Reference counts: digraphs with loops 2, 10, 104, 3044; digraphs
    // 1, 3, 16, 218; simple graphs 1, 2, 4, 11, 34.
    #[test]
    fn known_class_counts() {
        let g = Vocabulary::graph();
        assert_eq!(counts(&g, 4, Family::All), vec![2, 10, 104, 3044]);
        assert_eq!(counts(&g, 4, Family::Irreflexive), vec![1, 3, 16, 218]);
        assert_eq!(
            counts(&g, 5, Family::SymmetricIrreflexive),
            vec![1, 2, 4, 11, 34]
        );
    }

    #[test]
    fn constants_multiply_classes() {
        // rooted simple graphs: E3 1, K2+K1 2, P3 2, K3 1 on three vertices
        let v = Vocabulary::graph().with_constant_count(1);
        assert_eq!(counts(&v, 3, Family::SymmetricIrreflexive), vec![1, 2, 6]);
    }

    #[test]
    fn filter_prunes_levels() {
        let g = Arc::new(Vocabulary::graph());
        let edgeless = augment_classes(&g, 4, Family::All, &|s| s.tuple_count() == 0).unwrap();
        assert_eq!(edgeless.len(), 4);
        assert!(edgeless.iter().all(|s| Family::Irreflexive.contains(s)));
    }
}
