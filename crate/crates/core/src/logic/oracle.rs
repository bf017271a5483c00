//! Primitive-positive equivalence by brute force over small structures.
//!
//! A pp-sentence of quantifier rank at most k is true in a structure iff its
//! canonical structure, which has tree-depth at most k, maps into it. So two
//! structures agree on all such sentences iff they receive homomorphisms from
//! the same structures of tree-depth at most k. The oracle checks this for
//! every structure up to a size bound, which is independent of the game
//! characterization in `games`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::{Formula, Term};
use crate::error::{Error, Result};
use crate::hom::{elimination_forest, find_hom, is_core, relative_tree_depth, tree_depth};
use crate::structures::enumerate::{add_constants, augment_classes};
use crate::structures::{gaifman_graph, Element, Family, Structure, Vocabulary};

#[derive(Clone, PartialEq, Eq, Hash)]
enum PoolKind {
    All,
    Cores,
    Connected,
}

type PoolKey = (Vocabulary, usize, usize, Family, PoolKind);

fn pools() -> &'static Mutex<HashMap<PoolKey, Arc<Vec<Structure>>>> {
    static POOLS: OnceLock<Mutex<HashMap<PoolKey, Arc<Vec<Structure>>>>> = OnceLock::new();
    POOLS.get_or_init(Default::default)
}

fn cached(key: PoolKey, build: impl FnOnce() -> Result<Vec<Structure>>) -> Result<Arc<Vec<Structure>>> {
    if let Some(p) = pools().lock().expect("pool cache").get(&key) {
        return Ok(p.clone());
    }
    let pool = Arc::new(build()?);
    pools()
        .lock()
        .expect("pool cache")
        .entry(key)
        .or_insert(pool.clone());
    Ok(pool)
}

/// Isomorphism-class representatives of `family` structures over `vocab`
/// with at most `size_bound` elements and tree-depth at most `k`, measured
/// after removing constant elements. Cached per argument tuple.
pub(crate) fn td_bounded_pool(
    vocab: &Vocabulary,
    k: usize,
    size_bound: usize,
    family: Family,
) -> Result<Arc<Vec<Structure>>> {
    let key = (vocab.clone(), k, size_bound, family, PoolKind::All);
    cached(key, || {
        let c = vocab.constant_count();
        let base_vocab = Arc::new(vocab.with_constant_count(0));
        // removing c vertices lowers tree-depth by at most c
        let keep_base = |s: &Structure| tree_depth(s).map(|d| d <= k + c).unwrap_or(false);
        let bases = augment_classes(&base_vocab, size_bound, family, &keep_base)?;
        if c == 0 {
            return Ok(bases);
        }
        let keep = |s: &Structure| relative_tree_depth(s).map(|d| d <= k).unwrap_or(false);
        add_constants(&bases, c, &keep)
    })
}

/// The cores among [`td_bounded_pool`].
pub(crate) fn core_pool(vocab: &Vocabulary, k: usize, size_bound: usize, family: Family) -> Result<Arc<Vec<Structure>>> {
    let key = (vocab.clone(), k, size_bound, family, PoolKind::Cores);
    cached(key, || {
        let all = td_bounded_pool(vocab, k, size_bound, family)?;
        Ok(all.iter().filter(|s| is_core(s)).cloned().collect())
    })
}

fn connected_pool(vocab: &Vocabulary, k: usize, size_bound: usize, family: Family) -> Result<Arc<Vec<Structure>>> {
    let key = (vocab.clone(), k, size_bound, family, PoolKind::Connected);
    cached(key, || {
        let all = td_bounded_pool(vocab, k, size_bound, family)?;
        Ok(all
            .iter()
            .filter(|s| gaifman_graph(s).is_connected())
            .cloned()
            .collect())
    })
}

/// One representative per isomorphism class of structures over `vocab`
/// with at most `size_bound` elements and tree-depth at most `k`.
pub fn enumerate_td_bounded_structures(vocab: &Vocabulary, k: usize, size_bound: usize) -> Result<Vec<Structure>> {
    if k == 0 || size_bound == 0 {
        return Err(Error::InvalidArgument("k and size_bound must be positive".into()));
    }
    Ok(td_bounded_pool(vocab, k, size_bound, Family::All)?.to_vec())
}

/// Which side of a separation receives the homomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PpVerdict {
    /// No structure up to `size_bound` separates the pair; agreement is
    /// relative to that bound.
    Agree { size_bound: usize, candidates: usize },
    /// `witness` maps into the structure on `maps_into` only.
    Separated {
        #[serde(serialize_with = "serialize_text")]
        witness: Structure,
        maps_into: Side,
    },
    Inconclusive { reason: String },
}

pub(crate) fn serialize_text<S: serde::Serializer>(s: &Structure, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&crate::structures::serialize_structure(s))
}

pub(crate) fn serialize_opt_text<S: serde::Serializer>(s: &Option<Structure>, ser: S) -> Result<S::Ok, S::Error> {
    match s {
        Some(s) => serialize_text(s, ser),
        None => ser.serialize_none(),
    }
}

impl PpVerdict {
    pub fn agrees(&self) -> bool {
        matches!(self, PpVerdict::Agree { .. })
    }
}

/// Checks every structure of tree-depth at most `k` and size at most
/// `size_bound` for a homomorphism into exactly one of `a` and `b`.
pub fn pp_agree_oracle(a: &Structure, b: &Structure, k: usize, size_bound: usize) -> Result<PpVerdict> {
    a.check_compatible(b)?;
    let pool = match td_bounded_pool(a.vocab(), k, size_bound, Family::All) {
        Ok(p) => p,
        Err(e) if e.is_bound_related() => {
            return Ok(PpVerdict::Inconclusive {
                reason: e.to_string(),
            })
        }
        Err(e) => return Err(e),
    };
    for c in pool.iter() {
        let into_a = find_hom(c, a)?.is_some();
        if into_a != find_hom(c, b)?.is_some() {
            return Ok(PpVerdict::Separated {
                witness: c.clone(),
                maps_into: if into_a { Side::First } else { Side::Second },
            });
        }
    }
    Ok(PpVerdict::Agree {
        size_bound,
        candidates: pool.len(),
    })
}

/// Restrictions of the candidate set that give the same verdicts as the
/// full enumeration on a class of targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleFamily {
    /// Every structure; valid for all targets.
    All,
    /// One binary symbol, no constants: connected loopless digraphs plus the
    /// single looped vertex. A looped separator maps into a target iff the
    /// target has a loop, in which case every structure maps into it; a
    /// disconnected separator has a separating component.
    Digraphs,
    /// Binary symbols, targets symmetric and loopless: symmetric loopless
    /// candidates (connected when there are no constants). Such targets
    /// receive a map from a structure iff they receive one from its
    /// symmetric closure, which has the same Gaifman graph.
    SymmetricLoopless,
}

/// Batched oracle: the homomorphism profile of each target against a fixed
/// candidate list, compared bitwise.
pub struct PpOracle {
    vocab: Vocabulary,
    family: OracleFamily,
    candidates: Vec<Structure>,
}

/// Bit `i` is set iff candidate `i` maps into the target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile(Vec<u64>);

impl PpOracle {
    pub fn new(vocab: &Vocabulary, k: usize, size_bound: usize, family: OracleFamily) -> Result<Self> {
        let c = vocab.constant_count();
        let candidates = match family {
            OracleFamily::All => td_bounded_pool(vocab, k, size_bound, Family::All)?.to_vec(),
            OracleFamily::Digraphs => {
                if vocab.relations().len() != 1 || vocab.relations()[0].arity != 2 || c != 0 {
                    return Err(Error::InvalidArgument(
                        "digraph oracle needs one binary symbol and no constants".into(),
                    ));
                }
                let mut out = connected_pool(vocab, k, size_bound, Family::Irreflexive)?.to_vec();
                let looped = Structure::new(Arc::new(vocab.clone()), 1, vec![vec![vec![0, 0]]], vec![])?;
                out.push(looped);
                out
            }
            OracleFamily::SymmetricLoopless => {
                if c == 0 {
                    connected_pool(vocab, k, size_bound, Family::SymmetricIrreflexive)?.to_vec()
                } else {
                    td_bounded_pool(vocab, k, size_bound, Family::SymmetricIrreflexive)?.to_vec()
                }
            }
        };
        Ok(PpOracle {
            vocab: vocab.clone(),
            family,
            candidates,
        })
    }

    pub fn candidates(&self) -> &[Structure] {
        &self.candidates
    }

    pub fn profile(&self, target: &Structure) -> Result<Profile> {
        if target.vocab() != &self.vocab {
            return Err(Error::VocabularyMismatch(format!(
                "`{}` vs `{}`",
                target.vocab(),
                self.vocab
            )));
        }
        if self.family == OracleFamily::SymmetricLoopless && !Family::SymmetricIrreflexive.contains(target) {
            return Err(Error::InvalidArgument(
                "target is not symmetric and loopless".into(),
            ));
        }
        let mut bits = vec![0u64; self.candidates.len().div_ceil(64)];
        for (i, c) in self.candidates.iter().enumerate() {
            if find_hom(c, target)?.is_some() {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Profile(bits))
    }

    /// A separating candidate for two profiles, if any.
    pub fn separator(&self, p: &Profile, q: &Profile) -> Option<(&Structure, Side)> {
        let (w, diff) = p.0.iter().zip(&q.0).map(|(x, y)| x ^ y).enumerate().find(|&(_, d)| d != 0)?;
        let i = w * 64 + diff.trailing_zeros() as usize;
        let side = if p.0[w] >> (i % 64) & 1 == 1 { Side::First } else { Side::Second };
        Some((&self.candidates[i], side))
    }
}

/// A pp-sentence true in exactly the structures that `c` maps into, with
/// quantifier rank equal to the tree-depth of `c`. Variables follow a
/// minimum-height elimination forest; each tuple becomes an atom under the
/// quantifier of its deepest element.
pub fn pp_sentence_of_structure(c: &Structure) -> Result<Formula> {
    if !c.constants().is_empty() {
        return Err(Error::InvalidArgument(
            "structure must not have constants".into(),
        ));
    }
    let g = gaifman_graph(c);
    let parent = elimination_forest(&g)?;
    let n = c.size();
    let depth: Vec<usize> = (0..n)
        .map(|mut v| {
            let mut d = 0;
            while let Some(p) = parent[v] {
                v = p;
                d += 1;
            }
            d
        })
        .collect();
    let mut atoms: Vec<Vec<Formula>> = vec![Vec::new(); n];
    for (r, t) in c.all_tuples() {
        let deepest = *t.iter().max_by_key(|&&e| depth[e]).expect("non-empty tuple");
        atoms[deepest].push(Formula::Atom {
            relation: c.vocab().relations()[r].name.clone(),
            args: t.iter().map(|&e| var(e)).collect(),
        });
    }
    let mut children: Vec<Vec<Element>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for v in 0..n {
        match parent[v] {
            Some(p) => children[p].push(v),
            None => roots.push(v),
        }
    }
    fn node(v: Element, atoms: &mut [Vec<Formula>], children: &[Vec<Element>]) -> Formula {
        let mut parts = std::mem::take(&mut atoms[v]);
        for &w in &children[v] {
            parts.push(node(w, atoms, children));
        }
        let body = match parts.len() {
            0 => Formula::Eq(var(v), var(v)),
            1 => parts.pop().expect("one part"),
            _ => Formula::And(parts),
        };
        Formula::Exists(format!("x{v}"), Box::new(body))
    }
    let mut tops: Vec<Formula> = roots.iter().map(|&r| node(r, &mut atoms, &children)).collect();
    Ok(if tops.len() == 1 {
        tops.pop().expect("one root")
    } else {
        Formula::And(tops)
    })
}

fn var(e: Element) -> Term {
    Term::Var(format!("x{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{evaluate, is_primitive_positive, quantifier_rank};
    use crate::structures::{enumerate_iso_classes, generate, GeneratorKind};
    use std::collections::BTreeMap;

    fn g(kind: GeneratorKind, n: usize) -> Structure {
        generate(kind, n, 0.0, 0).unwrap()
    }

    #[test]
    fn td_pool_examples() {
        let v = Vocabulary::graph();
        let one = enumerate_td_bounded_structures(&v, 1, 2).unwrap();
        // no Gaifman edges: per element, loop or not
        assert_eq!(one.len(), 2 + 3);
        assert!(one.iter().all(|s| gaifman_graph(s).edges().is_empty()));
        let two = enumerate_td_bounded_structures(&v, 2, 2).unwrap();
        let k2 = g(GeneratorKind::Clique, 2);
        assert!(two.iter().any(|s| s == &k2 || crate::structures::is_isomorphic(s, &k2).unwrap().is_some()));
        let all = enumerate_iso_classes(&v, 3, Family::All).unwrap();
        assert_eq!(enumerate_td_bounded_structures(&v, 3, 3).unwrap().len(), all.len());
    }

    #[test]
    fn oracle_examples() {
        let k2 = g(GeneratorKind::Clique, 2);
        let k3 = g(GeneratorKind::Clique, 3);
        assert!(pp_agree_oracle(&k3, &k3, 2, 3).unwrap().agrees());
        match pp_agree_oracle(&k2, &k3, 3, 3).unwrap() {
            PpVerdict::Separated { witness, maps_into } => {
                assert_eq!(maps_into, Side::Second);
                assert_eq!(witness.size(), 3);
                assert!(crate::hom::find_hom(&witness, &k3).unwrap().is_some());
                assert!(crate::hom::find_hom(&witness, &k2).unwrap().is_none());
            }
            other => panic!("expected a separator, got {other:?}"),
        }
        assert!(pp_agree_oracle(&k2, &k3, 2, 4).unwrap().agrees());
    }

    #[test]
    fn reduced_families_agree_with_the_full_pool() {
        let v = Vocabulary::graph();
        let targets = enumerate_iso_classes(&v, 3, Family::All).unwrap();
        for k in 1..=3 {
            let full = PpOracle::new(&v, k, 4, OracleFamily::All).unwrap();
            let reduced = PpOracle::new(&v, k, 4, OracleFamily::Digraphs).unwrap();
            let pf: Vec<_> = targets.iter().map(|t| full.profile(t).unwrap()).collect();
            let pr: Vec<_> = targets.iter().map(|t| reduced.profile(t).unwrap()).collect();
            for i in 0..targets.len() {
                for j in 0..i {
                    assert_eq!(pf[i] == pf[j], pr[i] == pr[j], "k={k} i={i} j={j}");
                }
            }
        }
        let graphs = enumerate_iso_classes(&v, 4, Family::SymmetricIrreflexive).unwrap();
        for k in 1..=2 {
            let full = PpOracle::new(&v, k, 4, OracleFamily::All).unwrap();
            let sym = PpOracle::new(&v, k, 4, OracleFamily::SymmetricLoopless).unwrap();
            let pf: Vec<_> = graphs.iter().map(|t| full.profile(t).unwrap()).collect();
            let ps: Vec<_> = graphs.iter().map(|t| sym.profile(t).unwrap()).collect();
            for i in 0..graphs.len() {
                for j in 0..i {
                    assert_eq!(pf[i] == pf[j], ps[i] == ps[j]);
                }
            }
        }
    }

    #[test]
    fn sentence_of_a_structure() {
        let dot = g(GeneratorKind::Edgeless, 1);
        let phi = pp_sentence_of_structure(&dot).unwrap();
        assert_eq!(phi.to_string(), "(exists x0 (= x0 x0))");
        let k2 = g(GeneratorKind::Clique, 2);
        let psi = pp_sentence_of_structure(&k2).unwrap();
        assert!(is_primitive_positive(&psi));
        assert_eq!(quantifier_rank(&psi), 2);
        let none = BTreeMap::new();
        assert!(evaluate(&g(GeneratorKind::Clique, 3), &psi, &none).unwrap());
        assert!(!evaluate(&g(GeneratorKind::Edgeless, 3), &psi, &none).unwrap());
        assert!(pp_sentence_of_structure(&k2.with_extra_constants(&[0]).unwrap()).is_err());
    }

    #[test]
    fn sentences_match_homomorphisms() {
        let v = Vocabulary::graph();
        let cs = enumerate_iso_classes(&v, 4, Family::All).unwrap();
        let ds = enumerate_iso_classes(&v, 3, Family::All).unwrap();
        let none = BTreeMap::new();
        for c in &cs {
            let phi = pp_sentence_of_structure(c).unwrap();
            assert_eq!(quantifier_rank(&phi), tree_depth(c).unwrap());
            for d in &ds {
                assert_eq!(evaluate(d, &phi, &none).unwrap(), find_hom(c, d).unwrap().is_some());
            }
        }
    }
}
