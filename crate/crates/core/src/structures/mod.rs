//! Finite relational structures over a vocabulary with optional constants.
//!
//! A [`Structure`] has universe `{0, .., size-1}`, one set of tuples per
//! relation symbol and a positional list of constants. Expanding a
//! vocabulary by `n` constants is done by appending to that list.

pub(crate) mod enumerate;
mod format;
mod gaifman;
mod generate;
mod iso;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{enumerate_iso_classes, Family};
pub use format::{parse_structure, serialize_structure};
pub use gaifman::{distance, gaifman_graph, neighborhood, GaifmanGraph, Neighborhood};
pub use generate::{generate, generate_random, GeneratorKind};
pub use iso::{
    canonical_form, canonical_form_bounded, canonical_labeling, is_isomorphic, Isomorphism,
    DEFAULT_CANON_BOUND,
};

pub(crate) use iso::CanonicalKey;

/// Index of an element of a structure's universe.
pub type Element = usize;

/// A relation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

const RESERVED: &[&str] = &["exists", "forall", "and", "or", "not"];

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered list of relation symbols plus a number of constant symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vocabulary {
    relations: Vec<RelationSymbol>,
    constant_count: usize,
}

impl Vocabulary {
    pub fn new<S: Into<String>>(
        relations: impl IntoIterator<Item = (S, usize)>,
        constant_count: usize,
    ) -> Result<Self> {
        let mut out: Vec<RelationSymbol> = Vec::new();
        for (name, arity) in relations {
            let name = name.into();
            if !is_identifier(&name) || RESERVED.contains(&name.as_str()) {
                return Err(Error::InvalidVocabulary(format!(
                    "`{name}` is not a valid relation name"
                )));
            }
            if arity == 0 {
                return Err(Error::InvalidVocabulary(format!(
                    "relation `{name}` must have arity >= 1"
                )));
            }
            if out.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRelation(name));
            }
            out.push(RelationSymbol { name, arity });
        }
        Ok(Vocabulary {
            relations: out,
            constant_count,
        })
    }

    /// One binary symbol `E`, no constants.
    pub fn graph() -> Self {
        Vocabulary {
            relations: vec![RelationSymbol {
                name: "E".into(),
                arity: 2,
            }],
            constant_count: 0,
        }
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn constant_count(&self) -> usize {
        self.constant_count
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    /// The same relations with `n` constant symbols.
    pub fn with_constant_count(&self, n: usize) -> Self {
        Vocabulary {
            relations: self.relations.clone(),
            constant_count: n,
        }
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity).max().unwrap_or(0)
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.relations {
            write!(f, "{}/{} ", r.name, r.arity)?;
        }
        write!(f, "consts={}", self.constant_count)
    }
}

/// A finite structure. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Arc<Vocabulary>,
    size: usize,
    labels: Option<Vec<String>>,
    relations: Vec<BTreeSet<Vec<Element>>>,
    constants: Vec<Element>,
}

impl Structure {
    /// Builds and validates a structure. `relations` is given per symbol in
    /// vocabulary order; duplicate tuples collapse.
    pub fn new(
        vocab: Arc<Vocabulary>,
        size: usize,
        relations: Vec<Vec<Vec<Element>>>,
        constants: Vec<Element>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidStructure("universe must be non-empty".into()));
        }
        if relations.len() != vocab.relations.len() {
            return Err(Error::InvalidStructure(format!(
                "expected {} relation interpretations, got {}",
                vocab.relations.len(),
                relations.len()
            )));
        }
        if constants.len() != vocab.constant_count {
            return Err(Error::InvalidStructure(format!(
                "expected {} constants, got {}",
                vocab.constant_count,
                constants.len()
            )));
        }
        for &c in &constants {
            if c >= size {
                return Err(Error::ElementOutOfRange { index: c, size });
            }
        }
        let mut sets = Vec::with_capacity(relations.len());
        for (sym, tuples) in vocab.relations.iter().zip(relations) {
            let mut set = BTreeSet::new();
            for t in tuples {
                if t.len() != sym.arity {
                    return Err(Error::ArityMismatch {
                        symbol: sym.name.clone(),
                        expected: sym.arity,
                        found: t.len(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&e| e >= size) {
                    return Err(Error::ElementOutOfRange { index: bad, size });
                }
                set.insert(t);
            }
            sets.push(set);
        }
        Ok(Structure {
            vocab,
            size,
            labels: None,
            relations: sets,
            constants,
        })
    }

    /// Internal constructor for callers that already hold valid parts.
    pub(crate) fn from_sets(
        vocab: Arc<Vocabulary>,
        size: usize,
        relations: Vec<BTreeSet<Vec<Element>>>,
        constants: Vec<Element>,
    ) -> Self {
        debug_assert_eq!(relations.len(), vocab.relations.len());
        debug_assert_eq!(constants.len(), vocab.constant_count);
        Structure {
            vocab,
            size,
            labels: None,
            relations,
            constants,
        }
    }

    /// A graph over `E/2`: each listed edge is added in both directions.
    pub fn graph(size: usize, edges: &[(Element, Element)]) -> Result<Self> {
        let tuples = edges
            .iter()
            .flat_map(|&(a, b)| [vec![a, b], vec![b, a]])
            .collect();
        Structure::new(Arc::new(Vocabulary::graph()), size, vec![tuples], vec![])
    }

    /// A structure over `vocab` with every relation empty.
    pub fn empty(vocab: Arc<Vocabulary>, size: usize, constants: Vec<Element>) -> Result<Self> {
        let n = vocab.relations.len();
        Structure::new(vocab, size, vec![Vec::new(); n], constants)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::InvalidStructure(format!(
                "{} labels for universe of size {}",
                labels.len(),
                self.size
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn relation(&self, index: usize) -> &BTreeSet<Vec<Element>> {
        &self.relations[index]
    }

    pub fn relations(&self) -> &[BTreeSet<Vec<Element>>] {
        &self.relations
    }

    pub fn constants(&self) -> &[Element] {
        &self.constants
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    pub fn contains(&self, rel: usize, tuple: &[Element]) -> bool {
        self.relations[rel].contains(tuple)
    }

    /// Every `(relation index, tuple)` pair.
    pub fn all_tuples(&self) -> impl Iterator<Item = (usize, &Vec<Element>)> + '_ {
        self.relations
            .iter()
            .enumerate()
            .flat_map(|(r, set)| set.iter().map(move |t| (r, t)))
    }

    /// Errors unless both structures share relation symbols, arities and
    /// the number of constants.
    pub fn check_compatible(&self, other: &Structure) -> Result<()> {
        if self.vocab == other.vocab {
            Ok(())
        } else {
            Err(Error::VocabularyMismatch(format!(
                "`{}` vs `{}`",
                self.vocab, other.vocab
            )))
        }
    }

    /// Induced substructure on `elements` (kept in ascending order). Returns
    /// the substructure and the embedding `new index -> old index`.
    /// Constants must lie inside `elements`.
    pub fn induced(&self, elements: &[Element]) -> Result<(Structure, Vec<Element>)> {
        let mut keep: Vec<Element> = elements.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::InvalidStructure(
                "induced substructure must be non-empty".into(),
            ));
        }
        let mut new_index = vec![usize::MAX; self.size];
        for (i, &e) in keep.iter().enumerate() {
            if e >= self.size {
                return Err(Error::ElementOutOfRange {
                    index: e,
                    size: self.size,
                });
            }
            new_index[e] = i;
        }
        let constants = self
            .constants
            .iter()
            .map(|&c| {
                let i = new_index[c];
                if i == usize::MAX {
                    Err(Error::InvalidStructure(format!(
                        "constant element {c} is outside the induced set"
                    )))
                } else {
                    Ok(i)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let relations = self
            .relations
            .iter()
            .map(|set| {
                set.iter()
                    .filter(|t| t.iter().all(|&e| new_index[e] != usize::MAX))
                    .map(|t| t.iter().map(|&e| new_index[e]).collect())
                    .collect()
            })
            .collect();
        let mut s = Structure::from_sets(self.vocab.clone(), keep.len(), relations, constants);
        if let Some(labels) = &self.labels {
            s.labels = Some(keep.iter().map(|&e| labels[e].clone()).collect());
        }
        Ok((s, keep))
    }

    /// The expansion by extra constants appended after the existing ones.
    pub fn with_extra_constants(&self, extra: &[Element]) -> Result<Structure> {
        if let Some(&bad) = extra.iter().find(|&&e| e >= self.size) {
            return Err(Error::ElementOutOfRange {
                index: bad,
                size: self.size,
            });
        }
        let vocab = Arc::new(
            self.vocab
                .with_constant_count(self.vocab.constant_count + extra.len()),
        );
        let mut constants = self.constants.clone();
        constants.extend_from_slice(extra);
        Ok(Structure {
            vocab,
            size: self.size,
            labels: self.labels.clone(),
            relations: self.relations.clone(),
            constants,
        })
    }

    /// Drops all constants (the reduct to the relational part).
    pub fn without_constants(&self) -> Structure {
        Structure {
            vocab: Arc::new(self.vocab.with_constant_count(0)),
            size: self.size,
            labels: self.labels.clone(),
            relations: self.relations.clone(),
            constants: Vec::new(),
        }
    }

    /// Image of the structure under the bijection `perm[old] = new`.
    pub fn relabel(&self, perm: &[Element]) -> Structure {
        assert_eq!(perm.len(), self.size);
        let relations = self
            .relations
            .iter()
            .map(|set| {
                set.iter()
                    .map(|t| t.iter().map(|&e| perm[e]).collect())
                    .collect()
            })
            .collect();
        let constants = self.constants.iter().map(|&c| perm[c]).collect();
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); self.size];
            for (old, name) in l.iter().enumerate() {
                out[perm[old]] = name.clone();
            }
            out
        });
        Structure {
            vocab: self.vocab.clone(),
            size: self.size,
            labels,
            relations,
            constants,
        }
    }

    /// Copy without the given tuple.
    pub fn without_tuple(&self, rel: usize, tuple: &[Element]) -> Structure {
        let mut s = self.clone();
        s.relations[rel].remove(tuple);
        s
    }

    /// Copy with one extra tuple.
    pub fn with_tuple(&self, rel: usize, tuple: Vec<Element>) -> Result<Structure> {
        let sym = &self.vocab.relations[rel];
        if tuple.len() != sym.arity {
            return Err(Error::ArityMismatch {
                symbol: sym.name.clone(),
                expected: sym.arity,
                found: tuple.len(),
            });
        }
        if let Some(&bad) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(Error::ElementOutOfRange {
                index: bad,
                size: self.size,
            });
        }
        let mut s = self.clone();
        s.relations[rel].insert(tuple);
        Ok(s)
    }

    /// Display name of an element.
    pub fn label(&self, e: Element) -> String {
        match &self.labels {
            Some(l) => l[e].clone(),
            None => e.to_string(),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_structure(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_rejects_bad_symbols() {
        assert!(Vocabulary::new([("E", 2), ("E", 1)], 0).is_err());
        assert!(Vocabulary::new([("E", 0)], 0).is_err());
        assert!(Vocabulary::new([("2x", 1)], 0).is_err());
        assert!(Vocabulary::new([("and", 2)], 0).is_err());
        assert!(Vocabulary::new([("R_1", 3), ("lt", 2)], 2).is_ok());
    }

    #[test]
    fn structure_validates_tuples_and_constants() {
        let v = Arc::new(Vocabulary::graph());
        assert!(matches!(
            Structure::new(v.clone(), 2, vec![vec![vec![0, 1, 2]]], vec![]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            Structure::new(v.clone(), 2, vec![vec![vec![0, 2]]], vec![]),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert!(Structure::new(v.clone(), 0, vec![vec![]], vec![]).is_err());
        let s = Structure::new(v, 2, vec![vec![vec![0, 1], vec![0, 1]]], vec![]).unwrap();
        assert_eq!(s.tuple_count(), 1);
    }

    #[test]
    fn induced_reindexes_in_ambient_order() {
        let p = Structure::graph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (sub, emb) = p.induced(&[3, 1, 2]).unwrap();
        assert_eq!(emb, vec![1, 2, 3]);
        assert_eq!(sub.size(), 3);
        assert!(sub.contains(0, &[0, 1]));
        assert!(sub.contains(0, &[2, 1]));
        assert_eq!(sub.tuple_count(), 4);
    }

    #[test]
    fn extra_constants_extend_vocabulary() {
        let k2 = Structure::graph(2, &[(0, 1)]).unwrap();
        let p = k2.with_extra_constants(&[1]).unwrap();
        assert_eq!(p.vocab().constant_count(), 1);
        assert_eq!(p.constants(), &[1]);
        assert!(k2.check_compatible(&p).is_err());
    }
}
