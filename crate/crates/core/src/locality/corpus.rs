use serde::Serialize;

use crate::error::{Error, Result};
use crate::structures::{Element, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    #[serde(serialize_with = "crate::logic::serialize_text")]
    pub structure: Structure,
    /// Designated tuple; empty when none is given.
    pub tuple: Vec<Element>,
    /// Where the entry came from: a file name or a generator description.
    pub provenance: String,
}

/// Structures over one vocabulary with designated tuples of one length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn new(entries: Vec<CorpusEntry>) -> Result<Self> {
        if let Some(first) = entries.first() {
            for e in &entries {
                first.structure.check_compatible(&e.structure).map_err(|err| {
                    Error::VocabularyMismatch(format!("{}: {err}", e.provenance))
                })?;
                if e.tuple.len() != first.tuple.len() {
                    return Err(Error::TupleLengthMismatch {
                        left: first.tuple.len(),
                        right: e.tuple.len(),
                    });
                }
                if let Some(&bad) = e.tuple.iter().find(|&&x| x >= e.structure.size()) {
                    return Err(Error::ElementOutOfRange {
                        index: bad,
                        size: e.structure.size(),
                    });
                }
            }
        }
        Ok(Corpus { entries })
    }

    /// Entries without designated tuples, named by position.
    pub fn from_structures(structures: Vec<Structure>) -> Result<Self> {
        Corpus::new(
            structures
                .into_iter()
                .enumerate()
                .map(|(i, structure)| CorpusEntry {
                    structure,
                    tuple: Vec::new(),
                    provenance: format!("#{i}"),
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Length of the designated tuples, or none for an empty corpus.
    pub fn tuple_len(&self) -> Option<usize> {
        self.entries.first().map(|e| e.tuple.len())
    }

    pub fn structures(&self) -> Vec<Structure> {
        self.entries.iter().map(|e| e.structure.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Vocabulary;
    use std::sync::Arc;

    #[test]
    fn validation() {
        let e = |s: Structure, t: Vec<Element>| CorpusEntry {
            structure: s,
            tuple: t,
            provenance: "x".into(),
        };
        let k2 = Structure::graph(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(Corpus::new(vec![e(k2.clone(), vec![0]), e(k2.clone(), vec![1])]).is_ok());
        assert!(Corpus::new(vec![e(k2.clone(), vec![0]), e(k2.clone(), vec![])]).is_err());
        assert!(Corpus::new(vec![e(k2.clone(), vec![2])]).is_err());
        let v = Arc::new(Vocabulary::new([("R", 3)], 0).unwrap());
        let other = Structure::empty(v, 2, vec![]).unwrap();
        assert!(matches!(
            Corpus::new(vec![e(k2, vec![]), e(other, vec![])]),
            Err(Error::VocabularyMismatch(_))
        ));
    }
}
