//! Homomorphisms, cores, tree-depth and bounded k-core search.

mod core;
mod kcore;
mod treedepth;

use serde::{Deserialize, Serialize};

use crate::csp::{HomProblem, VarOrder};
use crate::error::{Error, Result};
use crate::structures::{Element, Structure};

pub use self::core::{core, core_with_retraction, is_core, Core};
pub(crate) use self::core::cores_isomorphic;
pub use kcore::{k_core_search, k_core_search_in, KCoreOutcome};
pub use treedepth::{
    elimination_forest, graph_tree_depth, relative_tree_depth, tree_depth, tree_depth_bounded,
    DEFAULT_TD_BOUND,
};

/// A total map between universes; validity is relative to a pair of
/// structures and checked by [`Homomorphism::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homomorphism {
    pub map: Vec<Element>,
}

impl Homomorphism {
    pub fn new(map: Vec<Element>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism {
            map: (0..n).collect(),
        }
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&b| other.map[b]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &b)| i == b)
    }

    pub fn is_surjective(&self, codomain_size: usize) -> bool {
        let mut hit = vec![false; codomain_size];
        for &b in &self.map {
            if b < codomain_size {
                hit[b] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Checks totality, tuple preservation and constants.
    pub fn verify(&self, domain: &Structure, codomain: &Structure) -> Result<()> {
        domain.check_compatible(codomain)?;
        if self.map.len() != domain.size() {
            return Err(Error::NotHomomorphism(format!(
                "map has {} entries for a universe of size {}",
                self.map.len(),
                domain.size()
            )));
        }
        if let Some(&b) = self.map.iter().find(|&&b| b >= codomain.size()) {
            return Err(Error::NotHomomorphism(format!(
                "image {b} outside codomain of size {}",
                codomain.size()
            )));
        }
        for (i, (&a, &b)) in domain.constants().iter().zip(codomain.constants()).enumerate() {
            if self.map[a] != b {
                return Err(Error::NotHomomorphism(format!("constant c{i} is not preserved")));
            }
        }
        for (r, t) in domain.all_tuples() {
            let img: Vec<Element> = t.iter().map(|&e| self.map[e]).collect();
            if !codomain.contains(r, &img) {
                return Err(Error::NotHomomorphism(format!(
                    "tuple {t:?} of `{}` maps to {img:?}, which is absent",
                    domain.vocab().relations()[r].name
                )));
            }
        }
        Ok(())
    }
}

/// A witness homomorphism `a -> b`, if any. The search is complete.
pub fn find_hom(a: &Structure, b: &Structure) -> Result<Option<Homomorphism>> {
    a.check_compatible(b)?;
    Ok(HomProblem::new(a, b).first().map(Homomorphism::new))
}

/// Result of a bounded hom-set enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomSet {
    pub homs: Vec<Homomorphism>,
    pub truncated: bool,
}

/// All homomorphisms `a -> b` in lexicographic order of their maps, at most
/// `limit` of them.
pub fn enumerate_homs(a: &Structure, b: &Structure, limit: usize) -> Result<HomSet> {
    a.check_compatible(b)?;
    let (maps, truncated) = HomProblem::new(a, b).order(VarOrder::Static).all(limit);
    Ok(HomSet {
        homs: maps.into_iter().map(Homomorphism::new).collect(),
        truncated,
    })
}

pub fn hom_equivalent(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(find_hom(a, b)?.is_some() && find_hom(b, a)?.is_some())
}

/// Whether some homomorphism `a -> a` avoids `v` in its image; returns it.
pub(crate) fn endomorphism_avoiding(a: &Structure, v: Element) -> Option<Vec<Element>> {
    let mut p = HomProblem::new(a, a);
    let allowed: Vec<bool> = (0..a.size()).map(|u| u != v).collect();
    for x in 0..a.size() {
        p.restrict(x, &allowed);
    }
    p.first()
}
