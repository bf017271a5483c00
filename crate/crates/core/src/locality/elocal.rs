//! Objects local for the weak equivalences, and the locality ranks whose
//! hypothesis is a weak equivalence inducing a bijection of hom-sets into
//! such an object.

use std::collections::{HashMap, HashSet};

use super::{
    all_tuples, classify, extended, gaifman_rank_with, hanf_rank_with, ByKind, Corpus, EquivalenceKind,
    LocalityReport, NeighborhoodRelation, PoolSummary,
};
use crate::error::{Error, Result};
use crate::hom::{core, enumerate_homs, find_hom, Homomorphism};
use crate::homotopy::is_weak_equivalence;
use crate::logic::Query;
use crate::structures::{neighborhood, Element, Family, Structure};

fn hom_list(a: &Structure, b: &Structure, limit: usize) -> Result<Vec<Homomorphism>> {
    let set = enumerate_homs(a, b, limit)?;
    if set.truncated {
        return Err(Error::BoundExceeded {
            what: "hom-set enumeration",
            bound: limit,
            actual: limit + 1,
        });
    }
    Ok(set.homs)
}

/// Whether `g ↦ g ∘ f` is a bijection from Hom(b, x) to Hom(a, x), for
/// `f: a -> b`. Hom-sets larger than `limit` are an error.
pub fn precomposition_bijective(
    f: &Homomorphism,
    a: &Structure,
    b: &Structure,
    x: &Structure,
    limit: usize,
) -> Result<bool> {
    f.verify(a, b)?;
    let from_b = hom_list(b, x, limit)?;
    let from_a = hom_list(a, x, limit)?;
    let images: HashSet<Vec<Element>> = from_b.iter().map(|g| f.then(g).map).collect();
    Ok(images.len() == from_b.len() && images.len() == from_a.len())
}

/// Indices of the objects `x` such that precomposition with every weak
/// equivalence between objects of `objects` is bijective on hom-sets into
/// `x`.
pub(crate) fn e_local_among(objects: &[Structure], limit: usize) -> Result<Vec<usize>> {
    let cores: Vec<Structure> = objects.iter().map(core).collect();
    let class = classify(
        &cores,
        &ByKind {
            kind: EquivalenceKind::Iso,
            family: Family::All,
        },
    )?;
    let mut weak = Vec::new();
    for (i, y) in objects.iter().enumerate() {
        for (j, z) in objects.iter().enumerate() {
            if class[i] != class[j] {
                continue;
            }
            for f in hom_list(y, z, limit)? {
                if !(i == j && f.is_identity()) {
                    weak.push((i, j, f));
                }
            }
        }
    }
    let mut homs: HashMap<(usize, usize), HashSet<Vec<Element>>> = HashMap::new();
    let mut hom_set = |from: usize, to: usize| -> Result<HashSet<Vec<Element>>> {
        if let Some(h) = homs.get(&(from, to)) {
            return Ok(h.clone());
        }
        let h: HashSet<Vec<Element>> = hom_list(&objects[from], &objects[to], limit)?
            .into_iter()
            .map(|g| g.map)
            .collect();
        homs.insert((from, to), h.clone());
        Ok(h)
    };
    let mut local = Vec::new();
    'objects: for x in 0..objects.len() {
        for (y, z, f) in &weak {
            let into_z = hom_set(*z, x)?;
            let into_y = hom_set(*y, x)?;
            let images: HashSet<Vec<Element>> = into_z.iter().map(|g| f.map.iter().map(|&e| g[e]).collect()).collect();
            if images.len() != into_z.len() || images != into_y {
                continue 'objects;
            }
        }
        local.push(x);
    }
    Ok(local)
}

/// Corpus entries that are local for the weak equivalences among corpus
/// structures.
pub fn e_local_objects(corpus: &Corpus, limit: usize) -> Result<Vec<usize>> {
    e_local_among(&corpus.structures(), limit)
}

/// Some weak equivalence between `n` and `m`, in either direction, whose
/// precomposition is bijective into one of the local objects.
struct HomIso {
    local: Vec<Structure>,
    limit: usize,
}

impl NeighborhoodRelation for HomIso {
    fn related(&self, n: &Structure, m: &Structure) -> Result<bool> {
        if self.local.is_empty() {
            return Ok(false);
        }
        for (src, dst) in [(n, m), (m, n)] {
            let Some(f) = find_hom(src, dst)? else { continue };
            if !is_weak_equivalence(src, dst, &f)? {
                continue;
            }
            for x in &self.local {
                if precomposition_bijective(&f, src, dst, x, self.limit)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// The distinct neighborhoods plus their cores, and the local ones.
fn pool_relation(nbhds: Vec<Structure>, limit: usize) -> Result<(Box<dyn NeighborhoodRelation>, Option<PoolSummary>)> {
    let iso = ByKind {
        kind: EquivalenceKind::Iso,
        family: Family::All,
    };
    let mut all: Vec<Structure> = nbhds.iter().map(core).collect();
    all.extend(nbhds);
    let ids = classify(&all, &iso)?;
    let mut objects = Vec::new();
    for (i, s) in all.into_iter().enumerate() {
        if ids[i] == objects.len() {
            objects.push(s);
        }
    }
    let local: Vec<Structure> = e_local_among(&objects, limit)?
        .into_iter()
        .map(|i| objects[i].clone())
        .collect();
    let summary = PoolSummary {
        objects: objects.len(),
        local: local.len(),
    };
    Ok((Box::new(HomIso { local, limit }), Some(summary)))
}

/// Gaifman rank where two tuples count as equivalent when a weak
/// equivalence links their d-neighborhoods and precomposition with it is
/// bijective into a local object of the pool of all corpus d-neighborhoods
/// and their cores.
pub fn homiso_gaifman_rank(q: &Query, corpus: &Corpus, d_max: usize, limit: usize) -> Result<LocalityReport> {
    let rel_at = |d: usize| {
        let mut nbhds = Vec::new();
        for e in corpus.entries() {
            for t in all_tuples(e.structure.size(), q.arity()) {
                nbhds.push(neighborhood(&e.structure, &t, d)?.structure);
            }
        }
        pool_relation(nbhds, limit)
    };
    gaifman_rank_with(q, corpus, d_max, "homiso".into(), &rel_at)
}

/// Hanf rank with the Hom-isomorphism hypothesis per element; the pool is
/// the d-neighborhoods of every designated tuple extended by one element.
pub fn homiso_hanf_rank(q: &Query, corpus: &Corpus, d_max: usize, limit: usize) -> Result<LocalityReport> {
    let rel_at = |d: usize| {
        let mut nbhds = Vec::new();
        for e in corpus.entries() {
            for c in 0..e.structure.size() {
                nbhds.push(neighborhood(&e.structure, &extended(&e.tuple, c), d)?.structure);
            }
        }
        pool_relation(nbhds, limit)
    };
    hanf_rank_with(q, corpus, d_max, "homiso".into(), &rel_at)
}
