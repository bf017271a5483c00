//! Isomorphism testing and canonical forms.
//!
//! Both rest on color refinement: vertices are colored by an
//! isomorphism-invariant signature (constants held, tuples they occur in and
//! at which position) until the partition stabilizes. Color names come from
//! the sorted signatures, so an isomorphism always maps a vertex to a vertex
//! of the same refined color.

use serde::{Deserialize, Serialize};

use super::{serialize_structure, Element, Structure};
use crate::csp::{HomProblem, VarOrder};
use crate::error::{Error, Result};

/// Largest universe accepted by [`canonical_form`] unless overridden.
pub const DEFAULT_CANON_BOUND: usize = 10;

/// A bijection `map[a] = b` between two universes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Isomorphism {
    pub map: Vec<Element>,
}

impl Isomorphism {
    pub fn identity(n: usize) -> Self {
        Isomorphism {
            map: (0..n).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        Isomorphism { map: inv }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Isomorphism) -> Self {
        Isomorphism {
            map: self.map.iter().map(|&b| other.map[b]).collect(),
        }
    }

    /// Checks bijectivity, relation preservation in both directions and
    /// positional constants.
    pub fn verify(&self, a: &Structure, b: &Structure) -> bool {
        if a.size() != b.size() || self.map.len() != a.size() || a.vocab() != b.vocab() {
            return false;
        }
        let mut hit = vec![false; b.size()];
        for &x in &self.map {
            if x >= b.size() || hit[x] {
                return false;
            }
            hit[x] = true;
        }
        if a.constants()
            .iter()
            .zip(b.constants())
            .any(|(&ca, &cb)| self.map[ca] != cb)
        {
            return false;
        }
        for r in 0..a.relations().len() {
            if a.relation(r).len() != b.relation(r).len() {
                return false;
            }
            for t in a.relation(r) {
                let img: Vec<Element> = t.iter().map(|&e| self.map[e]).collect();
                if !b.contains(r, &img) {
                    return false;
                }
            }
        }
        true
    }
}

/// Stable refined coloring. `initial` must itself be invariant.
pub(crate) fn refine(s: &Structure, initial: &[u32]) -> Vec<u32> {
    let n = s.size();
    let mut colors = initial.to_vec();
    let mut classes = count_distinct(&colors);
    let occurrences: Vec<Vec<(u32, u32, &Vec<Element>)>> = {
        let mut occ = vec![Vec::new(); n];
        for (r, t) in s.all_tuples() {
            for (pos, &e) in t.iter().enumerate() {
                occ[e].push((r as u32, pos as u32, t));
            }
        }
        occ
    };
    loop {
        let mut sigs: Vec<(Vec<u32>, usize)> = (0..n)
            .map(|v| {
                let mut parts: Vec<Vec<u32>> = occurrences[v]
                    .iter()
                    .map(|&(r, pos, t)| {
                        let mut p = Vec::with_capacity(t.len() + 2);
                        p.push(r);
                        p.push(pos);
                        p.extend(t.iter().map(|&e| colors[e]));
                        p
                    })
                    .collect();
                parts.sort_unstable();
                let mut sig = vec![colors[v]];
                for p in parts {
                    sig.push(u32::MAX);
                    sig.extend(p);
                }
                (sig, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut next = vec![0u32; n];
        let mut c = 0u32;
        for i in 0..n {
            if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                c += 1;
            }
            next[sigs[i].1] = c;
        }
        let new_classes = c as usize + 1;
        colors = next;
        if new_classes == classes {
            return colors;
        }
        classes = new_classes;
    }
}

fn count_distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Initial coloring: the sorted list of constant positions held by a vertex.
fn constant_colors(s: &Structure) -> Vec<u32> {
    let mut held: Vec<Vec<usize>> = vec![Vec::new(); s.size()];
    for (i, &c) in s.constants().iter().enumerate() {
        held[c].push(i);
    }
    let mut distinct = held.clone();
    distinct.sort();
    distinct.dedup();
    held.iter()
        .map(|h| distinct.binary_search(h).expect("present") as u32)
        .collect()
}

/// Invariant summary used to reject non-isomorphic pairs quickly and to
/// restrict candidate images.
fn refined_profile(s: &Structure) -> (Vec<u32>, Vec<u32>) {
    let colors = refine(s, &constant_colors(s));
    let mut hist = colors.clone();
    hist.sort_unstable();
    (colors, hist)
}

/// Finds an isomorphism `a -> b` if one exists.
pub fn is_isomorphic(a: &Structure, b: &Structure) -> Result<Option<Isomorphism>> {
    a.check_compatible(b)?;
    if a.size() != b.size()
        || (0..a.relations().len()).any(|r| a.relation(r).len() != b.relation(r).len())
    {
        return Ok(None);
    }
    let (ca, ha) = refined_profile(a);
    let (cb, hb) = refined_profile(b);
    if ha != hb {
        return Ok(None);
    }
    // An injective homomorphism between equal-size structures with equal
    // tuple counts is an isomorphism.
    let mut problem = HomProblem::new(a, b).injective(true).order(VarOrder::MinDomain);
    for v in 0..a.size() {
        let allowed: Vec<bool> = cb.iter().map(|&c| c == ca[v]).collect();
        problem.restrict(v, &allowed);
    }
    Ok(problem.first().map(|map| Isomorphism { map }))
}

/// Per-vertex list of tuples containing it, as `(relation, tuple)`.
fn occurrence_lists(s: &Structure) -> Vec<Vec<(u32, &Vec<Element>)>> {
    let mut occ = vec![Vec::new(); s.size()];
    for (r, t) in s.all_tuples() {
        let mut seen: Vec<Element> = Vec::new();
        for &e in t {
            if !seen.contains(&e) {
                seen.push(e);
                occ[e].push((r as u32, t));
            }
        }
    }
    occ
}

/// Tuples whose largest new label is exactly `label`, relabeled and sorted.
type Block = Vec<(u32, Vec<u32>)>;

struct Canonizer<'a> {
    s: &'a Structure,
    base: Vec<u32>,
    occ: Vec<Vec<(u32, &'a Vec<Element>)>>,
    twin_class: Vec<usize>,
    best: Option<(Vec<Block>, Vec<Element>)>,
}

impl<'a> Canonizer<'a> {
    fn new(s: &'a Structure) -> Self {
        let base = constant_colors(s);
        let occ = occurrence_lists(s);
        let twin_class = twin_classes(s);
        Canonizer {
            s,
            base,
            occ,
            twin_class,
            best: None,
        }
    }

    fn block(&self, order: &[Element], label_of: &[Option<u32>]) -> Block {
        let v = *order.last().expect("non-empty");
        let mut block: Block = self.occ[v]
            .iter()
            .filter(|(_, t)| t.iter().all(|&e| label_of[e].is_some()))
            .map(|&(r, t)| (r, t.iter().map(|&e| label_of[e].expect("labeled")).collect()))
            .collect();
        block.sort_unstable();
        block
    }

    fn run(&mut self, order: &mut Vec<Element>, label_of: &mut Vec<Option<u32>>, key: &mut Vec<Block>) {
        let n = self.s.size();
        let depth = order.len();
        if let Some((best, _)) = &self.best {
            if key.as_slice() > &best[..depth] {
                return;
            }
        }
        if depth == n {
            let better = match &self.best {
                Some((best, _)) => key.as_slice() < best.as_slice(),
                None => true,
            };
            if better {
                self.best = Some((key.clone(), order.clone()));
            }
            return;
        }
        // individualize the labeled prefix, then refine
        let initial: Vec<u32> = (0..n)
            .map(|v| match label_of[v] {
                Some(l) => l,
                None => n as u32 + self.base[v],
            })
            .collect();
        let colors = refine(self.s, &initial);
        let target = (0..n)
            .filter(|&v| label_of[v].is_none())
            .map(|v| colors[v])
            .min()
            .expect("unlabeled vertex remains");
        let mut tried_twins: Vec<usize> = Vec::new();
        for v in 0..n {
            if label_of[v].is_some() || colors[v] != target {
                continue;
            }
            if tried_twins.contains(&self.twin_class[v]) {
                continue;
            }
            tried_twins.push(self.twin_class[v]);
            order.push(v);
            label_of[v] = Some(depth as u32);
            let b = self.block(order, label_of);
            key.push(b);
            self.run(order, label_of, key);
            key.pop();
            label_of[v] = None;
            order.pop();
        }
    }
}

/// Groups vertices `u, v` for which the transposition `(u v)` is an
/// automorphism. Swapping such vertices never changes the best key.
fn twin_classes(s: &Structure) -> Vec<usize> {
    let n = s.size();
    let mut class: Vec<usize> = (0..n).collect();
    for v in 0..n {
        for u in 0..v {
            if class[u] != u {
                continue;
            }
            if transposition_is_automorphism(s, u, v) {
                class[v] = u;
                break;
            }
        }
    }
    class
}

fn transposition_is_automorphism(s: &Structure, u: Element, v: Element) -> bool {
    let swap = |e: Element| {
        if e == u {
            v
        } else if e == v {
            u
        } else {
            e
        }
    };
    if s.constants().iter().any(|&c| c == u || c == v) {
        return false;
    }
    s.all_tuples().all(|(r, t)| {
        if !t.iter().any(|&e| e == u || e == v) {
            return true;
        }
        let img: Vec<Element> = t.iter().map(|&e| swap(e)).collect();
        s.contains(r, &img)
    })
}

fn check_bound(s: &Structure, bound: usize) -> Result<()> {
    if s.size() > bound {
        return Err(Error::BoundExceeded {
            what: "canonicalization universe",
            bound,
            actual: s.size(),
        });
    }
    Ok(())
}

/// Canonical labeling: `perm[old] = new` and the relabeled structure
/// (labels dropped). Isomorphic inputs yield equal structures.
pub fn canonical_labeling(s: &Structure, bound: usize) -> Result<(Vec<Element>, Structure)> {
    check_bound(s, bound)?;
    let mut c = Canonizer::new(s);
    let mut order = Vec::with_capacity(s.size());
    let mut label_of = vec![None; s.size()];
    let mut key = Vec::with_capacity(s.size());
    c.run(&mut order, &mut label_of, &mut key);
    let (_, order) = c.best.expect("at least one labeling");
    let mut perm = vec![0; s.size()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let canon = s.relabel(&perm).without_labels();
    Ok((perm, canon))
}

/// Canonical byte string with the default size bound.
pub fn canonical_form(s: &Structure) -> Result<Vec<u8>> {
    canonical_form_bounded(s, DEFAULT_CANON_BOUND)
}

/// Serialization of the canonically relabeled structure: equal exactly for
/// isomorphic inputs.
pub fn canonical_form_bounded(s: &Structure, bound: usize) -> Result<Vec<u8>> {
    let (_, canon) = canonical_labeling(s, bound)?;
    Ok(serialize_structure(&canon).into_bytes())
}

/// Compact canonical key for hashing during enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct CanonicalKey(pub(crate) Vec<u32>);

pub(crate) fn canonical_key(s: &Structure, bound: usize) -> Result<(CanonicalKey, Structure)> {
    let (_, canon) = canonical_labeling(s, bound)?;
    let mut key = vec![canon.size() as u32];
    key.extend(canon.constants().iter().map(|&c| c as u32));
    for set in canon.relations() {
        key.push(u32::MAX);
        key.push(set.len() as u32);
        for t in set {
            key.extend(t.iter().map(|&e| e as u32));
        }
    }
    Ok((CanonicalKey(key), canon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{generate, GeneratorKind};

    fn cycle(n: usize) -> Structure {
        generate(GeneratorKind::Cycle, n, 0.0, 0).unwrap()
    }

    #[test]
    fn identity_on_equal_structures() {
        let c4 = cycle(4);
        let iso = is_isomorphic(&c4, &c4).unwrap().unwrap();
        assert!(iso.verify(&c4, &c4));
    }

    #[test]
    fn k2_is_not_edgeless() {
        let k2 = Structure::graph(2, &[(0, 1)]).unwrap();
        let e2 = Structure::graph(2, &[]).unwrap();
        assert!(is_isomorphic(&k2, &e2).unwrap().is_none());
    }

    #[test]
    fn relabeled_c4_has_witness() {
        let a = cycle(4);
        let b = a.relabel(&[2, 0, 3, 1]);
        let iso = is_isomorphic(&a, &b).unwrap().unwrap();
        assert!(iso.verify(&a, &b));
        assert!(iso.inverse().verify(&b, &a));
    }

    #[test]
    fn vocabulary_mismatch_is_an_error() {
        let k2 = Structure::graph(2, &[(0, 1)]).unwrap();
        let p = k2.with_extra_constants(&[0]).unwrap();
        assert!(is_isomorphic(&k2, &p).is_err());
    }

    #[test]
    fn canonical_forms_separate_k3_and_p3() {
        let k3 = generate(GeneratorKind::Clique, 3, 0.0, 0).unwrap();
        let p3 = generate(GeneratorKind::Path, 3, 0.0, 0).unwrap();
        let k3b = k3.relabel(&[1, 2, 0]);
        assert_eq!(canonical_form(&k3).unwrap(), canonical_form(&k3b).unwrap());
        assert_ne!(canonical_form(&k3).unwrap(), canonical_form(&p3).unwrap());
    }

    #[test]
    fn canonical_form_respects_constants() {
        let p3 = generate(GeneratorKind::Path, 3, 0.0, 0).unwrap();
        let end = p3.with_extra_constants(&[0]).unwrap();
        let other_end = p3.with_extra_constants(&[2]).unwrap();
        let middle = p3.with_extra_constants(&[1]).unwrap();
        assert_eq!(
            canonical_form(&end).unwrap(),
            canonical_form(&other_end).unwrap()
        );
        assert_ne!(canonical_form(&end).unwrap(), canonical_form(&middle).unwrap());
    }

    #[test]
    fn canonical_form_bound_is_explicit() {
        let big = generate(GeneratorKind::Edgeless, 11, 0.0, 0).unwrap();
        assert!(matches!(
            canonical_form(&big),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(canonical_form_bounded(&big, 11).is_ok());
    }

    #[test]
    fn vertex_transitive_graphs_canonicalize_quickly() {
        let c10 = cycle(10);
        let shuffled = c10.relabel(&[3, 7, 1, 9, 0, 5, 2, 8, 6, 4]);
        assert_eq!(
            canonical_form(&c10).unwrap(),
            canonical_form(&shuffled).unwrap()
        );
        let k10 = generate(GeneratorKind::Clique, 10, 0.0, 0).unwrap();
        assert!(canonical_form(&k10).is_ok());
    }
}
