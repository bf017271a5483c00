//! Consequences of the model structure on finite structures whose weak
//! equivalences are the maps between structures with isomorphic cores:
//! classifiers for weak equivalences and retractions, the homotopy quotient
//! by cores, and the under and pointed constructions.

mod pointed;

use serde::{Deserialize, Serialize};

use crate::csp::HomProblem;
use crate::error::{Error, Result};
use crate::hom::{core, cores_isomorphic, enumerate_homs, hom_equivalent, HomSet, Homomorphism};
use crate::structures::{canonical_form_bounded, canonical_labeling, Structure};

pub use pointed::{
    lifted_class, make_pointed, make_under, Classification, LiftedClass, PointedMorphism, PointedObject, Structured,
    UnderMorphism, UnderObject,
};

/// Every object is both fibrant and cofibrant; kept as a predicate so
/// reports can cite it.
pub fn is_fibrant_and_cofibrant(_: &Structure) -> bool {
    true
}

/// A homomorphism between two objects of a corpus, named by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub domain: usize,
    pub codomain: usize,
    pub map: Homomorphism,
}

/// Whether `f: a -> b` is a homomorphism between structures with
/// isomorphic cores.
pub fn is_weak_equivalence(a: &Structure, b: &Structure, f: &Homomorphism) -> Result<bool> {
    f.verify(a, b)?;
    cores_isomorphic(a, b)
}

/// A section `s: b -> a` with `f ∘ s = id`, if `f` is a retraction.
pub fn section(a: &Structure, b: &Structure, f: &Homomorphism) -> Result<Option<Homomorphism>> {
    f.verify(a, b)?;
    if !f.is_surjective(b.size()) {
        return Ok(None);
    }
    let mut p = HomProblem::new(b, a);
    for y in 0..b.size() {
        let fibre: Vec<bool> = f.map.iter().map(|&x| x == y).collect();
        p.restrict(y, &fibre);
    }
    Ok(p.first().map(Homomorphism::new))
}

/// Whether `f` is a retraction, i.e. an acyclic fibration.
pub fn is_acyclic_fibration(a: &Structure, b: &Structure, f: &Homomorphism) -> Result<bool> {
    Ok(section(a, b, f)?.is_some())
}

/// Any two parallel morphisms are homotopic; errors unless `f` and `g`
/// share domain and codomain.
pub fn are_homotopic(f: &Morphism, g: &Morphism) -> Result<bool> {
    if (f.domain, f.codomain) != (g.domain, g.codomain) {
        return Err(Error::InvalidArgument(format!(
            "morphisms {} -> {} and {} -> {} are not parallel",
            f.domain, f.codomain, g.domain, g.codomain
        )));
    }
    Ok(true)
}

/// A class of hom-equivalent corpus objects with a canonical core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoClass {
    pub members: Vec<usize>,
    #[serde(serialize_with = "crate::logic::serialize_text")]
    pub representative: Structure,
    /// Hex encoding of the representative's canonical form.
    pub canonical_key: String,
}

/// Partitions `objects` by hom-equivalence; each class is represented by
/// the canonically labeled core of its first member.
pub fn ho_quotient(objects: &[Structure], canon_bound: usize) -> Result<Vec<HoClass>> {
    let mut classes: Vec<HoClass> = Vec::new();
    for (i, s) in objects.iter().enumerate() {
        let mut placed = false;
        for c in classes.iter_mut() {
            if hom_equivalent(&objects[c.members[0]], s)? {
                c.members.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            let (_, representative) = canonical_labeling(&core(s), canon_bound)?;
            let key = canonical_form_bounded(&representative, canon_bound)?;
            classes.push(HoClass {
                members: vec![i],
                representative,
                canonical_key: key.iter().map(|b| format!("{b:02x}")).collect(),
            });
        }
    }
    Ok(classes)
}

/// The quotient's hom-set between two classes, realized between their
/// representatives.
pub fn quotient_homs(from: &HoClass, to: &HoClass, limit: usize) -> Result<HomSet> {
    enumerate_homs(&from.representative, &to.representative, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{generate, is_isomorphic, GeneratorKind};

    fn g(kind: GeneratorKind, n: usize) -> Structure {
        generate(kind, n, 0.0, 0).unwrap()
    }

    #[test]
    fn weak_equivalences() {
        let c4 = g(GeneratorKind::Cycle, 4);
        let k2 = g(GeneratorKind::Clique, 2);
        let k3 = g(GeneratorKind::Clique, 3);
        assert!(is_weak_equivalence(&k3, &k3, &Homomorphism::new(vec![1, 2, 0])).unwrap());
        assert!(is_weak_equivalence(&c4, &k2, &Homomorphism::new(vec![0, 1, 0, 1])).unwrap());
        assert!(!is_weak_equivalence(&k2, &k3, &Homomorphism::identity(2)).unwrap());
        assert!(is_weak_equivalence(&k2, &k3, &Homomorphism::new(vec![0, 0])).is_err());
    }

    #[test]
    fn retractions() {
        let c4 = g(GeneratorKind::Cycle, 4);
        let k2 = g(GeneratorKind::Clique, 2);
        let k3 = g(GeneratorKind::Clique, 3);
        assert!(is_acyclic_fibration(&c4, &c4, &Homomorphism::identity(4)).unwrap());
        let color = Homomorphism::new(vec![0, 1, 0, 1]);
        let s = section(&c4, &k2, &color).unwrap().unwrap();
        assert!(s.then(&color).is_identity());
        s.verify(&k2, &c4).unwrap();
        assert!(!is_acyclic_fibration(&k2, &k3, &Homomorphism::identity(2)).unwrap());
        let two_edges = Structure::graph(4, &[(0, 1), (2, 3)]).unwrap();
        let e = Structure::graph(2, &[(0, 1)]).unwrap();
        assert!(is_acyclic_fibration(&two_edges, &e, &Homomorphism::new(vec![0, 1, 0, 1])).unwrap());
        // surjective, but the tuple (1, 2) has no preimage tuple
        let lone = Structure::graph(3, &[(0, 1)]).unwrap();
        let path = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_acyclic_fibration(&lone, &path, &Homomorphism::identity(3)).unwrap());
    }

    #[test]
    fn homotopy_is_trivial_on_parallel_maps() {
        let f = Morphism {
            domain: 0,
            codomain: 0,
            map: Homomorphism::identity(2),
        };
        let g = Morphism {
            map: Homomorphism::new(vec![1, 0]),
            ..f.clone()
        };
        assert!(are_homotopic(&f, &g).unwrap());
        assert!(are_homotopic(&f, &f).unwrap());
        let h = Morphism { codomain: 1, ..f.clone() };
        assert!(are_homotopic(&f, &h).is_err());
    }

    #[test]
    fn quotient() {
        let objects = vec![
            g(GeneratorKind::Clique, 2),
            g(GeneratorKind::Cycle, 4),
            g(GeneratorKind::Clique, 3),
        ];
        let classes = ho_quotient(&objects, 10).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].members, vec![0, 1]);
        assert_eq!(classes[1].members, vec![2]);
        assert!(is_isomorphic(&classes[0].representative, &objects[0]).unwrap().is_some());
        assert_eq!(quotient_homs(&classes[0], &classes[1], 100).unwrap().homs.len(), 6);
        assert!(quotient_homs(&classes[1], &classes[0], 100).unwrap().homs.is_empty());
        let same = vec![objects[1].clone(), objects[1].relabel(&[2, 3, 0, 1])];
        assert_eq!(ho_quotient(&same, 10).unwrap().len(), 1);
    }
}
