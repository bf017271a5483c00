//! Objects under a fixed structure `A`, and pointed objects `A -> X -> A`
//! whose composite is the identity.

use serde::Serialize;

use super::{is_acyclic_fibration, is_weak_equivalence};
use crate::error::{Error, Result};
use crate::hom::Homomorphism;
use crate::structures::Structure;

fn same_base(a: &Structure, b: &Structure) -> Result<()> {
    if a != b {
        return Err(Error::InvalidArgument("objects lie over different base structures".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnderObject {
    pub base: Structure,
    pub total: Structure,
    pub section: Homomorphism,
}

impl UnderObject {
    /// The identity on `a`, the initial object under `a`.
    pub fn initial(a: &Structure) -> Self {
        UnderObject {
            base: a.clone(),
            total: a.clone(),
            section: Homomorphism::identity(a.size()),
        }
    }
}

pub fn make_under(a: &Structure, x: &Structure, i: &Homomorphism) -> Result<UnderObject> {
    i.verify(a, x)?;
    Ok(UnderObject {
        base: a.clone(),
        total: x.clone(),
        section: i.clone(),
    })
}

/// A homomorphism of totals commuting with the sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnderMorphism {
    pub source: UnderObject,
    pub target: UnderObject,
    pub map: Homomorphism,
}

impl UnderMorphism {
    pub fn new(source: &UnderObject, target: &UnderObject, map: &Homomorphism) -> Result<Self> {
        same_base(&source.base, &target.base)?;
        map.verify(&source.total, &target.total)?;
        if source.section.then(map) != target.section {
            return Err(Error::NotCommuting("map ∘ i_X differs from i_Y".into()));
        }
        Ok(UnderMorphism {
            source: source.clone(),
            target: target.clone(),
            map: map.clone(),
        })
    }

    /// From the initial object, the section itself.
    pub fn from_initial(x: &UnderObject) -> Self {
        UnderMorphism {
            source: UnderObject::initial(&x.base),
            target: x.clone(),
            map: x.section.clone(),
        }
    }
}

/// `A -> X -> A` with `r ∘ i = id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedObject {
    pub base: Structure,
    pub total: Structure,
    pub section: Homomorphism,
    pub retraction: Homomorphism,
}

impl PointedObject {
    /// The identity span on `a`.
    pub fn zero(a: &Structure) -> Self {
        PointedObject {
            base: a.clone(),
            total: a.clone(),
            section: Homomorphism::identity(a.size()),
            retraction: Homomorphism::identity(a.size()),
        }
    }
}

pub fn make_pointed(a: &Structure, x: &Structure, i: &Homomorphism, r: &Homomorphism) -> Result<PointedObject> {
    i.verify(a, x)?;
    r.verify(x, a)?;
    if !i.then(r).is_identity() {
        return Err(Error::NotCommuting("r ∘ i is not the identity".into()));
    }
    Ok(PointedObject {
        base: a.clone(),
        total: x.clone(),
        section: i.clone(),
        retraction: r.clone(),
    })
}

/// A map of totals commuting with both sections and retractions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedMorphism {
    pub source: PointedObject,
    pub target: PointedObject,
    pub map: Homomorphism,
}

impl PointedMorphism {
    pub fn new(source: &PointedObject, target: &PointedObject, map: &Homomorphism) -> Result<Self> {
        same_base(&source.base, &target.base)?;
        map.verify(&source.total, &target.total)?;
        if source.section.then(map) != target.section {
            return Err(Error::NotCommuting("map ∘ i_X differs from i_Y".into()));
        }
        if map.then(&target.retraction) != source.retraction {
            return Err(Error::NotCommuting("r_Y ∘ map differs from r_X".into()));
        }
        Ok(PointedMorphism {
            source: source.clone(),
            target: target.clone(),
            map: map.clone(),
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PointedMorphism) -> Result<PointedMorphism> {
        if self.target != other.source {
            return Err(Error::InvalidArgument("pointed morphisms are not composable".into()));
        }
        PointedMorphism::new(&self.source, &other.target, &self.map.then(&other.map))
    }
}

/// Morphisms with an underlying homomorphism of structures.
pub trait Structured {
    fn underlying(&self) -> (&Structure, &Structure, &Homomorphism);
}

impl Structured for UnderMorphism {
    fn underlying(&self) -> (&Structure, &Structure, &Homomorphism) {
        (&self.source.total, &self.target.total, &self.map)
    }
}

impl Structured for PointedMorphism {
    fn underlying(&self) -> (&Structure, &Structure, &Homomorphism) {
        (&self.source.total, &self.target.total, &self.map)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Yes,
    /// Not determined by the weak equivalences and retractions alone.
    Unspecified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftedClass {
    pub weak_equivalence: bool,
    pub acyclic_fibration: bool,
    pub fibration: Classification,
    pub cofibration: Classification,
}

/// Classifies a structured morphism by its underlying homomorphism.
/// Isomorphisms are both fibrations and cofibrations, and retractions are
/// fibrations; other cases are left unspecified.
pub fn lifted_class(m: &dyn Structured) -> Result<LiftedClass> {
    let (a, b, f) = m.underlying();
    let weak = is_weak_equivalence(a, b, f)?;
    let acyclic = is_acyclic_fibration(a, b, f)?;
    let iso = a.size() == b.size() && acyclic && a.tuple_count() == b.tuple_count();
    let yes_if = |c: bool| if c { Classification::Yes } else { Classification::Unspecified };
    Ok(LiftedClass {
        weak_equivalence: weak,
        acyclic_fibration: acyclic,
        fibration: yes_if(acyclic),
        cofibration: yes_if(iso),
    })
}
