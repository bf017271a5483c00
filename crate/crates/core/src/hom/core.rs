use serde::Serialize;

use super::{endomorphism_avoiding, Homomorphism};
use crate::structures::{is_isomorphic, Element, Structure};

/// A core of a structure, as an induced substructure with a retraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Core {
    #[serde(skip)]
    pub structure: Structure,
    /// `embedding[i]` is the element of the input that core element `i` is.
    pub embedding: Vec<Element>,
    /// A homomorphism from the input onto the core that is the identity on
    /// the embedded copy.
    pub retraction: Homomorphism,
}

/// True iff no homomorphism maps `a` into a proper induced substructure.
pub fn is_core(a: &Structure) -> bool {
    (0..a.size()).all(|v| endomorphism_avoiding(a, v).is_none())
}

/// Computes a core by restricting to the image of endomorphisms that miss
/// an element, until none exists.
pub fn core_with_retraction(a: &Structure) -> Core {
    let mut current = a.clone();
    // embedding of `current` into `a`, and a homomorphism a -> current
    let mut embedding: Vec<Element> = (0..a.size()).collect();
    let mut to_current = Homomorphism::identity(a.size());
    'shrink: loop {
        for v in 0..current.size() {
            if let Some(h) = endomorphism_avoiding(&current, v) {
                let mut image = h.clone();
                image.sort_unstable();
                image.dedup();
                let (sub, emb) = current
                    .induced(&image)
                    .expect("image contains all constants");
                let mut index = vec![usize::MAX; current.size()];
                for (i, &e) in emb.iter().enumerate() {
                    index[e] = i;
                }
                let onto = Homomorphism::new(h.iter().map(|&b| index[b]).collect());
                to_current = to_current.then(&onto);
                embedding = emb.iter().map(|&e| embedding[e]).collect();
                current = sub;
                continue 'shrink;
            }
        }
        break;
    }
    // `to_current` restricted to the embedded core is an automorphism of the
    // core; undo it so that the retraction fixes the core pointwise.
    let on_core = Homomorphism::new(embedding.iter().map(|&e| to_current.map[e]).collect());
    let mut inverse = vec![0; on_core.map.len()];
    for (i, &j) in on_core.map.iter().enumerate() {
        inverse[j] = i;
    }
    let retraction = to_current.then(&Homomorphism::new(inverse));
    Core {
        structure: current.without_labels(),
        embedding,
        retraction,
    }
}

pub fn core(a: &Structure) -> Structure {
    core_with_retraction(a).structure
}

/// Whether the cores of `a` and `b` are isomorphic.
pub(crate) fn cores_isomorphic(a: &Structure, b: &Structure) -> crate::Result<bool> {
    Ok(is_isomorphic(&core(a), &core(b))?.is_some())
}
