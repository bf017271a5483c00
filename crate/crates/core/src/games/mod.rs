//! Ehrenfeucht–Fraïssé games, the one-sided forth game, and the audits of
//! k-extendability built on them.

mod ef;
mod extend;
mod forth;

use serde::{Deserialize, Serialize};

use crate::structures::{Element, Structure};

pub use ef::{ef_equivalent, ef_equivalent_reference, ef_transcript};
pub use extend::{k_extendable, lemma1_audit, ExtendOutcome, Lemma1Report, Lemma1Violation};
pub use forth::{forth_khom, forth_separator, forth_transcript, khom_equivalent};

/// Which structure a spoiler move is made in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Board {
    Left,
    Right,
}

/// One round: the spoiler's pick and the duplicator's answer, if any legal
/// answer existed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub board: Board,
    pub spoiler: Element,
    pub duplicator: Option<Element>,
}

/// Tuples containing each element, for incremental position checks.
pub(crate) struct Occurrences<'a> {
    occ: Vec<Vec<(usize, &'a [Element])>>,
}

impl<'a> Occurrences<'a> {
    pub(crate) fn new(s: &'a Structure) -> Self {
        let mut occ = vec![Vec::new(); s.size()];
        for (r, t) in s.all_tuples() {
            let mut seen: Vec<Element> = Vec::new();
            for &e in t {
                if !seen.contains(&e) {
                    seen.push(e);
                    occ[e].push((r, t.as_slice()));
                }
            }
        }
        Occurrences { occ }
    }
}

/// Whether adding `a -> b` to the partial map `fwd` keeps it a partial
/// homomorphism from `left` to `right`: `fwd` stays a function and every
/// tuple of `left` inside the new domain that mentions `a` is preserved.
pub(crate) fn extends_hom(
    right: &Structure,
    occ_left: &Occurrences<'_>,
    fwd: &[Option<Element>],
    a: Element,
    b: Element,
    buf: &mut Vec<Element>,
) -> bool {
    if let Some(old) = fwd[a] {
        return old == b;
    }
    let image = |e: Element| if e == a { Some(b) } else { fwd[e] };
    'tuples: for &(r, t) in &occ_left.occ[a] {
        buf.clear();
        for &e in t {
            match image(e) {
                Some(x) => buf.push(x),
                None => continue 'tuples,
            }
        }
        if !right.contains(r, buf) {
            return false;
        }
    }
    true
}

/// Seeds `fwd` with the constants and `pairs`; false if the result is not a
/// partial homomorphism.
pub(crate) fn seed_hom(
    left: &Structure,
    right: &Structure,
    occ_left: &Occurrences<'_>,
    pairs: &[(Element, Element)],
    fwd: &mut [Option<Element>],
) -> bool {
    let mut buf = Vec::new();
    let constants = left.constants().iter().copied().zip(right.constants().iter().copied());
    for (a, b) in constants.chain(pairs.iter().copied()) {
        if a >= left.size() || b >= right.size() || !extends_hom(right, occ_left, fwd, a, b, &mut buf) {
            return false;
        }
        fwd[a] = Some(b);
    }
    true
}
