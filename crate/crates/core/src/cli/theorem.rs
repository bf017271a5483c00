//! k-homomorphic equivalence against agreement on homomorphisms from
//! structures of tree-depth at most k, over a set of targets.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::games::{forth_khom, forth_separator, forth_transcript, khom_equivalent, Move};
use crate::hom::{find_hom, relative_tree_depth};
use crate::locality::{classify, ByKind, EquivalenceKind};
use crate::logic::{serialize_opt_text, OracleFamily, PpOracle, Side};
use crate::structures::{Family, Structure};

/// The smallest candidate family that is exact for every target.
pub fn oracle_family(targets: &[Structure]) -> OracleFamily {
    let Some(first) = targets.first() else { return OracleFamily::All };
    let v = first.vocab();
    let binary = v.relations().iter().all(|r| r.arity == 2);
    if binary && targets.iter().all(|t| Family::SymmetricIrreflexive.contains(t)) {
        OracleFamily::SymmetricLoopless
    } else if v.relations().len() == 1 && binary && v.constant_count() == 0 {
        OracleFamily::Digraphs
    } else {
        OracleFamily::All
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    /// Game-equivalent yet separated by a candidate.
    Violation,
    /// Game-inequivalent yet no candidate within the bound separates.
    Escalation,
}

/// A pair where the game and the bounded oracle disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeCase {
    pub left: usize,
    pub right: usize,
    pub kind: CaseKind,
    /// For escalations, the direction the forth game fails in.
    pub spoiler_wins_from: Option<Side>,
    /// The spoiler's line of play in that direction.
    pub transcript: Option<Vec<Move>>,
    /// The oracle's separator for violations, the pruned strategy tree
    /// for escalations.
    #[serde(serialize_with = "serialize_opt_text")]
    pub separator: Option<Structure>,
    pub separator_size: Option<usize>,
    pub separator_tree_depth: Option<usize>,
    /// An escalation is resolved by a separator within the escalation bound
    /// and of tree-depth at most k.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeSummary {
    pub k: usize,
    pub size_bound: usize,
    pub escalation_bound: usize,
    pub family: OracleFamily,
    pub candidates: usize,
    pub targets: usize,
    /// Targets up to isomorphism; pairs range over these.
    pub distinct_targets: usize,
    pub pairs: usize,
    pub game_equivalent: usize,
    pub oracle_agree: usize,
    pub violations: usize,
    pub escalations: usize,
    pub resolved: usize,
}

impl BridgeSummary {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.resolved == self.escalations
    }
}

pub struct Bridge {
    pub summary: BridgeSummary,
    pub cases: Vec<BridgeCase>,
    pub distinct: Vec<Structure>,
}

fn valid_separator(c: &Structure, from: &Structure, to: &Structure, k: usize, bound: usize) -> Result<(bool, usize)> {
    let td = relative_tree_depth(c)?;
    let ok = c.size() <= bound && td <= k && find_hom(c, from)?.is_some() && find_hom(c, to)?.is_none();
    Ok((ok, td))
}

/// The case for one pair given the game's verdict, or `None` when the game
/// and the oracle agree.
pub fn pair_case(
    (i, a): (usize, &Structure),
    (j, b): (usize, &Structure),
    k: usize,
    game: bool,
    separated: Option<(&Structure, Side)>,
    escalation: usize,
) -> Result<Option<BridgeCase>> {
    let case = match (game, separated) {
        (true, Some((c, side))) => {
            let (from, to) = if side == Side::First { (a, b) } else { (b, a) };
            let td = relative_tree_depth(c)?;
            debug_assert!(find_hom(c, from)?.is_some() && find_hom(c, to)?.is_none());
            BridgeCase {
                left: i,
                right: j,
                kind: CaseKind::Violation,
                spoiler_wins_from: None,
                transcript: None,
                separator: Some(c.clone()),
                separator_size: Some(c.size()),
                separator_tree_depth: Some(td),
                resolved: false,
            }
        }
        (false, None) => {
            let (side, from, to) = if forth_khom(a, b, &[], k)? {
                (Side::Second, b, a)
            } else {
                (Side::First, a, b)
            };
            let transcript = forth_transcript(from, to, k)?;
            let sep = forth_separator(from, to, k)?;
            let (resolved, td) = match &sep {
                Some(c) => {
                    let (ok, td) = valid_separator(c, from, to, k, escalation)?;
                    (ok, Some(td))
                }
                None => (false, None),
            };
            BridgeCase {
                left: i,
                right: j,
                kind: CaseKind::Escalation,
                spoiler_wins_from: Some(side),
                transcript,
                separator_size: sep.as_ref().map(Structure::size),
                separator: sep,
                separator_tree_depth: td,
                resolved,
            }
        }
        _ => return Ok(None),
    };
    Ok(Some(case))
}

/// Compares the game with the oracle on all pairs of targets, up to
/// isomorphism.
pub fn bridge(
    targets: &[Structure],
    k: usize,
    size_bound: usize,
    escalation: usize,
    family: OracleFamily,
) -> Result<Bridge> {
    let ids = classify(
        targets,
        &ByKind {
            kind: EquivalenceKind::Iso,
            family: Family::All,
        },
    )?;
    let mut distinct = Vec::new();
    for (t, &id) in targets.iter().zip(&ids) {
        if id == distinct.len() {
            distinct.push(t.clone());
        }
    }
    let mut summary = BridgeSummary {
        k,
        size_bound,
        escalation_bound: escalation,
        family,
        candidates: 0,
        targets: targets.len(),
        distinct_targets: distinct.len(),
        pairs: 0,
        game_equivalent: 0,
        oracle_agree: 0,
        violations: 0,
        escalations: 0,
        resolved: 0,
    };
    let Some(first) = distinct.first() else {
        return Ok(Bridge {
            summary,
            cases: Vec::new(),
            distinct,
        });
    };
    let oracle = PpOracle::new(first.vocab(), k, size_bound, family)?;
    summary.candidates = oracle.candidates().len();
    let profiles = distinct.par_iter().map(|t| oracle.profile(t)).collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..distinct.len()).flat_map(|i| (i + 1..distinct.len()).map(move |j| (i, j))).collect();
    let outcomes = pairs
        .par_iter()
        .map(|&(i, j)| {
            let sep = oracle.separator(&profiles[i], &profiles[j]);
            let game = khom_equivalent(&distinct[i], &distinct[j], k)?;
            let case = pair_case((i, &distinct[i]), (j, &distinct[j]), k, game, sep, escalation)?;
            Ok((game, sep.is_none(), case))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cases = Vec::new();
    for (game, agree, case) in outcomes {
        summary.pairs += 1;
        summary.game_equivalent += game as usize;
        summary.oracle_agree += agree as usize;
        if let Some(c) = case {
            match c.kind {
                CaseKind::Violation => summary.violations += 1,
                CaseKind::Escalation => {
                    summary.escalations += 1;
                    summary.resolved += c.resolved as usize;
                }
            }
            cases.push(c);
        }
    }
    Ok(Bridge {
        summary,
        cases,
        distinct,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::structures::{enumerate_iso_classes, generate, GeneratorKind, Vocabulary};

    #[test]
    fn families() {
        let k2 = generate(GeneratorKind::Clique, 2, 0.0, 0).unwrap();
        let arc = Structure::new(Arc::new(Vocabulary::graph()), 2, vec![vec![vec![0, 1]]], vec![]).unwrap();
        assert_eq!(oracle_family(std::slice::from_ref(&k2)), OracleFamily::SymmetricLoopless);
        assert_eq!(oracle_family(&[k2.clone(), arc]), OracleFamily::Digraphs);
        let rooted = k2.with_extra_constants(&[0]).unwrap();
        let looped = Structure::graph(1, &[(0, 0)]).unwrap().with_extra_constants(&[0]).unwrap();
        assert_eq!(oracle_family(&[rooted, looped]), OracleFamily::All);
    }

    #[test]
    fn small_bridge_is_clean() {
        let targets = enumerate_iso_classes(&Vocabulary::graph(), 2, Family::All).unwrap();
        for k in 1..=2 {
            let b = bridge(&targets, k, 3, 5, OracleFamily::Digraphs).unwrap();
            assert!(b.summary.holds(), "{:?}", b.summary);
            assert_eq!(b.summary.distinct_targets, 12);
            assert_eq!(b.summary.pairs, 66);
        }
    }

    #[test]
    fn escalation_finds_a_larger_separator() {
        // with candidates of one element, K2 and K3 agree, but three rounds
        // separate them
        let k2 = generate(GeneratorKind::Clique, 2, 0.0, 0).unwrap();
        let k3 = generate(GeneratorKind::Clique, 3, 0.0, 0).unwrap();
        let b = bridge(&[k2, k3], 3, 1, 7, OracleFamily::All).unwrap();
        assert_eq!(b.summary.escalations, 1);
        let c = &b.cases[0];
        assert!(c.resolved);
        assert_eq!(c.spoiler_wins_from, Some(Side::Second));
        assert_eq!(c.separator_size, Some(3));
        assert_eq!(c.transcript.as_ref().unwrap().len(), 3);
    }
}
