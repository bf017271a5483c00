//! Corpus-relative audits of k-extendability and of the implication from
//! two-sided forth equivalence to k-logical equivalence for k-extendable
//! structures.
//!
//! Reading used throughout: `A ⇄_X^m B` holds for a partial map `h` on `X`
//! when the forth game is won from `h` for `m` rounds in both directions.
//! The extension clause pairs a new `a` with the given `b`, so the
//! condition for `b` is `A ⇄_{X ∪ {a}}^{m-1} B` via `h ∪ {a ↦ b}`.

use serde::Serialize;

use super::ef::ef_transcript;
use super::forth::{khom_equivalent, Forth};
use super::{ef_equivalent, Move};
use crate::error::Result;
use crate::structures::{Element, Structure};

/// Both forth games from `pairs` (and its reverse) for `m` rounds.
fn two_sided(a: &Structure, b: &Structure, pairs: &[(Element, Element)], m: usize) -> bool {
    let mut fw = Forth::new(a, b);
    let Some(mut f) = fw.seed(pairs) else { return false };
    if !fw.wins(&mut f, m) {
        return false;
    }
    let rev: Vec<(Element, Element)> = pairs.iter().map(|&(x, y)| (y, x)).collect();
    let mut bw = Forth::new(b, a);
    let Some(mut g) = bw.seed(&rev) else { return false };
    bw.wins(&mut g, m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExtendOutcome {
    /// No failure against any candidate; `checks` counts (X, B, seed) cases
    /// where the hypothesis held.
    PassedOnCorpus { checks: usize },
    /// For the seed on `x` into candidate `candidate`, element `b` has no
    /// matching `a`.
    Counterexample {
        x: Vec<Element>,
        candidate: usize,
        seed: Vec<Element>,
        b: Element,
    },
}

impl ExtendOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ExtendOutcome::PassedOnCorpus { .. })
    }
}

/// Subsets of `0..n` with fewer than `k` elements, by size then lex order.
fn small_subsets(n: usize, k: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 1..k {
        let mut next = Vec::new();
        for s in &level {
            let start = s.last().map_or(0, |&l: &Element| l + 1);
            for e in start..n {
                let mut t = s.clone();
                t.push(e);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Audits k-extendability of `a` against each structure in `candidates`.
pub fn k_extendable(a: &Structure, k: usize, candidates: &[Structure]) -> Result<ExtendOutcome> {
    let mut checks = 0;
    for x in small_subsets(a.size(), k) {
        let m = k - x.len();
        for (ci, b) in candidates.iter().enumerate() {
            a.check_compatible(b)?;
            let nb = b.size();
            for code in 0..nb.pow(x.len() as u32) {
                let mut seed = vec![0; x.len()];
                let mut c = code;
                for slot in seed.iter_mut().rev() {
                    *slot = c % nb;
                    c /= nb;
                }
                let mut pairs: Vec<(Element, Element)> = x.iter().copied().zip(seed.iter().copied()).collect();
                if !two_sided(a, b, &pairs, m) {
                    continue;
                }
                checks += 1;
                for y in 0..nb {
                    let found = (0..a.size()).any(|e| {
                        pairs.push((e, y));
                        let ok = two_sided(a, b, &pairs, m - 1);
                        pairs.pop();
                        ok
                    });
                    if !found {
                        return Ok(ExtendOutcome::Counterexample {
                            x,
                            candidate: ci,
                            seed,
                            b: y,
                        });
                    }
                }
            }
        }
    }
    Ok(ExtendOutcome::PassedOnCorpus { checks })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Violation {
    pub left: usize,
    pub right: usize,
    pub left_extendability: ExtendOutcome,
    pub right_extendability: ExtendOutcome,
    /// A line of play won by the spoiler in the k-round game.
    pub ef_transcript: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub k: usize,
    pub n: usize,
    /// Per corpus entry: k-extendable relative to the corpus.
    pub extendable: Vec<bool>,
    /// Pairs `i <= j` where both hypotheses held.
    pub pairs_checked: usize,
    pub violations: Vec<Lemma1Violation>,
}

/// For each pair of corpus-relatively k-extendable structures that are
/// n-round forth equivalent both ways, checks k-round EF equivalence.
pub fn lemma1_audit(corpus: &[Structure], k: usize, n: usize) -> Result<Lemma1Report> {
    let outcomes = corpus
        .iter()
        .map(|a| k_extendable(a, k, corpus))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for i in 0..corpus.len() {
        for j in i..corpus.len() {
            if !outcomes[i].passed() || !outcomes[j].passed() || !khom_equivalent(&corpus[i], &corpus[j], n)? {
                continue;
            }
            pairs_checked += 1;
            if !ef_equivalent(&corpus[i], &[], &corpus[j], &[], k)? {
                violations.push(Lemma1Violation {
                    left: i,
                    right: j,
                    left_extendability: outcomes[i].clone(),
                    right_extendability: outcomes[j].clone(),
                    ef_transcript: ef_transcript(&corpus[i], &[], &corpus[j], &[], k)?.unwrap_or_default(),
                });
            }
        }
    }
    Ok(Lemma1Report {
        k,
        n,
        extendable: outcomes.iter().map(ExtendOutcome::passed).collect(),
        pairs_checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{enumerate_iso_classes, generate, Family, GeneratorKind, Vocabulary};

    fn g(kind: GeneratorKind, n: usize) -> Structure {
        generate(kind, n, 0.0, 0).unwrap()
    }

    #[test]
    fn subsets_below_k() {
        assert_eq!(small_subsets(3, 1), vec![Vec::<Element>::new()]);
        assert_eq!(small_subsets(3, 2).len(), 4);
        assert_eq!(small_subsets(3, 3).len(), 7);
    }

    #[test]
    fn self_extension_passes() {
        let c4 = g(GeneratorKind::Cycle, 4);
        assert!(k_extendable(&c4, 2, std::slice::from_ref(&c4)).unwrap().passed());
    }

    #[test]
    fn some_small_pair_fails_extension() {
        // exhaustive search over graphs up to size 3 for a failing pair
        let v = Vocabulary::graph();
        let all = enumerate_iso_classes(&v, 3, Family::All).unwrap();
        let mut found = None;
        'outer: for a in &all {
            for b in &all {
                if let ExtendOutcome::Counterexample { x, b: y, .. } =
                    k_extendable(a, 2, std::slice::from_ref(b)).unwrap()
                {
                    found = Some((a.clone(), b.clone(), x, y));
                    break 'outer;
                }
            }
        }
        let (a, b, x, y) = found.expect("a failing pair exists at size 3");
        assert!(x.len() < 2);
        assert!(y < b.size());
        assert!(a.size() <= 3);
    }

    #[test]
    fn lemma1_on_cliques() {
        let corpus = vec![g(GeneratorKind::Clique, 2), g(GeneratorKind::Clique, 3)];
        let report = lemma1_audit(&corpus, 2, 2).unwrap();
        assert!(report.violations.is_empty());
        let same = vec![g(GeneratorKind::Cycle, 4), g(GeneratorKind::Cycle, 4).relabel(&[1, 0, 3, 2])];
        assert!(lemma1_audit(&same, 2, 2).unwrap().violations.is_empty());
    }
}
