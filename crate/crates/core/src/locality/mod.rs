//! Locality of queries relative to a finite corpus: d-equivalence by
//! bijections, Gaifman and Hanf locality ranks under several notions of
//! neighborhood equivalence, and the Hom-isomorphism variants built on
//! local objects for the weak equivalences.

mod corpus;
mod elocal;
mod matching;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{ef_equivalent, khom_equivalent};
use crate::hom::{k_core_search_in, KCoreOutcome};
use crate::logic::Query;
use crate::structures::{is_isomorphic, neighborhood, Element, Family, Structure};

pub use corpus::{Corpus, CorpusEntry};
pub use elocal::{e_local_objects, homiso_gaifman_rank, homiso_hanf_rank, precomposition_bijective};
pub use matching::perfect_matching;

/// How two neighborhoods are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivalenceKind {
    Iso,
    /// Forth games won both ways for k rounds.
    #[serde(rename = "khom")]
    KHom { k: usize },
    /// The k-round back-and-forth game.
    #[serde(rename = "fo")]
    FO { k: usize },
    /// Isomorphic k-cores, each found among structures of at most
    /// `size_bound` elements.
    #[serde(rename = "coreiso")]
    CoreIso { k: usize, size_bound: usize },
}

impl fmt::Display for EquivalenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceKind::Iso => write!(f, "iso"),
            EquivalenceKind::KHom { k } => write!(f, "khom:{k}"),
            EquivalenceKind::FO { k } => write!(f, "fo:{k}"),
            EquivalenceKind::CoreIso { k, size_bound } => write!(f, "coreiso:{k}:{size_bound}"),
        }
    }
}

impl FromStr for EquivalenceKind {
    type Err = Error;

    /// Parses the form written by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("equivalence kind `{s}`")))
        };
        let kind = match parts[0] {
            "iso" if parts.len() == 1 => EquivalenceKind::Iso,
            "khom" if parts.len() == 2 => EquivalenceKind::KHom { k: num(1)? },
            "fo" if parts.len() == 2 => EquivalenceKind::FO { k: num(1)? },
            "coreiso" if parts.len() == 3 => EquivalenceKind::CoreIso {
                k: num(1)?,
                size_bound: num(2)?,
            },
            _ => return Err(Error::InvalidArgument(format!("equivalence kind `{s}`"))),
        };
        Ok(kind)
    }
}

/// A comparison of neighborhoods, already built as σ_n-structures.
pub(crate) trait NeighborhoodRelation: Sync {
    fn related(&self, n: &Structure, m: &Structure) -> Result<bool>;
}

pub(crate) struct ByKind {
    pub kind: EquivalenceKind,
    /// Candidate family for k-core searches.
    pub family: Family,
}

fn k_core_of(n: &Structure, k: usize, size_bound: usize, family: Family) -> Result<Structure> {
    match k_core_search_in(n, k, size_bound, family)? {
        KCoreOutcome::Found { structure } => Ok(structure),
        KCoreOutcome::NotFoundWithinBound { size_bound } => Err(Error::Inconclusive(format!(
            "no {k}-core with at most {size_bound} elements"
        ))),
    }
}

impl NeighborhoodRelation for ByKind {
    fn related(&self, n: &Structure, m: &Structure) -> Result<bool> {
        match self.kind {
            EquivalenceKind::Iso => Ok(is_isomorphic(n, m)?.is_some()),
            EquivalenceKind::KHom { k } => khom_equivalent(n, m, k),
            EquivalenceKind::FO { k } => ef_equivalent(n, &[], m, &[], k),
            EquivalenceKind::CoreIso { k, size_bound } => {
                let a = k_core_of(n, k, size_bound, self.family)?;
                let b = k_core_of(m, k, size_bound, self.family)?;
                Ok(is_isomorphic(&a, &b)?.is_some())
            }
        }
    }
}

fn check_pair(a: &Structure, abar: &[Element], b: &Structure, bbar: &[Element]) -> Result<()> {
    a.check_compatible(b)?;
    if abar.len() != bbar.len() {
        return Err(Error::TupleLengthMismatch {
            left: abar.len(),
            right: bbar.len(),
        });
    }
    Ok(())
}

/// Whether the d-neighborhoods of `abar` in `a` and `bbar` in `b` are
/// equivalent under `kind`. An inconclusive k-core search is an error.
pub fn neighborhoods_equivalent(
    a: &Structure,
    abar: &[Element],
    b: &Structure,
    bbar: &[Element],
    d: usize,
    kind: EquivalenceKind,
) -> Result<bool> {
    check_pair(a, abar, b, bbar)?;
    let n = neighborhood(a, abar, d)?.structure;
    let m = neighborhood(b, bbar, d)?.structure;
    ByKind {
        kind,
        family: Family::All,
    }
    .related(&n, &m)
}

pub(crate) fn extended(t: &[Element], c: Element) -> Vec<Element> {
    let mut v = t.to_vec();
    v.push(c);
    v
}

/// The d-neighborhoods of `tuple + c` for every element `c`.
fn element_neighborhoods(s: &Structure, tuple: &[Element], d: usize) -> Result<Vec<Structure>> {
    (0..s.size())
        .map(|c| Ok(neighborhood(s, &extended(tuple, c), d)?.structure))
        .collect()
}

fn d_equivalent_with(
    rel: &dyn NeighborhoodRelation,
    a: &Structure,
    abar: &[Element],
    b: &Structure,
    bbar: &[Element],
    d: usize,
) -> Result<Option<Vec<Element>>> {
    check_pair(a, abar, b, bbar)?;
    if a.size() != b.size() {
        return Ok(None);
    }
    let left = element_neighborhoods(a, abar, d)?;
    let right = element_neighborhoods(b, bbar, d)?;
    let mut compat = vec![vec![false; b.size()]; a.size()];
    for (c, n) in left.iter().enumerate() {
        for (c2, m) in right.iter().enumerate() {
            compat[c][c2] = rel.related(n, m)?;
        }
    }
    Ok(perfect_matching(&compat))
}

/// A bijection `f` from `a` to `b` with the d-neighborhoods of `abar c` and
/// `bbar f(c)` equivalent under `kind` for every `c`, if one exists.
pub fn d_equivalent(
    a: &Structure,
    abar: &[Element],
    b: &Structure,
    bbar: &[Element],
    d: usize,
    kind: EquivalenceKind,
) -> Result<Option<Vec<Element>>> {
    let rel = ByKind {
        kind,
        family: Family::All,
    };
    d_equivalent_with(&rel, a, abar, b, bbar, d)
}

/// One side of a locality counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub entry: usize,
    pub tuple: Vec<Element>,
    pub answer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub left: Instance,
    pub right: Instance,
    /// For Hanf ranks, the bijection witnessing d-equivalence.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bijection: Option<Vec<Element>>,
}

/// Checks at one radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub d: usize,
    /// Pairs satisfying the hypothesis but answering differently.
    pub violations: usize,
    /// Whether any pair of distinct instances satisfied the hypothesis.
    pub hypothesis_held: bool,
    /// The first [`MAX_WITNESSES`] violations.
    pub counterexamples: Vec<Counterexample>,
    /// For the Hom-isomorphism variants: the object pool searched.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool: Option<PoolSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolSummary {
    /// Distinct neighborhoods and their cores, up to isomorphism.
    pub objects: usize,
    /// How many of them are local for the weak equivalences of the pool.
    pub local: usize,
}

/// Builds the relation used at a radius, with the pool it was drawn from.
pub(crate) type RelationAt<'a> = dyn Fn(usize) -> Result<(Box<dyn NeighborhoodRelation>, Option<PoolSummary>)> + 'a;

pub const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub equivalence: String,
    pub d_max: usize,
    /// Least clean radius up to `d_max`, relative to the corpus.
    pub rank: Option<usize>,
    /// True when the rank holds only because no pair met the hypothesis.
    pub vacuous: bool,
    pub levels: Vec<Level>,
}

impl LocalityReport {
    fn from_levels(equivalence: String, d_max: usize, levels: Vec<Level>) -> Self {
        let clean = levels.iter().find(|l| l.violations == 0);
        LocalityReport {
            equivalence,
            d_max,
            rank: clean.map(|l| l.d),
            vacuous: clean.is_some_and(|l| !l.hypothesis_held),
            levels,
        }
    }
}

/// Class ids under an equivalence relation, comparing against the first
/// member of each class.
pub(crate) fn classify(items: &[Structure], rel: &dyn NeighborhoodRelation) -> Result<Vec<usize>> {
    let mut reps: Vec<usize> = Vec::new();
    let mut ids = Vec::with_capacity(items.len());
    for (i, s) in items.iter().enumerate() {
        let mut id = None;
        for (c, &r) in reps.iter().enumerate() {
            if rel.related(&items[r], s)? {
                id = Some(c);
                break;
            }
        }
        ids.push(id.unwrap_or_else(|| {
            reps.push(i);
            reps.len() - 1
        }));
    }
    Ok(ids)
}

pub(crate) fn all_tuples(n: usize, m: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t| (0..n).map(move |e| extended(&t, e)))
            .collect();
    }
    out
}

struct EntryLevel {
    violations: usize,
    held: bool,
    witnesses: Vec<Counterexample>,
}

/// Within one structure: pairs of m-tuples in one class that disagree on
/// `q`. Each witness pairs a class's first member with a disagreeing one.
fn gaifman_entry(entry: usize, s: &Structure, q: &Query, d: usize, rel: &dyn NeighborhoodRelation) -> Result<EntryLevel> {
    let tuples = all_tuples(s.size(), q.arity());
    let answers = tuples.iter().map(|t| q.holds(s, t)).collect::<Result<Vec<_>>>()?;
    let nbhds = tuples
        .iter()
        .map(|t| Ok(neighborhood(s, t, d)?.structure))
        .collect::<Result<Vec<_>>>()?;
    let ids = classify(&nbhds, rel)?;
    let classes = ids.iter().max().map_or(0, |m| m + 1);
    let mut out = EntryLevel {
        violations: 0,
        held: false,
        witnesses: Vec::new(),
    };
    for c in 0..classes {
        let members: Vec<usize> = (0..tuples.len()).filter(|&i| ids[i] == c).collect();
        out.held |= members.len() > 1;
        let yes = members.iter().filter(|&&i| answers[i]).count();
        out.violations += yes * (members.len() - yes);
        let first = members[0];
        for &i in &members[1..] {
            if answers[i] != answers[first] {
                out.witnesses.push(Counterexample {
                    left: Instance {
                        entry,
                        tuple: tuples[first].clone(),
                        answer: answers[first],
                    },
                    right: Instance {
                        entry,
                        tuple: tuples[i].clone(),
                        answer: answers[i],
                    },
                    bijection: None,
                });
            }
        }
    }
    Ok(out)
}

fn check_query(q: &Query, corpus: &Corpus) -> Result<()> {
    if let Some(e) = corpus.entries().first() {
        q.formula().check_vocabulary(e.structure.vocab())?;
    }
    Ok(())
}

pub(crate) fn gaifman_rank_with(
    q: &Query,
    corpus: &Corpus,
    d_max: usize,
    label: String,
    rel_at: &RelationAt<'_>,
) -> Result<LocalityReport> {
    if q.arity() == 0 {
        return Err(Error::InvalidArgument("Gaifman ranks need a query with free variables".into()));
    }
    check_query(q, corpus)?;
    let mut levels = Vec::new();
    for d in 0..=d_max {
        let (rel, pool) = rel_at(d)?;
        let per_entry = corpus
            .entries()
            .par_iter()
            .enumerate()
            .map(|(i, e)| gaifman_entry(i, &e.structure, q, d, rel.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let mut level = merge(d, per_entry);
        level.pool = pool;
        let clean = level.violations == 0;
        levels.push(level);
        if clean {
            break;
        }
    }
    Ok(LocalityReport::from_levels(label, d_max, levels))
}

fn merge(d: usize, parts: Vec<EntryLevel>) -> Level {
    let mut level = Level {
        d,
        violations: 0,
        hypothesis_held: false,
        counterexamples: Vec::new(),
        pool: None,
    };
    for p in parts {
        level.violations += p.violations;
        level.hypothesis_held |= p.held;
        level.counterexamples.extend(p.witnesses);
    }
    level.counterexamples.truncate(MAX_WITNESSES);
    level
}

/// The least radius d ≤ `d_max` such that, in every corpus structure, two
/// tuples with `kind`-equivalent d-neighborhoods agree on `q`. Checking
/// stops at the first clean radius.
pub fn gaifman_rank(q: &Query, corpus: &Corpus, kind: EquivalenceKind, d_max: usize) -> Result<LocalityReport> {
    gaifman_rank_with(q, corpus, d_max, kind.to_string(), &|_| {
        Ok((
            Box::new(ByKind {
                kind,
                family: Family::All,
            }),
            None,
        ))
    })
}

pub(crate) fn hanf_rank_with(
    q: &Query,
    corpus: &Corpus,
    d_max: usize,
    label: String,
    rel_at: &RelationAt<'_>,
) -> Result<LocalityReport> {
    if corpus.tuple_len().is_some_and(|m| m != q.arity()) {
        return Err(Error::TupleLengthMismatch {
            left: q.arity(),
            right: corpus.tuple_len().unwrap_or(0),
        });
    }
    check_query(q, corpus)?;
    let entries = corpus.entries();
    let answers = entries
        .iter()
        .map(|e| q.holds(&e.structure, &e.tuple))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..entries.len())
        .flat_map(|i| (i + 1..entries.len()).map(move |j| (i, j)))
        .collect();
    let (disagree, agree): (Vec<_>, Vec<_>) = pairs.into_iter().partition(|&(i, j)| answers[i] != answers[j]);
    let mut levels = Vec::new();
    for d in 0..=d_max {
        let (rel, pool) = rel_at(d)?;
        let equiv = |&(i, j): &(usize, usize)| {
            let (a, b) = (&entries[i], &entries[j]);
            d_equivalent_with(rel.as_ref(), &a.structure, &a.tuple, &b.structure, &b.tuple, d)
        };
        let found = disagree
            .par_iter()
            .map(|p| Ok(equiv(p)?.map(|f| (*p, f))))
            .collect::<Result<Vec<_>>>()?;
        let found: Vec<_> = found.into_iter().flatten().collect();
        let mut held = !found.is_empty();
        if !held {
            for p in &agree {
                if equiv(p)?.is_some() {
                    held = true;
                    break;
                }
            }
        }
        let instance = |i: usize| Instance {
            entry: i,
            tuple: entries[i].tuple.clone(),
            answer: answers[i],
        };
        let level = Level {
            d,
            violations: found.len(),
            hypothesis_held: held,
            counterexamples: found
                .into_iter()
                .take(MAX_WITNESSES)
                .map(|((i, j), f)| Counterexample {
                    left: instance(i),
                    right: instance(j),
                    bijection: Some(f),
                })
                .collect(),
            pool,
        };
        let clean = level.violations == 0;
        levels.push(level);
        if clean {
            break;
        }
    }
    Ok(LocalityReport::from_levels(label, d_max, levels))
}

/// The least radius d ≤ `d_max` such that any two corpus entries related by
/// a d-equivalence bijection under `kind` agree on `q`.
pub fn hanf_rank(q: &Query, corpus: &Corpus, kind: EquivalenceKind, d_max: usize) -> Result<LocalityReport> {
    hanf_rank_with(q, corpus, d_max, kind.to_string(), &|_| {
        Ok((
            Box::new(ByKind {
                kind,
                family: Family::All,
            }),
            None,
        ))
    })
}

/// Re-runs the hypothesis and the query on a reported Gaifman or Hanf
/// counterexample; true if the violation is reproduced.
pub fn replay_counterexample(
    q: &Query,
    corpus: &Corpus,
    kind: EquivalenceKind,
    d: usize,
    hanf: bool,
    cx: &Counterexample,
) -> Result<bool> {
    let get = |i: &Instance| {
        corpus
            .entries()
            .get(i.entry)
            .map(|e| &e.structure)
            .ok_or_else(|| Error::InvalidArgument(format!("corpus has no entry {}", i.entry)))
    };
    let (a, b) = (get(&cx.left)?, get(&cx.right)?);
    let (l, r) = (q.holds(a, &cx.left.tuple)?, q.holds(b, &cx.right.tuple)?);
    if l == r || l != cx.left.answer || r != cx.right.answer {
        return Ok(false);
    }
    if !hanf {
        return neighborhoods_equivalent(a, &cx.left.tuple, b, &cx.right.tuple, d, kind);
    }
    let Some(f) = &cx.bijection else { return Ok(false) };
    if f.len() != a.size() {
        return Ok(false);
    }
    for (c, &fc) in f.iter().enumerate() {
        if fc >= b.size()
            || !neighborhoods_equivalent(a, &extended(&cx.left.tuple, c), b, &extended(&cx.right.tuple, fc), d, kind)?
        {
            return Ok(false);
        }
    }
    let mut seen = f.clone();
    seen.sort_unstable();
    seen.dedup();
    Ok(seen.len() == f.len())
}

/// One neighborhood pair checked against the k-core biconditional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    /// The two neighborhoods are k-homomorphically equivalent.
    pub lhs: bool,
    /// Both neighborhoods are k-equivalent to the k-core of the first.
    pub common_k_core: Option<bool>,
    pub k_cores_isomorphic: Option<bool>,
    /// Whether `lhs` matches the conjunction of the two legs; absent when a
    /// k-core search was inconclusive.
    pub holds: Option<bool>,
    #[serde(serialize_with = "crate::logic::serialize_opt_text")]
    pub left_k_core: Option<Structure>,
    #[serde(serialize_with = "crate::logic::serialize_opt_text")]
    pub right_k_core: Option<Structure>,
}

impl DiagramReport {
    pub fn inconclusive(&self) -> bool {
        self.holds.is_none()
    }
}

/// Compares k-homomorphic equivalence of two d-neighborhoods with the
/// route through their k-cores.
pub fn diagram_check(
    a: &Structure,
    abar: &[Element],
    b: &Structure,
    bbar: &[Element],
    d: usize,
    k: usize,
    size_bound: usize,
) -> Result<DiagramReport> {
    diagram_check_in(a, abar, b, bbar, d, k, size_bound, Family::All)
}

/// As [`diagram_check`], drawing k-core candidates from `family`.
#[allow(clippy::too_many_arguments)]
pub fn diagram_check_in(
    a: &Structure,
    abar: &[Element],
    b: &Structure,
    bbar: &[Element],
    d: usize,
    k: usize,
    size_bound: usize,
    family: Family,
) -> Result<DiagramReport> {
    check_pair(a, abar, b, bbar)?;
    let n = neighborhood(a, abar, d)?.structure;
    let m = neighborhood(b, bbar, d)?.structure;
    diagram_on(&n, &m, k, size_bound, family)
}

pub(crate) fn diagram_on(n: &Structure, m: &Structure, k: usize, size_bound: usize, family: Family) -> Result<DiagramReport> {
    let lhs = khom_equivalent(n, m, k)?;
    let xn = k_core_search_in(n, k, size_bound, family)?.found().cloned();
    let xm = k_core_search_in(m, k, size_bound, family)?.found().cloned();
    let (common, iso) = match (&xn, &xm) {
        (Some(x), Some(y)) => (
            Some(khom_equivalent(n, x, k)? && khom_equivalent(m, x, k)?),
            Some(is_isomorphic(x, y)?.is_some()),
        ),
        _ => (None, None),
    };
    let holds = common.zip(iso).map(|(c, i)| lhs == (c && i));
    Ok(DiagramReport {
        lhs,
        common_k_core: common,
        k_cores_isomorphic: iso,
        holds,
        left_k_core: xn,
        right_k_core: xm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_query;
    use crate::structures::{generate, GeneratorKind, Vocabulary};

    fn g(kind: GeneratorKind, n: usize) -> Structure {
        generate(kind, n, 0.0, 0).unwrap()
    }

    fn q(text: &str) -> Query {
        parse_query(text, &Vocabulary::graph()).unwrap()
    }

    #[test]
    fn kinds_parse_and_print() {
        for k in [
            EquivalenceKind::Iso,
            EquivalenceKind::KHom { k: 2 },
            EquivalenceKind::FO { k: 3 },
            EquivalenceKind::CoreIso { k: 1, size_bound: 4 },
        ] {
            assert_eq!(k.to_string().parse::<EquivalenceKind>().unwrap(), k);
        }
        assert!("khom".parse::<EquivalenceKind>().is_err());
        assert!("iso:1".parse::<EquivalenceKind>().is_err());
    }

    #[test]
    fn neighborhood_examples() {
        let c4 = g(GeneratorKind::Cycle, 4);
        let k2 = g(GeneratorKind::Clique, 2);
        let k3 = g(GeneratorKind::Clique, 3);
        assert!(neighborhoods_equivalent(&c4, &[], &k2, &[], 5, EquivalenceKind::KHom { k: 2 }).unwrap());
        assert!(!neighborhoods_equivalent(&c4, &[], &k2, &[], 5, EquivalenceKind::Iso).unwrap());
        // the anchor and two picks already form a triangle
        assert!(neighborhoods_equivalent(&k2, &[0], &k3, &[0], 1, EquivalenceKind::FO { k: 1 }).unwrap());
        assert!(!neighborhoods_equivalent(&k2, &[0], &k3, &[0], 1, EquivalenceKind::FO { k: 2 }).unwrap());
        assert!(neighborhoods_equivalent(&k2, &[], &k3, &[], 1, EquivalenceKind::FO { k: 2 }).unwrap());
        assert!(neighborhoods_equivalent(&k2, &[0], &k3, &[], 1, EquivalenceKind::Iso).is_err());
        let coreiso = EquivalenceKind::CoreIso { k: 2, size_bound: 4 };
        assert!(neighborhoods_equivalent(&c4, &[], &k2, &[], 5, coreiso).unwrap());
        let tiny = EquivalenceKind::CoreIso { k: 3, size_bound: 2 };
        assert!(matches!(
            neighborhoods_equivalent(&k3, &[], &k3, &[], 1, tiny),
            Err(Error::Inconclusive(_))
        ));
    }

    #[test]
    fn d_equivalence_basics() {
        let p4 = g(GeneratorKind::Path, 4);
        let f = d_equivalent(&p4, &[1], &p4, &[1], 1, EquivalenceKind::Iso).unwrap().unwrap();
        assert_eq!(f.len(), 4);
        assert!(d_equivalent(&p4, &[], &g(GeneratorKind::Path, 3), &[], 1, EquivalenceKind::Iso)
            .unwrap()
            .is_none());
        // the end and the inner vertex of P4 differ at radius 1
        assert!(d_equivalent(&p4, &[0], &p4, &[1], 1, EquivalenceKind::Iso).unwrap().is_none());
        assert!(d_equivalent(&p4, &[0], &p4, &[3], 3, EquivalenceKind::Iso).unwrap().is_some());
    }

    #[test]
    fn edge_query_is_local_at_zero() {
        let corpus = Corpus::from_structures(vec![
            g(GeneratorKind::Path, 4),
            g(GeneratorKind::Cycle, 4),
            g(GeneratorKind::Clique, 3),
        ])
        .unwrap();
        let r = gaifman_rank(&q("free x y\n(E x y)"), &corpus, EquivalenceKind::Iso, 2).unwrap();
        assert_eq!(r.rank, Some(0));
        assert!(r.levels[0].hypothesis_held);
        let t = gaifman_rank(&q("free x\n(= x x)"), &corpus, EquivalenceKind::KHom { k: 1 }, 2).unwrap();
        assert_eq!(t.rank, Some(0));
        assert!(gaifman_rank(&q("(exists x (E x x))"), &corpus, EquivalenceKind::Iso, 1).is_err());
    }

    #[test]
    fn reachability_needs_radius() {
        // x and y at distance 2 in P5 versus distance 3 in P5
        let p5 = g(GeneratorKind::Path, 5);
        let corpus = Corpus::from_structures(vec![p5]).unwrap();
        let two = q("free x y\n(exists z (and (E x z) (E z y)))");
        let r = gaifman_rank(&two, &corpus, EquivalenceKind::Iso, 3).unwrap();
        let rank = r.rank.unwrap();
        assert!(rank >= 1);
        for level in &r.levels[..rank] {
            assert!(level.violations > 0);
            for cx in &level.counterexamples {
                assert!(replay_counterexample(&two, &corpus, EquivalenceKind::Iso, level.d, false, cx).unwrap());
            }
        }
    }

    #[test]
    fn hanf_examples() {
        let k2 = g(GeneratorKind::Clique, 2);
        let k3 = g(GeneratorKind::Clique, 3);
        let triangle = q("(exists x (exists y (exists z (and (E x y) (E y z) (E x z) (not (= x y)) (not (= y z)) (not (= x z))))))");
        let one = Corpus::from_structures(vec![k3.clone()]).unwrap();
        assert_eq!(hanf_rank(&triangle, &one, EquivalenceKind::Iso, 1).unwrap().rank, Some(0));
        let both = Corpus::from_structures(vec![k2, k3]).unwrap();
        let r = hanf_rank(&triangle, &both, EquivalenceKind::Iso, 1).unwrap();
        assert_eq!(r.rank, Some(0));
        assert!(r.vacuous);
        // C6 and two triangles: locally identical, globally distinct
        let c6 = g(GeneratorKind::Cycle, 6);
        let mut edges = Vec::new();
        for base in [0, 3] {
            for (x, y) in [(0, 1), (1, 2), (2, 0)] {
                edges.push((base + x, base + y));
                edges.push((base + y, base + x));
            }
        }
        let tt = Structure::graph(6, &edges).unwrap();
        let corpus = Corpus::from_structures(vec![c6, tt]).unwrap();
        let r = hanf_rank(&triangle, &corpus, EquivalenceKind::Iso, 2).unwrap();
        assert_eq!(r.rank, Some(1));
        let cx = &r.levels[0].counterexamples[0];
        assert!(cx.bijection.is_some());
        assert!(replay_counterexample(&triangle, &corpus, EquivalenceKind::Iso, 0, true, cx).unwrap());
        assert!(!replay_counterexample(&triangle, &corpus, EquivalenceKind::Iso, 1, true, cx).unwrap());
    }

    #[test]
    fn diagram_examples() {
        let c4 = g(GeneratorKind::Cycle, 4);
        let k2 = g(GeneratorKind::Clique, 2);
        let k3 = g(GeneratorKind::Clique, 3);
        let same = diagram_check(&c4, &[0], &c4, &[0], 1, 2, 4).unwrap();
        assert_eq!(
            (same.lhs, same.common_k_core, same.k_cores_isomorphic, same.holds),
            (true, Some(true), Some(true), Some(true))
        );
        let r = diagram_check(&c4, &[], &k2, &[], 2, 2, 4).unwrap();
        assert!(r.lhs && r.holds == Some(true));
        assert!(is_isomorphic(r.left_k_core.as_ref().unwrap(), &k2).unwrap().is_some());
        let r = diagram_check(&k2, &[], &k3, &[], 1, 3, 3).unwrap();
        assert_eq!((r.lhs, r.k_cores_isomorphic, r.holds), (false, Some(false), Some(true)));
        let r = diagram_check(&k3, &[], &k3, &[], 1, 3, 2).unwrap();
        assert!(r.inconclusive());
    }
}
