//! Checks as data: an op name plus JSON inputs that embed every structure
//! as text, so a check can be re-evaluated from a report alone.

use serde::Serialize;
use serde_json::{json, Value};

use super::config::RunConfig;
use super::report::{Check, Verdict};
use super::theorem::{bridge, pair_case, BridgeCase};
use crate::error::{Error, Result};
use crate::games::{
    ef_equivalent, ef_transcript, forth_khom, forth_separator, forth_transcript, k_extendable, khom_equivalent,
    lemma1_audit,
};
use crate::hom::{
    core_with_retraction, elimination_forest, enumerate_homs, find_hom, is_core, relative_tree_depth, tree_depth,
    Homomorphism, KCoreOutcome,
};
use crate::homotopy::{ho_quotient, make_pointed};
use crate::locality::{
    d_equivalent, diagram_check_in, e_local_objects, gaifman_rank, hanf_rank, homiso_gaifman_rank, homiso_hanf_rank,
    neighborhoods_equivalent, replay_counterexample, Corpus, CorpusEntry, Counterexample,
    EquivalenceKind, LocalityReport,
};
use crate::logic::{parse_query, pp_sentence_of_structure, OracleFamily, PpOracle, PpVerdict, Query};
use crate::structures::{
    canonical_form_bounded, gaifman_graph, is_isomorphic, neighborhood, parse_structure, serialize_structure, Element, Family,
    Structure,
};

pub struct Outcome {
    pub verdict: Verdict,
    pub result: Value,
    pub followups: Vec<Check>,
}

impl Outcome {
    fn new(verdict: Verdict, result: Value) -> Self {
        Outcome {
            verdict,
            result,
            followups: Vec::new(),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn text(s: &Structure) -> Value {
    Value::String(serialize_structure(s))
}

pub fn corpus_value(c: &Corpus) -> Value {
    to_value(&c.entries())
}

fn checked(ok: bool) -> Verdict {
    if ok {
        Verdict::Computed
    } else {
        Verdict::Violated
    }
}

struct Inputs<'a>(&'a Value);

impl<'a> Inputs<'a> {
    fn get(&self, key: &str) -> Result<&'a Value> {
        self.0
            .get(key)
            .filter(|v| !v.is_null())
            .ok_or_else(|| Error::InvalidArgument(format!("missing input `{key}`")))
    }

    fn bad(key: &str) -> Error {
        Error::InvalidArgument(format!("malformed input `{key}`"))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.get(key)?.as_str().ok_or_else(|| Self::bad(key))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        self.get(key)?.as_u64().map(|n| n as usize).ok_or_else(|| Self::bad(key))
    }

    fn flag(&self, key: &str) -> bool {
        self.0.get(key).and_then(Value::as_bool).unwrap_or(false)
    }

    fn structure(&self, key: &str) -> Result<Structure> {
        parse_structure(self.str(key)?)
    }

    fn elements(v: &Value, key: &str) -> Result<Vec<Element>> {
        v.as_array()
            .ok_or_else(|| Self::bad(key))?
            .iter()
            .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| Self::bad(key)))
            .collect()
    }

    /// An element list; absent means empty.
    fn tuple(&self, key: &str) -> Result<Vec<Element>> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(Vec::new()),
            Some(v) => Self::elements(v, key),
        }
    }

    fn hom(&self, key: &str) -> Result<Homomorphism> {
        Ok(Homomorphism::new(Self::elements(self.get(key)?, key)?))
    }

    fn structures(&self, key: &str) -> Result<Vec<Structure>> {
        self.get(key)?
            .as_array()
            .ok_or_else(|| Self::bad(key))?
            .iter()
            .map(|v| parse_structure(v.as_str().ok_or_else(|| Self::bad(key))?))
            .collect()
    }

    fn corpus(&self, key: &str) -> Result<Corpus> {
        let entries = self
            .get(key)?
            .as_array()
            .ok_or_else(|| Self::bad(key))?
            .iter()
            .map(|e| {
                let e = Inputs(e);
                Ok(CorpusEntry {
                    structure: e.structure("structure")?,
                    tuple: e.tuple("tuple")?,
                    provenance: e.str("provenance").unwrap_or_default().to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Corpus::new(entries)
    }

    fn kind(&self, key: &str) -> Result<EquivalenceKind> {
        self.str(key)?.parse()
    }

    fn query(&self, key: &str, corpus: &Corpus) -> Result<Query> {
        let vocab = corpus
            .entries()
            .first()
            .map(|e| e.structure.vocab().clone())
            .ok_or_else(|| Error::InvalidArgument("empty corpus".into()))?;
        parse_query(self.str(key)?, &vocab)
    }

    fn pairs(&self, key: &str) -> Result<Vec<(Element, Element)>> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(Vec::new()),
            Some(v) => serde_json::from_value(v.clone()).map_err(|_| Self::bad(key)),
        }
    }

    fn family(&self, key: &str) -> Result<OracleFamily> {
        serde_json::from_value(self.get(key)?.clone()).map_err(|_| Self::bad(key))
    }
}

/// Evaluates one check.
pub fn evaluate(op: &str, inputs: &Value, cfg: &RunConfig) -> Result<Outcome> {
    let i = Inputs(inputs);
    let b = &cfg.bounds;
    match op {
        "gaifman" => {
            let s = i.structure("structure")?;
            let g = gaifman_graph(&s);
            Ok(Outcome::new(
                Verdict::Computed,
                json!({"edges": g.edges(), "components": g.components(), "connected": g.is_connected()}),
            ))
        }
        "nbhd" => {
            let s = i.structure("structure")?;
            let n = neighborhood(&s, &i.tuple("tuple")?, i.usize("d")?)?;
            let (sub, _) = s.induced(&n.embedding)?;
            let ok = sub.relations() == n.structure.relations();
            Ok(Outcome::new(
                checked(ok),
                json!({"neighborhood": text(&n.structure), "embedding": n.embedding}),
            ))
        }
        "iso" => {
            let (l, r) = (i.structure("left")?, i.structure("right")?);
            let iso = is_isomorphic(&l, &r)?;
            let verified = iso.as_ref().is_none_or(|f| f.verify(&l, &r));
            let canon = match (canonical_form_bounded(&l, b.canon), canonical_form_bounded(&r, b.canon)) {
                (Ok(x), Ok(y)) => Some(x == y),
                (Err(e), _) | (_, Err(e)) if e.is_bound_related() => None,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            let ok = verified && canon.is_none_or(|c| c == iso.is_some());
            Ok(Outcome::new(
                checked(ok),
                json!({"isomorphic": iso.is_some(), "map": iso.map(|f| f.map), "canonical_forms_equal": canon}),
            ))
        }
        "hom" => {
            let (l, r) = (i.structure("left")?, i.structure("right")?);
            if i.flag("all") {
                let set = enumerate_homs(&l, &r, b.homs)?;
                let ok = set.homs.iter().all(|h| h.verify(&l, &r).is_ok());
                let verdict = if !ok {
                    Verdict::Violated
                } else if set.truncated {
                    Verdict::Inconclusive
                } else {
                    Verdict::Computed
                };
                let maps: Vec<&Vec<Element>> = set.homs.iter().map(|h| &h.map).collect();
                Ok(Outcome::new(
                    verdict,
                    json!({"count": set.homs.len(), "truncated": set.truncated, "homs": maps}),
                ))
            } else {
                let h = find_hom(&l, &r)?;
                let ok = h.as_ref().is_none_or(|h| h.verify(&l, &r).is_ok());
                Ok(Outcome::new(checked(ok), json!({"exists": h.is_some(), "map": h.map(|h| h.map)})))
            }
        }
        "core" => {
            let s = i.structure("structure")?;
            let c = core_with_retraction(&s);
            let identity_on_core = c.embedding.iter().enumerate().all(|(x, &e)| c.retraction.map[e] == x);
            let ok = c.retraction.verify(&s, &c.structure).is_ok()
                && Homomorphism::new(c.embedding.clone()).verify(&c.structure, &s).is_ok()
                && identity_on_core
                && is_core(&c.structure);
            Ok(Outcome::new(
                checked(ok),
                json!({
                    "core": text(&c.structure),
                    "size": c.structure.size(),
                    "input_is_core": c.structure.size() == s.size(),
                    "embedding": c.embedding,
                    "retraction": c.retraction.map,
                }),
            ))
        }
        "treedepth" => {
            let s = i.structure("structure")?;
            let td = tree_depth(&s)?;
            let g = gaifman_graph(&s);
            let forest = elimination_forest(&g)?;
            let ancestor = |mut x: Element, y: Element| {
                while let Some(p) = forest[x] {
                    if p == y {
                        return true;
                    }
                    x = p;
                }
                false
            };
            let height = (0..s.size())
                .map(|mut x| {
                    let mut h = 1;
                    while let Some(p) = forest[x] {
                        h += 1;
                        x = p;
                    }
                    h
                })
                .max()
                .unwrap_or(0);
            let ok = height == td && g.edges().iter().all(|&(x, y)| ancestor(x, y) || ancestor(y, x));
            Ok(Outcome::new(
                checked(ok),
                json!({
                    "tree_depth": td,
                    "relative_tree_depth": relative_tree_depth(&s)?,
                    "elimination_forest": forest,
                }),
            ))
        }
        "kcore" => {
            let s = i.structure("structure")?;
            let (k, bound) = (i.usize("k")?, i.usize("size_bound")?);
            b.check_k(k)?;
            match crate::hom::k_core_search(&s, k, bound)? {
                KCoreOutcome::Found { structure: c } => {
                    let ok = is_core(&c) && relative_tree_depth(&c)? <= k && khom_equivalent(&c, &s, k)?;
                    Ok(Outcome::new(checked(ok), json!({"k_core": text(&c), "size": c.size()})))
                }
                out @ KCoreOutcome::NotFoundWithinBound { .. } => Ok(Outcome::new(Verdict::Inconclusive, to_value(&out))),
            }
        }
        "efgame" => {
            let (l, r) = (i.structure("left")?, i.structure("right")?);
            let (lt, rt, k) = (i.tuple("left_tuple")?, i.tuple("right_tuple")?, i.usize("k")?);
            b.check_k(k)?;
            let eq = ef_equivalent(&l, &lt, &r, &rt, k)?;
            let transcript = ef_transcript(&l, &lt, &r, &rt, k)?;
            Ok(Outcome::new(
                checked(eq == transcript.is_none()),
                json!({"equivalent": eq, "spoiler_line": transcript}),
            ))
        }
        "forth" => {
            let (l, r, k) = (i.structure("left")?, i.structure("right")?, i.usize("k")?);
            b.check_k(k)?;
            let pairs = i.pairs("pairs")?;
            let wins = forth_khom(&l, &r, &pairs, k)?;
            let mut result = json!({"duplicator_wins": wins});
            let mut ok = true;
            if pairs.is_empty() {
                let transcript = forth_transcript(&l, &r, k)?;
                let sep = forth_separator(&l, &r, k)?;
                if let Some(c) = &sep {
                    ok = relative_tree_depth(c)? <= k && find_hom(c, &l)?.is_some() && find_hom(c, &r)?.is_none();
                }
                ok &= sep.is_some() != wins && transcript.is_some() != wins;
                result["spoiler_line"] = to_value(&transcript);
                result["separator"] = sep.as_ref().map_or(Value::Null, text);
            }
            Ok(Outcome::new(checked(ok), result))
        }
        "khom-equiv" => {
            let (l, r, k) = (i.structure("left")?, i.structure("right")?, i.usize("k")?);
            b.check_k(k)?;
            let (f, g) = (forth_khom(&l, &r, &[], k)?, forth_khom(&r, &l, &[], k)?);
            Ok(Outcome::new(
                Verdict::Computed,
                json!({"forward": f, "backward": g, "equivalent": f && g}),
            ))
        }
        "pp-oracle" => {
            let (l, r) = (i.structure("left")?, i.structure("right")?);
            let (k, bound) = (i.usize("k")?, i.usize("size_bound")?);
            b.check_k(k)?;
            let family = i.family("family")?;
            let oracle = PpOracle::new(l.vocab(), k, bound, family)?;
            let (p, q) = (oracle.profile(&l)?, oracle.profile(&r)?);
            let game = khom_equivalent(&l, &r, k)?;
            let verdict = match oracle.separator(&p, &q) {
                Some((c, side)) => PpVerdict::Separated {
                    witness: c.clone(),
                    maps_into: side,
                },
                None => PpVerdict::Agree {
                    size_bound: bound,
                    candidates: oracle.candidates().len(),
                },
            };
            let sentence = match &verdict {
                PpVerdict::Separated { witness, .. } if witness.constants().is_empty() => {
                    Some(pp_sentence_of_structure(witness)?.to_string())
                }
                _ => None,
            };
            let v = match (game, verdict.agrees()) {
                (true, false) => Verdict::Violated,
                (false, true) => Verdict::Inconclusive,
                _ => Verdict::Holds,
            };
            Ok(Outcome::new(
                v,
                json!({"oracle": to_value(&verdict), "game_equivalent": game, "sentence": sentence}),
            ))
        }
        "extendable" => {
            let s = i.structure("structure")?;
            let k = i.usize("k")?;
            b.check_k(k)?;
            let out = k_extendable(&s, k, &i.structures("candidates")?)?;
            let v = if out.passed() { Verdict::Holds } else { Verdict::Violated };
            Ok(Outcome::new(v, to_value(&out)))
        }
        "lemma1" => {
            let (k, n) = (i.usize("k")?, i.usize("n")?);
            b.check_k(k)?;
            let rep = lemma1_audit(&i.structures("corpus")?, k, n)?;
            let v = if rep.violations.is_empty() { Verdict::Holds } else { Verdict::Violated };
            Ok(Outcome::new(v, to_value(&rep)))
        }
        "d-equiv" => {
            let (l, r) = (i.structure("left")?, i.structure("right")?);
            let (lt, rt, d) = (i.tuple("left_tuple")?, i.tuple("right_tuple")?, i.usize("d")?);
            let kind = i.kind("kind")?;
            let f = d_equivalent(&l, &lt, &r, &rt, d, kind)?;
            let mut ok = true;
            if let Some(f) = &f {
                for (c, &fc) in f.iter().enumerate() {
                    let (mut x, mut y) = (lt.clone(), rt.clone());
                    x.push(c);
                    y.push(fc);
                    ok &= neighborhoods_equivalent(&l, &x, &r, &y, d, kind)?;
                }
            }
            Ok(Outcome::new(checked(ok), json!({"equivalent": f.is_some(), "bijection": f})))
        }
        "gaifman-rank" | "hanf-rank" => {
            let corpus = i.corpus("corpus")?;
            let q = i.query("query", &corpus)?;
            let (kind, d_max) = (i.kind("kind")?, i.usize("d_max")?);
            let hanf = op == "hanf-rank";
            let rep = if hanf {
                hanf_rank(&q, &corpus, kind, d_max)?
            } else {
                gaifman_rank(&q, &corpus, kind, d_max)?
            };
            let followups = counterexample_checks(&rep, &corpus, &q, i.str("query")?, kind, hanf)?;
            Ok(Outcome {
                verdict: Verdict::Computed,
                result: to_value(&rep),
                followups,
            })
        }
        "locality-counterexample" => {
            let corpus = i.corpus("corpus")?;
            let q = i.query("query", &corpus)?;
            let cx: Counterexample =
                serde_json::from_value(i.get("counterexample")?.clone()).map_err(|_| Inputs::bad("counterexample"))?;
            let replayed = replay_counterexample(&q, &corpus, i.kind("kind")?, i.usize("d")?, i.flag("hanf"), &cx)?;
            let v = if replayed { Verdict::Holds } else { Verdict::Violated };
            Ok(Outcome::new(v, json!({"reproduced": replayed})))
        }
        "elocal" => {
            let corpus = i.corpus("corpus")?;
            Ok(Outcome::new(
                Verdict::Computed,
                json!({"local": e_local_objects(&corpus, b.homs)?}),
            ))
        }
        "homiso-rank" => {
            let corpus = i.corpus("corpus")?;
            let q = i.query("query", &corpus)?;
            let d_max = i.usize("d_max")?;
            let rep = if i.flag("hanf") {
                homiso_hanf_rank(&q, &corpus, d_max, b.homs)?
            } else {
                homiso_gaifman_rank(&q, &corpus, d_max, b.homs)?
            };
            Ok(Outcome::new(Verdict::Computed, to_value(&rep)))
        }
        "diagram-check" => {
            let (l, r) = (i.structure("left")?, i.structure("right")?);
            let (lt, rt) = (i.tuple("left_tuple")?, i.tuple("right_tuple")?);
            let (d, k, bound) = (i.usize("d")?, i.usize("k")?, i.usize("size_bound")?);
            b.check_k(k)?;
            let n = neighborhood(&l, &lt, d)?.structure;
            let m = neighborhood(&r, &rt, d)?.structure;
            let sym = |s: &Structure| {
                s.vocab().relations().iter().all(|r| r.arity == 2) && Family::SymmetricIrreflexive.contains(s)
            };
            let family = if sym(&n) && sym(&m) {
                Family::SymmetricIrreflexive
            } else {
                Family::All
            };
            let rep = diagram_check_in(&l, &lt, &r, &rt, d, k, bound, family)?;
            let v = match rep.holds {
                Some(true) => Verdict::Holds,
                Some(false) => Verdict::Violated,
                None => Verdict::Inconclusive,
            };
            Ok(Outcome::new(v, to_value(&rep)))
        }
        "ho-quotient" => {
            let objects = i.structures("objects")?;
            let classes = ho_quotient(&objects, b.canon)?;
            let mut ok = true;
            for c in &classes {
                for &m in &c.members {
                    ok &= crate::hom::core(&objects[m]).size() == c.representative.size()
                        && is_isomorphic(&crate::hom::core(&objects[m]), &c.representative)?.is_some();
                }
            }
            let arrows = classes
                .iter()
                .map(|x| {
                    classes
                        .iter()
                        .map(|y| Ok(find_hom(&x.representative, &y.representative)?.is_some()))
                        .collect::<Result<Vec<bool>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let v = if ok { Verdict::Holds } else { Verdict::Violated };
            Ok(Outcome::new(v, json!({"classes": to_value(&classes), "arrows": arrows})))
        }
        "pointed" => {
            let (a, x) = (i.structure("base")?, i.structure("total")?);
            let (s, r) = (i.hom("section")?, i.hom("retraction")?);
            match make_pointed(&a, &x, &s, &r) {
                Ok(_) => Ok(Outcome::new(Verdict::Holds, json!({"accepted": true}))),
                Err(e @ Error::NotCommuting(_)) => Ok(Outcome::new(
                    Verdict::Violated,
                    json!({"accepted": false, "reason": e.to_string()}),
                )),
                Err(e) => Err(e),
            }
        }
        "bridge" => {
            let targets = i.structures("targets")?;
            let (k, bound, esc) = (i.usize("k")?, i.usize("size_bound")?, i.usize("escalation_bound")?);
            b.check_k(k)?;
            let family = i.family("family")?;
            let br = bridge(&targets, k, bound, esc, family)?;
            let v = if br.summary.holds() { Verdict::Holds } else { Verdict::Violated };
            let followups = br
                .cases
                .iter()
                .map(|c| {
                    let inputs = json!({
                        "left": text(&br.distinct[c.left]),
                        "right": text(&br.distinct[c.right]),
                        "k": k,
                        "size_bound": bound,
                        "escalation_bound": esc,
                        "family": family,
                    });
                    Check {
                        op: "bridge-case".into(),
                        verdict: case_verdict(c),
                        result: to_value(&BridgeCase {
                            left: 0,
                            right: 1,
                            ..c.clone()
                        }),
                        inputs,
                    }
                })
                .collect();
            Ok(Outcome {
                verdict: v,
                result: to_value(&br.summary),
                followups,
            })
        }
        "bridge-case" => {
            let (l, r) = (i.structure("left")?, i.structure("right")?);
            let (k, bound, esc) = (i.usize("k")?, i.usize("size_bound")?, i.usize("escalation_bound")?);
            b.check_k(k)?;
            let oracle = PpOracle::new(l.vocab(), k, bound, i.family("family")?)?;
            let (p, q) = (oracle.profile(&l)?, oracle.profile(&r)?);
            let game = khom_equivalent(&l, &r, k)?;
            match pair_case((0, &l), (1, &r), k, game, oracle.separator(&p, &q), esc)? {
                Some(c) => Ok(Outcome::new(case_verdict(&c), to_value(&c))),
                None => Ok(Outcome::new(Verdict::Holds, Value::Null)),
            }
        }
        other => Err(Error::InvalidArgument(format!("unknown op `{other}`"))),
    }
}

fn case_verdict(c: &BridgeCase) -> Verdict {
    if c.resolved {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// One replayable check per reported counterexample, carrying only the
/// corpus entries it cites.
fn counterexample_checks(
    rep: &LocalityReport,
    corpus: &Corpus,
    q: &Query,
    query: &str,
    kind: EquivalenceKind,
    hanf: bool,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for level in &rep.levels {
        for cx in &level.counterexamples {
            let mut entries = vec![corpus.entries()[cx.left.entry].clone()];
            let mut local = cx.clone();
            local.left.entry = 0;
            if cx.right.entry == cx.left.entry {
                local.right.entry = 0;
            } else {
                entries.push(corpus.entries()[cx.right.entry].clone());
                local.right.entry = 1;
            }
            let cited = Corpus::new(entries)?;
            let reproduced = replay_counterexample(q, &cited, kind, level.d, hanf, &local)?;
            out.push(Check {
                op: "locality-counterexample".into(),
                inputs: json!({
                    "query": query,
                    "kind": kind.to_string(),
                    "d": level.d,
                    "hanf": hanf,
                    "corpus": corpus_value(&cited),
                    "counterexample": to_value(&local),
                }),
                verdict: if reproduced { Verdict::Holds } else { Verdict::Violated },
                result: json!({"reproduced": reproduced}),
            });
        }
    }
    Ok(out)
}
