//! The `fmlocal` command line: subcommands build checks, evaluate them and
//! write a JSON report. Exit codes: 0 success, 1 a violated check, 2 bad
//! input or configuration, 3 a search bound stopped a check.

pub mod config;
pub mod load;
pub mod ops;
pub mod report;
pub mod theorem;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;
use crate::locality::{all_tuples, Corpus, CorpusEntry, EquivalenceKind};
use crate::structures::{
    enumerate_iso_classes, generate, generate_random, neighborhood, serialize_structure, Element, Family,
    GeneratorKind, Structure, Vocabulary,
};
use config::{Bounds, RunConfig};
use load::{load_corpus, parse_tuple, read_structure, read_text};
use ops::{corpus_value, evaluate, text};
use report::{Check, Report, Verdict};

/// An error with the file it came from.
#[derive(Debug)]
pub struct Failure {
    pub context: Option<String>,
    pub error: Error,
}

impl Failure {
    pub fn at(path: &Path, error: Error) -> Self {
        Failure {
            context: Some(path.display().to_string()),
            error,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.error.is_bound_related() {
            3
        } else {
            2
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { context: None, error }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.context {
            Some(c) => write!(f, "{c}: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Parser, Debug)]
#[command(name = "fmlocal", version, about = "Finite structures, games, cores and locality checks")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Report path (or output directory for `generate --max-size`);
    /// stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct One {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct Two {
    /// Two structure files.
    #[arg(long = "in", num_args = 1, required = true)]
    pub inputs: Vec<PathBuf>,
    /// Designated tuples, one per input, e.g. `(0,1)`.
    #[arg(long = "tuple")]
    pub tuples: Vec<String>,
}

#[derive(Args, Debug)]
pub struct KindArgs {
    /// `iso`, `khom`, `fo` or `coreiso`; the full forms `khom:2`, `fo:3`
    /// and `coreiso:2:4` are also accepted.
    #[arg(long, default_value = "iso")]
    pub kind: String,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub size_bound: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    /// File holding the query text.
    #[arg(long)]
    pub query: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub d_max: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gaifman graph edges and components.
    Gaifman(One),
    /// The d-neighborhood of a tuple.
    Nbhd {
        #[command(flatten)]
        one: One,
        #[arg(long, default_value = "")]
        tuple: String,
        #[arg(long)]
        d: usize,
    },
    Iso(Two),
    /// A homomorphism, or all of them with `--all`.
    Hom {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        all: bool,
    },
    Core(One),
    Treedepth(One),
    Kcore {
        #[command(flatten)]
        one: One,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        size_bound: Option<usize>,
    },
    /// The k-round Ehrenfeucht-Fraisse game.
    Efgame {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        k: usize,
    },
    /// The one-sided k-round forth game from the first input.
    Forth {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        k: usize,
        /// Seed pairs `a:b`, comma separated.
        #[arg(long, default_value = "")]
        pairs: String,
    },
    KhomEquiv {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        k: usize,
    },
    /// Homomorphism profiles from bounded tree-depth candidates.
    PpOracle {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        size_bound: Option<usize>,
    },
    /// k-extendability relative to a candidate corpus.
    Extendable {
        #[command(flatten)]
        one: One,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Extendable pairs that are n-forth equivalent must be k-equivalent.
    Lemma1 {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    DEquiv {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        kind: KindArgs,
    },
    GaifmanRank {
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        kind: KindArgs,
    },
    HanfRank {
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        kind: KindArgs,
    },
    /// Corpus objects local for the weak equivalences among them.
    Elocal {
        #[arg(long)]
        corpus: PathBuf,
    },
    HomisoRank {
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        hanf: bool,
    },
    /// k-homomorphic equivalence of neighborhoods against their k-cores,
    /// for two inputs or every pair of corpus entries.
    DiagramCheck {
        #[arg(long = "in")]
        inputs: Vec<PathBuf>,
        #[arg(long = "tuple")]
        tuples: Vec<String>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        size_bound: Option<usize>,
    },
    HoQuotient {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Checks a span `A -> X -> A` for `r . i = id`.
    Pointed {
        /// The base, then the total structure.
        #[arg(long = "in", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        section: String,
        #[arg(long)]
        retraction: String,
    },
    /// Compares k-homomorphic equivalence with bounded pp-agreement on
    /// all pairs of targets.
    CheckTheorem {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Without `--corpus`: all digraphs with loops up to this size.
        #[arg(long)]
        max_size: Option<usize>,
        /// Random digraphs of size `max-size + 1` added to the generated
        /// corpus.
        #[arg(long, default_value_t = 0)]
        sample: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Compare d-neighborhoods instead of whole structures.
        #[arg(long, value_delimiter = ',')]
        d: Vec<usize>,
        /// Anchor neighborhoods at every tuple of this length instead of
        /// the designated tuples.
        #[arg(long)]
        anchor_arity: Option<usize>,
        #[arg(long)]
        size_bound: Option<usize>,
        #[arg(long)]
        escalation_bound: Option<usize>,
    },
    /// Re-evaluates checks of a report and compares verdicts and results.
    Replay {
        #[arg(long)]
        report: PathBuf,
        /// Check index; all checks when absent.
        #[arg(long)]
        check: Option<usize>,
    },
    /// Writes a generated structure, or with `--max-size` one file per
    /// isomorphism class into the `--out` directory.
    Generate {
        #[arg(long, default_value = "random")]
        generator: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        max_size: Option<usize>,
        /// `all`, `irreflexive` or `symmetric` for exhaustive generation.
        #[arg(long, default_value = "all")]
        family: String,
    },
}

const KHOM: (&str, &str) = (
    "k_homomorphic_equivalence",
    "forth game won in both directions for k rounds",
);
const TREE_DEPTH: (&str, &str) = (
    "tree_depth_with_constants",
    "tree-depth of the Gaifman graph after deleting the constants",
);
const NEIGHBORHOOD: (&str, &str) = (
    "neighborhood",
    "induced substructure on the d-ball around the existing constants and the anchor; the anchor becomes constants after the existing ones",
);
const EXTENDABLE: (&str, &str) = (
    "k_extendability",
    "for X of size below k and seeds won both ways for k-|X| rounds, every b has an a keeping both games won for k-|X|-1 rounds; seeds that are not partial homomorphisms are skipped",
);
const CORPUS_RELATIVE: (&str, &str) = (
    "corpus_relative",
    "ranks, extendability and local objects quantify over the given corpus only",
);
const VACUOUS: (&str, &str) = (
    "vacuous_hypotheses",
    "a rank reached without any pair meeting the hypothesis is flagged vacuous",
);
const POOL: (&str, &str) = (
    "local_object_pool",
    "distinct d-neighborhoods of the corpus and their cores; weak equivalences are the maps between pool objects with isomorphic cores",
);
const CORE_ISO: (&str, &str) = (
    "k_core_search",
    "k-cores are searched up to the size bound; an unfinished search is inconclusive",
);
const HOM_SETS: (&str, &str) = (
    "homotopy_hom_sets",
    "classes are hom-equivalence classes represented by canonical cores; arrows are homomorphisms between representatives",
);
const ORACLE: (&str, &str) = (
    "pp_agreement",
    "agreement means no candidate of tree-depth at most k within the size bound maps into exactly one side; game-inequivalent pairs that agree are escalated to the separator read off the spoiler's strategy tree",
);
const LIFTED: (&str, &str) = (
    "fibrant_cofibrant",
    "every object is fibrant and cofibrant",
);

fn structure_of(path: &Path) -> Outcome<Value> {
    Ok(text(&read_structure(path)?))
}

fn tuple_arg(s: Option<&String>) -> Outcome<Vec<Element>> {
    Ok(s.map(|t| parse_tuple(t)).transpose()?.unwrap_or_default())
}

fn two(t: &Two) -> Outcome<Value> {
    if t.inputs.len() != 2 {
        return Err(Error::InvalidArgument(format!("expected two --in files, got {}", t.inputs.len())).into());
    }
    if t.tuples.len() > 2 {
        return Err(Error::InvalidArgument("at most two --tuple values".into()).into());
    }
    Ok(json!({
        "left": structure_of(&t.inputs[0])?,
        "right": structure_of(&t.inputs[1])?,
        "left_tuple": tuple_arg(t.tuples.first())?,
        "right_tuple": tuple_arg(t.tuples.get(1))?,
    }))
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(x), Value::Object(y)) = (a.as_object_mut(), b) {
        x.extend(y);
    }
    a
}

fn kind_of(args: &KindArgs, bounds: &Bounds) -> Outcome<EquivalenceKind> {
    let need_k = || {
        args.k
            .ok_or_else(|| Failure::from(Error::InvalidArgument(format!("--kind {} needs --k", args.kind))))
    };
    let kind = match args.kind.as_str() {
        "iso" => EquivalenceKind::Iso,
        "khom" => EquivalenceKind::KHom { k: need_k()? },
        "fo" => EquivalenceKind::FO { k: need_k()? },
        "coreiso" => EquivalenceKind::CoreIso {
            k: need_k()?,
            size_bound: args.size_bound.unwrap_or(bounds.kcore),
        },
        other => other.parse()?,
    };
    match kind {
        EquivalenceKind::KHom { k } | EquivalenceKind::FO { k } | EquivalenceKind::CoreIso { k, .. } => {
            bounds.check_k(k)?
        }
        EquivalenceKind::Iso => {}
    }
    Ok(kind)
}

fn rank_inputs(r: &RankArgs, kind: Option<&EquivalenceKind>, bounds: &Bounds) -> Outcome<Value> {
    let corpus = load_corpus(&r.corpus)?;
    let mut v = json!({
        "query": read_text(&r.query)?,
        "corpus": corpus_value(&corpus),
        "d_max": r.d_max.unwrap_or(bounds.d_max),
    });
    if let Some(k) = kind {
        v["kind"] = Value::String(k.to_string());
    }
    Ok(v)
}

fn structures_value(c: &Corpus) -> Value {
    Value::Array(c.entries().iter().map(|e| text(&e.structure)).collect())
}

/// Evaluates a check and appends it with its follow-up checks.
fn push(report: &mut Report, op: &str, inputs: Value, cfg: &RunConfig) -> Outcome<()> {
    let out = evaluate(op, &inputs, cfg)?;
    report.checks.push(Check {
        op: op.to_string(),
        inputs,
        verdict: out.verdict,
        result: out.result,
    });
    report.checks.extend(out.followups);
    Ok(())
}

fn exhaustive_corpus(max_size: usize, sample: usize, seed: u64) -> Outcome<Corpus> {
    let v = Vocabulary::graph();
    let mut entries: Vec<CorpusEntry> = enumerate_iso_classes(&v, max_size, Family::All)?
        .into_iter()
        .enumerate()
        .map(|(i, s)| CorpusEntry {
            structure: s,
            tuple: Vec::new(),
            provenance: format!("class {i}"),
        })
        .collect();
    for i in 0..sample {
        let s = seed.wrapping_add(i as u64);
        entries.push(CorpusEntry {
            structure: generate_random(&v, max_size + 1, 0.5, s)?,
            tuple: Vec::new(),
            provenance: format!("random seed {s}"),
        });
    }
    Ok(Corpus::new(entries)?)
}

/// Targets for the bridge: whole structures, or d-neighborhoods of the
/// designated tuples or of every tuple of a given length.
fn bridge_targets(corpus: &Corpus, d: Option<usize>, anchor_arity: Option<usize>) -> Outcome<Vec<Structure>> {
    let Some(d) = d else { return Ok(corpus.structures()) };
    let mut out = Vec::new();
    for e in corpus.entries() {
        let anchors = match anchor_arity {
            Some(n) => all_tuples(e.structure.size(), n),
            None => vec![e.tuple.clone()],
        };
        for t in anchors {
            out.push(neighborhood(&e.structure, &t, d)?.structure);
        }
    }
    Ok(out)
}

fn parse_pairs(s: &str) -> Outcome<Vec<(Element, Element)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let bad = || Failure::from(Error::InvalidArgument(format!("seed pair `{p}` is not a:b")));
            let (a, b) = p.split_once(':').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn parse_map(s: &str) -> Outcome<Vec<Element>> {
    Ok(parse_tuple(s)?)
}

fn write_generated(cmd: &Command, cfg: &RunConfig, out: Option<&Path>) -> Outcome<()> {
    let Command::Generate {
        generator,
        n,
        density,
        max_size,
        family,
    } = cmd
    else {
        unreachable!()
    };
    if let Some(max) = max_size {
        let family = match family.as_str() {
            "all" => Family::All,
            "irreflexive" => Family::Irreflexive,
            "symmetric" => Family::SymmetricIrreflexive,
            other => return Err(Error::InvalidArgument(format!("unknown family `{other}`")).into()),
        };
        let dir = out.ok_or_else(|| Failure::from(Error::InvalidArgument("--max-size needs --out <dir>".into())))?;
        fs::create_dir_all(dir).map_err(|e| Failure::at(dir, Error::Io(e.to_string())))?;
        let classes = enumerate_iso_classes(&Vocabulary::graph(), *max, family)?;
        let width = classes.len().to_string().len();
        for (i, s) in classes.iter().enumerate() {
            let path = dir.join(format!("s{i:0width$}.fm"));
            fs::write(&path, serialize_structure(s)).map_err(|e| Failure::at(&path, Error::Io(e.to_string())))?;
        }
        return Ok(());
    }
    let kind: GeneratorKind = generator.parse()?;
    let s = generate(kind, *n, *density, cfg.seed)?;
    emit(&serialize_structure(&s), out)
}

fn emit(text: &str, out: Option<&Path>) -> Outcome<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::at(p, Error::Io(e.to_string()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_report(cli: &Cli, cfg: &RunConfig) -> Outcome<Report> {
    let b = &cfg.bounds;
    let name = command_name(&cli.command);
    let mut r = Report::new(name);
    let mut flag = |f: (&'static str, &'static str)| {
        r.interpretation.insert(f.0, f.1);
    };
    match &cli.command {
        Command::Nbhd { .. } | Command::DEquiv { .. } => flag(NEIGHBORHOOD),
        Command::Treedepth(_) => flag(TREE_DEPTH),
        Command::Kcore { .. } => {
            flag(TREE_DEPTH);
            flag(CORE_ISO);
        }
        Command::Forth { .. } | Command::KhomEquiv { .. } => flag(KHOM),
        Command::PpOracle { .. } | Command::CheckTheorem { .. } => {
            flag(KHOM);
            flag(ORACLE);
            flag(TREE_DEPTH);
            flag(NEIGHBORHOOD);
        }
        Command::Extendable { .. } | Command::Lemma1 { .. } => {
            flag(EXTENDABLE);
            flag(CORPUS_RELATIVE);
        }
        Command::GaifmanRank { .. } | Command::HanfRank { .. } => {
            flag(NEIGHBORHOOD);
            flag(CORPUS_RELATIVE);
            flag(VACUOUS);
            flag(KHOM);
            flag(CORE_ISO);
        }
        Command::Elocal { .. } | Command::HomisoRank { .. } => {
            flag(POOL);
            flag(CORPUS_RELATIVE);
            flag(VACUOUS);
        }
        Command::DiagramCheck { .. } => {
            flag(NEIGHBORHOOD);
            flag(KHOM);
            flag(CORE_ISO);
            flag(TREE_DEPTH);
        }
        Command::HoQuotient { .. } => {
            flag(HOM_SETS);
            flag(LIFTED);
        }
        _ => {}
    }
    match &cli.command {
        Command::Gaifman(o) => push(&mut r, "gaifman", json!({"structure": structure_of(&o.input)?}), cfg)?,
        Command::Nbhd { one, tuple, d } => push(
            &mut r,
            "nbhd",
            json!({"structure": structure_of(&one.input)?, "tuple": parse_tuple(tuple)?, "d": d}),
            cfg,
        )?,
        Command::Iso(t) => push(&mut r, "iso", two(t)?, cfg)?,
        Command::Hom { two: t, all } => push(&mut r, "hom", merge(two(t)?, json!({"all": all})), cfg)?,
        Command::Core(o) => push(&mut r, "core", json!({"structure": structure_of(&o.input)?}), cfg)?,
        Command::Treedepth(o) => push(&mut r, "treedepth", json!({"structure": structure_of(&o.input)?}), cfg)?,
        Command::Kcore { one, k, size_bound } => push(
            &mut r,
            "kcore",
            json!({"structure": structure_of(&one.input)?, "k": k, "size_bound": size_bound.unwrap_or(b.kcore)}),
            cfg,
        )?,
        Command::Efgame { two: t, k } => push(&mut r, "efgame", merge(two(t)?, json!({"k": k})), cfg)?,
        Command::Forth { two: t, k, pairs } => push(
            &mut r,
            "forth",
            merge(two(t)?, json!({"k": k, "pairs": parse_pairs(pairs)?})),
            cfg,
        )?,
        Command::KhomEquiv { two: t, k } => push(&mut r, "khom-equiv", merge(two(t)?, json!({"k": k})), cfg)?,
        Command::PpOracle { two: t, k, size_bound } => {
            let inputs = two(t)?;
            let targets = [
                crate::structures::parse_structure(inputs["left"].as_str().unwrap_or_default())?,
                crate::structures::parse_structure(inputs["right"].as_str().unwrap_or_default())?,
            ];
            let family = theorem::oracle_family(&targets);
            push(
                &mut r,
                "pp-oracle",
                merge(inputs, json!({"k": k, "size_bound": size_bound.unwrap_or(b.oracle), "family": family})),
                cfg,
            )?
        }
        Command::Extendable { one, k, corpus } => {
            let c = load_corpus(corpus)?;
            push(
                &mut r,
                "extendable",
                json!({"structure": structure_of(&one.input)?, "k": k, "candidates": structures_value(&c)}),
                cfg,
            )?
        }
        Command::Lemma1 { corpus, k, n } => {
            let c = load_corpus(corpus)?;
            push(&mut r, "lemma1", json!({"corpus": structures_value(&c), "k": k, "n": n}), cfg)?
        }
        Command::DEquiv { two: t, d, kind } => {
            let kind = kind_of(kind, b)?;
            push(
                &mut r,
                "d-equiv",
                merge(two(t)?, json!({"d": d, "kind": kind.to_string()})),
                cfg,
            )?
        }
        Command::GaifmanRank { rank, kind } | Command::HanfRank { rank, kind } => {
            let kind = kind_of(kind, b)?;
            let op = if matches!(cli.command, Command::GaifmanRank { .. }) {
                "gaifman-rank"
            } else {
                "hanf-rank"
            };
            push(&mut r, op, rank_inputs(rank, Some(&kind), b)?, cfg)?
        }
        Command::Elocal { corpus } => {
            let c = load_corpus(corpus)?;
            push(&mut r, "elocal", json!({"corpus": corpus_value(&c)}), cfg)?
        }
        Command::HomisoRank { rank, hanf } => push(
            &mut r,
            "homiso-rank",
            merge(rank_inputs(rank, None, b)?, json!({"hanf": hanf})),
            cfg,
        )?,
        Command::DiagramCheck {
            inputs,
            tuples,
            corpus,
            d,
            k,
            size_bound,
        } => {
            let params = json!({"d": d, "k": k, "size_bound": size_bound.unwrap_or(b.kcore)});
            match corpus {
                Some(path) => {
                    let c = load_corpus(path)?;
                    let es = c.entries();
                    for i in 0..es.len() {
                        for j in i..es.len() {
                            let inputs = json!({
                                "left": text(&es[i].structure),
                                "right": text(&es[j].structure),
                                "left_tuple": es[i].tuple,
                                "right_tuple": es[j].tuple,
                            });
                            push(&mut r, "diagram-check", merge(inputs, params.clone()), cfg)?;
                        }
                    }
                }
                None => {
                    let t = Two {
                        inputs: inputs.clone(),
                        tuples: tuples.clone(),
                    };
                    push(&mut r, "diagram-check", merge(two(&t)?, params), cfg)?
                }
            }
        }
        Command::HoQuotient { corpus } => {
            let c = load_corpus(corpus)?;
            push(&mut r, "ho-quotient", json!({"objects": structures_value(&c)}), cfg)?
        }
        Command::Pointed {
            inputs,
            section,
            retraction,
        } => {
            if inputs.len() != 2 {
                return Err(Error::InvalidArgument("pointed needs --in base --in total".into()).into());
            }
            push(
                &mut r,
                "pointed",
                json!({
                    "base": structure_of(&inputs[0])?,
                    "total": structure_of(&inputs[1])?,
                    "section": parse_map(section)?,
                    "retraction": parse_map(retraction)?,
                }),
                cfg,
            )?
        }
        Command::CheckTheorem {
            corpus,
            max_size,
            sample,
            k,
            d,
            anchor_arity,
            size_bound,
            escalation_bound,
        } => {
            let c = match (corpus, max_size) {
                (Some(path), _) => load_corpus(path)?,
                (None, Some(max)) => exhaustive_corpus(*max, *sample, cfg.seed)?,
                (None, None) => {
                    return Err(Error::InvalidArgument("check-theorem needs --corpus or --max-size".into()).into())
                }
            };
            let radii: Vec<Option<usize>> = if d.is_empty() { vec![None] } else { d.iter().map(|&x| Some(x)).collect() };
            for radius in radii {
                let targets = bridge_targets(&c, radius, *anchor_arity)?;
                let family = theorem::oracle_family(&targets);
                let listed: Vec<Value> = targets.iter().map(text).collect();
                for &k in k {
                    push(
                        &mut r,
                        "bridge",
                        json!({
                            "targets": listed,
                            "d": radius,
                            "k": k,
                            "size_bound": size_bound.unwrap_or(b.oracle),
                            "escalation_bound": escalation_bound.unwrap_or(b.escalation),
                            "family": family,
                        }),
                        cfg,
                    )?;
                }
            }
        }
        Command::Replay { report, check } => replay(&mut r, report, *check)?,
        Command::Generate { .. } => unreachable!(),
    }
    Ok(r)
}

fn replay(r: &mut Report, path: &Path, only: Option<usize>) -> Outcome<()> {
    let doc: Value =
        serde_json::from_str(&read_text(path)?).map_err(|e| Failure::at(path, Error::InvalidArgument(e.to_string())))?;
    let bounds: Bounds = serde_json::from_value(doc["config"]["bounds"].clone())
        .map_err(|e| Failure::at(path, Error::InvalidArgument(format!("config bounds: {e}"))))?;
    let checks: Vec<Check> = serde_json::from_value(doc["checks"].clone())
        .map_err(|e| Failure::at(path, Error::InvalidArgument(format!("checks: {e}"))))?;
    let cfg = RunConfig {
        seed: doc["config"]["seed"].as_u64().unwrap_or(0),
        jobs: 1,
        bounds,
        bounds_env: None,
    };
    let indices: Vec<usize> = match only {
        Some(i) if i >= checks.len() => {
            return Err(Failure::at(
                path,
                Error::InvalidArgument(format!("report has {} checks, no check {i}", checks.len())),
            ))
        }
        Some(i) => vec![i],
        None => (0..checks.len()).collect(),
    };
    for i in indices {
        let c = &checks[i];
        let out = evaluate(&c.op, &c.inputs, &cfg)?;
        let same = out.verdict == c.verdict && out.result == c.result;
        r.checks.push(Check {
            op: "replay".into(),
            inputs: json!({"check": i, "op": c.op}),
            verdict: if same { Verdict::Holds } else { Verdict::Violated },
            result: json!({
                "recorded_verdict": c.verdict,
                "replayed_verdict": out.verdict,
                "result_matches": out.result == c.result,
            }),
        });
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gaifman(_) => "gaifman",
        Command::Nbhd { .. } => "nbhd",
        Command::Iso(_) => "iso",
        Command::Hom { .. } => "hom",
        Command::Core(_) => "core",
        Command::Treedepth(_) => "treedepth",
        Command::Kcore { .. } => "kcore",
        Command::Efgame { .. } => "efgame",
        Command::Forth { .. } => "forth",
        Command::KhomEquiv { .. } => "khom-equiv",
        Command::PpOracle { .. } => "pp-oracle",
        Command::Extendable { .. } => "extendable",
        Command::Lemma1 { .. } => "lemma1",
        Command::DEquiv { .. } => "d-equiv",
        Command::GaifmanRank { .. } => "gaifman-rank",
        Command::HanfRank { .. } => "hanf-rank",
        Command::Elocal { .. } => "elocal",
        Command::HomisoRank { .. } => "homiso-rank",
        Command::DiagramCheck { .. } => "diagram-check",
        Command::HoQuotient { .. } => "ho-quotient",
        Command::Pointed { .. } => "pointed",
        Command::CheckTheorem { .. } => "check-theorem",
        Command::Replay { .. } => "replay",
        Command::Generate { .. } => "generate",
    }
}

fn execute(cli: &Cli) -> Outcome<i32> {
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(Error::InvalidArgument("--jobs must be positive".into()).into());
    }
    let cfg = RunConfig::from_env(cli.seed, jobs)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::from(Error::InvalidArgument(e.to_string())))?;
    let out = cli.out.as_deref();
    if matches!(cli.command, Command::Generate { .. }) {
        write_generated(&cli.command, &cfg, out)?;
        return Ok(0);
    }
    let started = Instant::now();
    let report = pool.install(|| build_report(cli, &cfg))?;
    eprintln!(
        "fmlocal {}: {} checks in {:.2}s",
        report.command,
        report.checks.len(),
        started.elapsed().as_secs_f64()
    );
    emit(&report.render(&cfg), out)?;
    Ok(report.exit_code())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("fmlocal: {f}");
            f.exit_code()
        }
    }
}
