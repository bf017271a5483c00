//! First-order formulas over relational vocabularies with constants, model
//! checking, and the structure-enumeration oracle for primitive-positive
//! equivalence.

mod oracle;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::structures::{Element, Structure, Vocabulary};

pub use oracle::{
    enumerate_td_bounded_structures, pp_agree_oracle, pp_sentence_of_structure, OracleFamily, PpOracle,
    PpVerdict, Side,
};
pub(crate) use oracle::{core_pool, serialize_opt_text, serialize_text};
pub use parse::{parse_formula, parse_query};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// The i-th constant symbol, written `c<i>`.
    Const(usize),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(i) => write!(f, "c{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { relation: String, args: Vec<Term> },
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn free_variables(&self) -> BTreeSet<String> {
        fn term(t: &Term, bound: &[String], out: &mut BTreeSet<String>) {
            if let Term::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        }
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom { args, .. } => args.iter().for_each(|t| term(t, bound, out)),
                Formula::Eq(a, b) => {
                    term(a, bound, out);
                    term(b, bound, out);
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, bound, out)),
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    bound.push(v.clone());
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Checks relation names, arities and constant indices against `vocab`.
    pub fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<()> {
        let term = |t: &Term| match t {
            Term::Const(i) if *i >= vocab.constant_count() => Err(Error::UnboundConstant {
                index: *i,
                count: vocab.constant_count(),
            }),
            _ => Ok(()),
        };
        match self {
            Formula::Atom { relation, args } => {
                let r = vocab
                    .relation_index(relation)
                    .ok_or_else(|| Error::UnknownRelation(relation.clone()))?;
                let arity = vocab.relations()[r].arity;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: relation.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(term)
            }
            Formula::Eq(a, b) => term(a).and_then(|_| term(b)),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.check_vocabulary(vocab),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().try_for_each(|g| g.check_vocabulary(vocab)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, gs: &[Formula]| {
            write!(f, "({head}")?;
            for g in gs {
                write!(f, " {g}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Atom { relation, args } => {
                write!(f, "({relation}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) => list(f, "and", gs),
            Formula::Or(gs) => list(f, "or", gs),
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
        }
    }
}

pub fn quantifier_rank(phi: &Formula) -> usize {
    match phi {
        Formula::Atom { .. } | Formula::Eq(..) => 0,
        Formula::Not(g) => quantifier_rank(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().map(quantifier_rank).max().unwrap_or(0),
        Formula::Exists(_, g) | Formula::Forall(_, g) => 1 + quantifier_rank(g),
    }
}

/// Atoms, equalities, conjunction and existential quantification only.
pub fn is_primitive_positive(phi: &Formula) -> bool {
    match phi {
        Formula::Atom { .. } | Formula::Eq(..) => true,
        Formula::And(gs) => gs.iter().all(is_primitive_positive),
        Formula::Exists(_, g) => is_primitive_positive(g),
        Formula::Not(_) | Formula::Or(_) | Formula::Forall(..) => false,
    }
}

/// Formula with variables resolved to slots and relations to indices.
enum Compiled {
    Atom(usize, Vec<Slot>),
    Eq(Slot, Slot),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Exists(usize, Box<Compiled>),
    Forall(usize, Box<Compiled>),
}

#[derive(Clone, Copy)]
enum Slot {
    Var(usize),
    Const(Element),
}

fn compile(
    phi: &Formula,
    s: &Structure,
    scope: &mut Vec<(String, usize)>,
    next: &mut usize,
) -> Result<Compiled> {
    let slot = |t: &Term, scope: &[(String, usize)]| -> Result<Slot> {
        match t {
            Term::Const(i) => s
                .constants()
                .get(*i)
                .map(|&e| Slot::Const(e))
                .ok_or(Error::UnboundConstant {
                    index: *i,
                    count: s.constants().len(),
                }),
            Term::Var(v) => scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, i)| Slot::Var(i))
                .ok_or_else(|| Error::UnassignedVariable(v.clone())),
        }
    };
    Ok(match phi {
        Formula::Atom { relation, args } => {
            let r = s
                .vocab()
                .relation_index(relation)
                .ok_or_else(|| Error::UnknownRelation(relation.clone()))?;
            let arity = s.vocab().relations()[r].arity;
            if arity != args.len() {
                return Err(Error::ArityMismatch {
                    symbol: relation.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            Compiled::Atom(r, args.iter().map(|t| slot(t, scope)).collect::<Result<_>>()?)
        }
        Formula::Eq(a, b) => Compiled::Eq(slot(a, scope)?, slot(b, scope)?),
        Formula::Not(g) => Compiled::Not(Box::new(compile(g, s, scope, next)?)),
        Formula::And(gs) => Compiled::And(gs.iter().map(|g| compile(g, s, scope, next)).collect::<Result<_>>()?),
        Formula::Or(gs) => Compiled::Or(gs.iter().map(|g| compile(g, s, scope, next)).collect::<Result<_>>()?),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let i = *next;
            *next += 1;
            scope.push((v.clone(), i));
            let body = Box::new(compile(g, s, scope, next)?);
            scope.pop();
            if matches!(phi, Formula::Exists(..)) {
                Compiled::Exists(i, body)
            } else {
                Compiled::Forall(i, body)
            }
        }
    })
}

fn eval(c: &Compiled, s: &Structure, env: &mut [Element], buf: &mut Vec<Element>) -> bool {
    let get = |sl: Slot, env: &[Element]| match sl {
        Slot::Var(i) => env[i],
        Slot::Const(e) => e,
    };
    match c {
        Compiled::Atom(r, args) => {
            buf.clear();
            buf.extend(args.iter().map(|&a| get(a, env)));
            s.contains(*r, buf)
        }
        Compiled::Eq(a, b) => get(*a, env) == get(*b, env),
        Compiled::Not(g) => !eval(g, s, env, buf),
        Compiled::And(gs) => gs.iter().all(|g| eval(g, s, env, buf)),
        Compiled::Or(gs) => gs.iter().any(|g| eval(g, s, env, buf)),
        Compiled::Exists(i, g) => (0..s.size()).any(|e| {
            env[*i] = e;
            eval(g, s, env, buf)
        }),
        Compiled::Forall(i, g) => (0..s.size()).all(|e| {
            env[*i] = e;
            eval(g, s, env, buf)
        }),
    }
}

/// Whether `s` satisfies `phi` under `assignment`, which must cover every
/// free variable. Constant symbols denote `s.constants()` positionally.
pub fn evaluate(s: &Structure, phi: &Formula, assignment: &BTreeMap<String, Element>) -> Result<bool> {
    let mut scope = Vec::new();
    let mut env = Vec::new();
    for (name, &e) in assignment {
        if e >= s.size() {
            return Err(Error::ElementOutOfRange {
                index: e,
                size: s.size(),
            });
        }
        scope.push((name.clone(), env.len()));
        env.push(e);
    }
    let mut next = env.len();
    let compiled = compile(phi, s, &mut scope, &mut next)?;
    env.resize(next, 0);
    Ok(eval(&compiled, s, &mut env, &mut Vec::new()))
}

/// A formula together with an ordering of its free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    formula: Formula,
    free: Vec<String>,
}

impl Query {
    /// `free` lists the answer columns; it must cover the free variables of
    /// `formula` and contain no repeats.
    pub fn new(formula: Formula, free: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        if let Some(dup) = free.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(Error::InvalidArgument(format!("variable `{dup}` listed twice")));
        }
        if let Some(v) = formula.free_variables().into_iter().find(|v| !free.contains(v)) {
            return Err(Error::UnassignedVariable(v));
        }
        Ok(Query { formula, free })
    }

    /// Query whose columns are the free variables in sorted order.
    pub fn from_formula(formula: Formula) -> Self {
        let free = formula.free_variables().into_iter().collect();
        Query { formula, free }
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn free(&self) -> &[String] {
        &self.free
    }

    pub fn arity(&self) -> usize {
        self.free.len()
    }

    /// Whether `tuple` is an answer on `s`.
    pub fn holds(&self, s: &Structure, tuple: &[Element]) -> Result<bool> {
        if tuple.len() != self.free.len() {
            return Err(Error::TupleLengthMismatch {
                left: tuple.len(),
                right: self.free.len(),
            });
        }
        let assignment = self.free.iter().cloned().zip(tuple.iter().copied()).collect();
        evaluate(s, &self.formula, &assignment)
    }
}

/// All answer tuples; for a sentence the result is `{()}` or `{}`.
pub fn query_answers(s: &Structure, q: &Query) -> Result<BTreeSet<Vec<Element>>> {
    let m = q.arity();
    let n = s.size();
    let total = n.checked_pow(m as u32).ok_or(Error::BoundExceeded {
        what: "answer tuple space",
        bound: usize::MAX,
        actual: usize::MAX,
    })?;
    let mut out = BTreeSet::new();
    for code in 0..total {
        let mut t = vec![0; m];
        let mut c = code;
        for slot in t.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        if q.holds(s, &t)? {
            out.insert(t);
        }
    }
    Ok(out)
}
