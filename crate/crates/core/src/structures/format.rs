//! Line-oriented text format for structures.
//!
//! ```text
//! # comment
//! vocab E/2 P/1 consts=1
//! universe 3 labels a b c
//! rel E: (0,1) (1,0)
//! rel P: (2)
//! consts 0
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{Structure, Vocabulary};
use crate::error::{Error, Result};

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, offset: usize, msg: impl Into<String>) -> Error {
        Error::syntax(self.number, offset + 1, msg)
    }
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn parse_index(line: &Line<'_>, offset: usize, tok: &str) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(line.err(offset, format!("expected element index, found `{tok}`")));
    }
    tok.parse()
        .map_err(|_| line.err(offset, format!("index `{tok}` too large")))
}

fn parse_vocab(line: &Line<'_>) -> Result<Vocabulary> {
    let toks = tokens(line.text);
    let mut rels = Vec::new();
    let mut consts = 0;
    let mut seen_consts = false;
    for &(off, tok) in &toks[1..] {
        if let Some(n) = tok.strip_prefix("consts=") {
            if seen_consts {
                return Err(line.err(off, "`consts=` given twice"));
            }
            seen_consts = true;
            consts = parse_index(line, off + 7, n)?;
            continue;
        }
        if seen_consts {
            return Err(line.err(off, "relation declared after `consts=`"));
        }
        let (name, arity) = tok
            .rsplit_once('/')
            .ok_or_else(|| line.err(off, format!("expected <name>/<arity>, found `{tok}`")))?;
        let arity = parse_index(line, off + name.len() + 1, arity)?;
        if rels.iter().any(|(n, _): &(String, usize)| n == name) {
            return Err(Error::DuplicateRelation(name.to_string()));
        }
        rels.push((name.to_string(), arity));
    }
    Vocabulary::new(rels, consts).map_err(|e| match e {
        Error::InvalidVocabulary(m) => line.err(0, m),
        other => other,
    })
}

fn parse_tuples(line: &Line<'_>, start: usize) -> Result<Vec<Vec<usize>>> {
    let bytes = line.text.as_bytes();
    let mut i = start;
    let mut out = Vec::new();
    loop {
        while i < bytes.len() && (bytes[i] as char).is_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        if bytes[i] != b'(' {
            return Err(line.err(i, "expected `(`"));
        }
        i += 1;
        let mut tuple = Vec::new();
        loop {
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if s == i {
                return Err(line.err(i, "expected element index"));
            }
            tuple.push(parse_index(line, s, &line.text[s..i])?);
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
            match bytes.get(i) {
                Some(b',') => i += 1,
                Some(b')') => {
                    i += 1;
                    break;
                }
                _ => return Err(line.err(i, "expected `,` or `)`")),
            }
        }
        out.push(tuple);
    }
    Ok(out)
}

/// Parses the structure text format. Errors carry 1-based line/column.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let lines: Vec<Line<'_>> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| Line {
            number: i + 1,
            text: raw.split('#').next().unwrap_or(""),
        })
        .filter(|l| !l.text.trim().is_empty())
        .collect();
    let mut it = lines.iter().peekable();

    let first = it
        .next()
        .ok_or_else(|| Error::syntax(1, 1, "empty input: expected `vocab` line"))?;
    let toks = tokens(first.text);
    if toks[0].1 != "vocab" {
        return Err(first.err(toks[0].0, "expected `vocab`"));
    }
    let vocab = Arc::new(parse_vocab(first)?);

    let uline = it
        .next()
        .ok_or_else(|| Error::syntax(first.number + 1, 1, "expected `universe` line"))?;
    let utoks = tokens(uline.text);
    if utoks[0].1 != "universe" {
        return Err(uline.err(utoks[0].0, "expected `universe`"));
    }
    let &(soff, stok) = utoks
        .get(1)
        .ok_or_else(|| uline.err(uline.text.len(), "expected universe size"))?;
    let size = parse_index(uline, soff, stok)?;
    if size == 0 {
        return Err(uline.err(soff, "universe must be non-empty"));
    }
    let mut labels = None;
    if let Some(&(loff, ltok)) = utoks.get(2) {
        if ltok != "labels" {
            return Err(uline.err(loff, "expected `labels`"));
        }
        let l: Vec<String> = utoks[3..].iter().map(|(_, t)| t.to_string()).collect();
        if l.len() != size {
            return Err(uline.err(
                loff,
                format!("{} labels given for universe of size {size}", l.len()),
            ));
        }
        labels = Some(l);
    }

    let mut relations: Vec<Option<BTreeSet<Vec<usize>>>> = vec![None; vocab.relations().len()];
    let mut constants = None;
    for line in it {
        let toks = tokens(line.text);
        let (off, head) = toks[0];
        match head {
            "rel" => {
                if constants.is_some() {
                    return Err(line.err(off, "`rel` after `consts`"));
                }
                let colon = line
                    .text
                    .find(':')
                    .ok_or_else(|| line.err(off, "expected `rel <name>:`"))?;
                let name = line.text[off + 3..colon].trim();
                let idx = vocab
                    .relation_index(name)
                    .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
                if relations[idx].is_some() {
                    return Err(Error::DuplicateRelation(name.to_string()));
                }
                let arity = vocab.relations()[idx].arity;
                let mut set = BTreeSet::new();
                for t in parse_tuples(line, colon + 1)? {
                    if t.len() != arity {
                        return Err(Error::ArityMismatch {
                            symbol: name.to_string(),
                            expected: arity,
                            found: t.len(),
                        });
                    }
                    if let Some(&bad) = t.iter().find(|&&e| e >= size) {
                        return Err(Error::ElementOutOfRange { index: bad, size });
                    }
                    set.insert(t);
                }
                relations[idx] = Some(set);
            }
            "consts" => {
                if constants.is_some() {
                    return Err(line.err(off, "duplicate `consts` line"));
                }
                let mut c = Vec::new();
                for &(coff, ctok) in &toks[1..] {
                    let e = parse_index(line, coff, ctok)?;
                    if e >= size {
                        return Err(Error::ElementOutOfRange { index: e, size });
                    }
                    c.push(e);
                }
                if c.len() != vocab.constant_count() {
                    return Err(line.err(
                        off,
                        format!(
                            "expected {} constants, found {}",
                            vocab.constant_count(),
                            c.len()
                        ),
                    ));
                }
                constants = Some(c);
            }
            "vocab" | "universe" => {
                return Err(line.err(off, format!("duplicate `{head}` line")));
            }
            other => return Err(line.err(off, format!("unexpected `{other}`"))),
        }
    }
    let constants = match constants {
        Some(c) => c,
        None if vocab.constant_count() == 0 => Vec::new(),
        None => {
            let last = lines.last().map_or(1, |l| l.number);
            return Err(Error::syntax(
                last + 1,
                1,
                format!("missing `consts` line ({} expected)", vocab.constant_count()),
            ));
        }
    };
    let relations = relations
        .into_iter()
        .map(Option::unwrap_or_default)
        .collect();
    let s = Structure::from_sets(vocab, size, relations, constants);
    match labels {
        Some(l) => s.with_labels(l),
        None => Ok(s),
    }
}

fn write_tuple(out: &mut String, t: &[usize]) {
    out.push('(');
    for (i, e) in t.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{e}");
    }
    out.push(')');
}

/// Canonical text: vocabulary in declaration order, relations sorted by
/// symbol name, tuples in lexicographic order, then constants.
pub fn serialize_structure(s: &Structure) -> String {
    let mut out = String::from("vocab");
    for r in s.vocab().relations() {
        let _ = write!(out, " {}/{}", r.name, r.arity);
    }
    let _ = writeln!(out, " consts={}", s.vocab().constant_count());
    let _ = write!(out, "universe {}", s.size());
    if let Some(labels) = s.labels() {
        out.push_str(" labels");
        for l in labels {
            out.push(' ');
            out.push_str(l);
        }
    }
    out.push('\n');
    let mut order: Vec<usize> = (0..s.vocab().relations().len()).collect();
    order.sort_by(|&a, &b| s.vocab().relations()[a].name.cmp(&s.vocab().relations()[b].name));
    for r in order {
        let _ = write!(out, "rel {}:", s.vocab().relations()[r].name);
        for t in s.relation(r) {
            out.push(' ');
            write_tuple(&mut out, t);
        }
        out.push('\n');
    }
    if !s.constants().is_empty() {
        out.push_str("consts");
        for c in s.constants() {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    out
}
