//! Reading structures, tuples and corpora from disk.

use std::fs;
use std::path::{Path, PathBuf};

use super::Failure;
use crate::error::Error;
use crate::locality::{Corpus, CorpusEntry};
use crate::structures::{parse_structure, Element, Structure};

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::at(path, Error::Io(e.to_string())))
}

pub fn read_structure(path: &Path) -> Result<Structure, Failure> {
    parse_structure(&read_text(path)?).map_err(|e| Failure::at(path, e))
}

/// Parses `(0,1)`, `0,1`, `0 1` or an empty string.
pub fn parse_tuple(text: &str) -> Result<Vec<Element>, Error> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidArgument(format!("`{t}` in tuple `{text}` is not an element index")))
        })
        .collect()
}

fn entry(path: &Path, tuple: Vec<Element>, provenance: String) -> Result<CorpusEntry, Failure> {
    Ok(CorpusEntry {
        structure: read_structure(path)?,
        tuple,
        provenance,
    })
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// A directory of `.fm` files, a single `.fm` file, or a manifest whose
/// lines read `file.fm` or `file.fm: (0,1)` (paths relative to the
/// manifest). Entries are ordered by file name.
pub fn load_corpus(path: &Path) -> Result<Corpus, Failure> {
    let mut entries = Vec::new();
    if path.is_dir() {
        let listing = fs::read_dir(path).map_err(|e| Failure::at(path, Error::Io(e.to_string())))?;
        let mut files: Vec<PathBuf> = listing
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "fm"))
            .collect();
        files.sort();
        for f in files {
            entries.push(entry(&f, Vec::new(), file_name(&f))?);
        }
    } else if path.extension().is_some_and(|x| x == "fm") {
        entries.push(entry(path, Vec::new(), file_name(path))?);
    } else {
        let base = path.parent().unwrap_or(Path::new("."));
        for (i, line) in read_text(path)?.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (file, tuple) = match line.split_once(':') {
                Some((f, t)) => (f.trim(), parse_tuple(t).map_err(|e| Failure::at(path, Error::syntax(i + 1, 1, e.to_string())))?),
                None => (line, Vec::new()),
            };
            entries.push(entry(&base.join(file), tuple, line.to_string())?);
        }
        entries.sort_by(|a, b| a.provenance.cmp(&b.provenance));
    }
    Corpus::new(entries).map_err(|e| Failure::at(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples() {
        assert_eq!(parse_tuple("(0,1)").unwrap(), vec![0, 1]);
        assert_eq!(parse_tuple(" 2 3 ").unwrap(), vec![2, 3]);
        assert_eq!(parse_tuple("()").unwrap(), Vec::<Element>::new());
        assert!(parse_tuple("(a)").is_err());
    }

    #[test]
    fn corpora_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let edge = "vocab E/2\nuniverse 2\nrel E: (0,1)\n";
        fs::write(dir.path().join("b.fm"), edge).unwrap();
        fs::write(dir.path().join("a.fm"), "vocab E/2\nuniverse 1\n").unwrap();
        let c = load_corpus(dir.path()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.entries()[0].provenance, "a.fm");
        let manifest = dir.path().join("list.txt");
        fs::write(&manifest, "# anchored\nb.fm: (0,1)\nb.fm: (1,0)\n").unwrap();
        let m = load_corpus(&manifest).unwrap();
        assert_eq!(m.entries()[1].tuple, vec![1, 0]);
        fs::write(dir.path().join("c.fm"), "vocab R/3\nuniverse 1\n").unwrap();
        assert!(load_corpus(dir.path()).is_err());
        fs::write(&manifest, "b.fm: (0,9)\n").unwrap();
        assert!(load_corpus(&manifest).is_err());
    }
}
