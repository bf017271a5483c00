//! Deterministic structure generators for test corpora.

use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Structure, Vocabulary};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Path,
    Cycle,
    Clique,
    /// Strict order `lt` on `0 < 1 < .. < n-1`.
    LinearOrder,
    Edgeless,
    /// Each ordered pair of `E` independently with the given density.
    Random,
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => GeneratorKind::Path,
            "cycle" => GeneratorKind::Cycle,
            "clique" => GeneratorKind::Clique,
            "linear_order" | "linear-order" => GeneratorKind::LinearOrder,
            "edgeless" => GeneratorKind::Edgeless,
            "random" => GeneratorKind::Random,
            _ => return Err(Error::InvalidArgument(format!("unknown generator `{s}`"))),
        })
    }
}

/// Builds a structure of the given kind. `density` and `seed` only matter
/// for [`GeneratorKind::Random`].
pub fn generate(kind: GeneratorKind, n: usize, density: f64, seed: u64) -> Result<Structure> {
    if n == 0 {
        return Err(Error::InvalidArgument("generator size must be at least 1".into()));
    }
    let edges: Vec<(usize, usize)> = match kind {
        GeneratorKind::Path => (1..n).map(|i| (i - 1, i)).collect(),
        GeneratorKind::Cycle => match n {
            1 => vec![],
            2 => vec![(0, 1)],
            _ => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        },
        GeneratorKind::Clique => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        GeneratorKind::Edgeless => vec![],
        GeneratorKind::LinearOrder => {
            let vocab = Arc::new(Vocabulary::new([("lt", 2)], 0)?);
            let tuples = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| vec![i, j]))
                .collect();
            return Structure::new(vocab, n, vec![tuples], vec![]);
        }
        GeneratorKind::Random => {
            return generate_random(&Vocabulary::graph(), n, density, seed);
        }
    };
    Structure::graph(n, &edges)
}

/// Random structure over `vocab`: every tuple of every relation is present
/// independently with probability `density`. Constants are drawn uniformly.
pub fn generate_random(vocab: &Vocabulary, n: usize, density: f64, seed: u64) -> Result<Structure> {
    if n == 0 {
        return Err(Error::InvalidArgument("generator size must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!(
            "density {density} is outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relations = Vec::with_capacity(vocab.relations().len());
    for sym in vocab.relations() {
        let total = n.checked_pow(sym.arity as u32).ok_or(Error::BoundExceeded {
            what: "random tuple space",
            bound: usize::MAX,
            actual: usize::MAX,
        })?;
        let mut tuples = Vec::new();
        for code in 0..total {
            if rng.gen_bool(density) {
                let mut t = vec![0; sym.arity];
                let mut c = code;
                for slot in t.iter_mut().rev() {
                    *slot = c % n;
                    c /= n;
                }
                tuples.push(t);
            }
        }
        relations.push(tuples);
    }
    let constants = (0..vocab.constant_count())
        .map(|_| rng.gen_range(0..n))
        .collect();
    Structure::new(Arc::new(vocab.clone()), n, relations, constants)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_shapes() {
        let k1 = generate(GeneratorKind::Clique, 1, 0.0, 0).unwrap();
        assert_eq!((k1.size(), k1.tuple_count()), (1, 0));
        let c4 = generate(GeneratorKind::Cycle, 4, 0.0, 0).unwrap();
        assert_eq!(c4.tuple_count(), 8);
        let l3 = generate(GeneratorKind::LinearOrder, 3, 0.0, 0).unwrap();
        assert_eq!(l3.vocab().relations()[0].name, "lt");
        assert_eq!(l3.tuple_count(), 3);
        assert!(generate(GeneratorKind::Path, 0, 0.0, 0).is_err());
    }

    #[test]
    fn random_is_seeded() {
        let a = generate(GeneratorKind::Random, 3, 0.5, 7).unwrap();
        let b = generate(GeneratorKind::Random, 3, 0.5, 7).unwrap();
        assert_eq!(a, b);
        assert!(generate(GeneratorKind::Random, 3, 1.5, 7).is_err());
        let full = generate(GeneratorKind::Random, 3, 1.0, 1).unwrap();
        assert_eq!(full.tuple_count(), 9);
    }
}
