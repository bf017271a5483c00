//! Brute-force oracles shared by the integration tests. Each one is written
//! from the definitions, independently of the library's search code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use fmlocal::logic::{Formula, Term};
use fmlocal::structures::{enumerate_iso_classes, Element, Family, Structure, Vocabulary};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn digraphs(max: usize) -> Vec<Structure> {
    enumerate_iso_classes(&Vocabulary::graph(), max, Family::All).unwrap()
}

pub fn graphs(max: usize) -> Vec<Structure> {
    enumerate_iso_classes(&Vocabulary::graph(), max, Family::SymmetricIrreflexive).unwrap()
}

/// Every map `0..n -> 0..m`, as digit vectors in base `m`.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<Element>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    if n > 0 && m == 0 {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i] += 1;
            if cur[i] < m {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

pub fn all_permutations(n: usize) -> Vec<Vec<Element>> {
    fn go(cur: &mut Vec<Element>, used: &mut Vec<bool>, out: &mut Vec<Vec<Element>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Whether `f` preserves every tuple and constant.
pub fn preserves(a: &Structure, b: &Structure, f: &[Element]) -> bool {
    a.constants().iter().zip(b.constants()).all(|(&x, &y)| f[x] == y)
        && a.all_tuples()
            .all(|(r, t)| b.contains(r, &t.iter().map(|&e| f[e]).collect::<Vec<_>>()))
}

pub fn brute_homs(a: &Structure, b: &Structure) -> Vec<Vec<Element>> {
    all_maps(a.size(), b.size()).into_iter().filter(|f| preserves(a, b, f)).collect()
}

pub fn brute_iso(a: &Structure, b: &Structure) -> bool {
    a.size() == b.size()
        && a.tuple_count() == b.tuple_count()
        && all_permutations(a.size()).iter().any(|p| preserves(a, b, p))
}

/// Adjacency of the Gaifman graph, from the definition.
pub fn adjacency(s: &Structure) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; s.size()]; s.size()];
    for (_, t) in s.all_tuples() {
        for &x in t {
            for &y in t {
                if x != y {
                    adj[x][y] = true;
                }
            }
        }
    }
    adj
}

/// Minimum height over all rooted forests on the vertex set whose
/// ancestor relation covers every edge: parent functions are enumerated
/// exhaustively.
pub fn brute_tree_depth(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let mut best = n;
    // parent[v] == n means v is a root
    for parent in all_maps(n, n + 1) {
        let mut depth = vec![0usize; n];
        let mut ok = true;
        for v in 0..n {
            let mut d = 1;
            let mut x = v;
            while parent[x] != n {
                x = parent[x];
                d += 1;
                if d > n {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
            depth[v] = d;
        }
        if !ok {
            continue;
        }
        let height = *depth.iter().max().unwrap();
        if height >= best {
            continue;
        }
        let ancestor = |mut x: usize, y: usize| {
            while parent[x] != n {
                x = parent[x];
                if x == y {
                    return true;
                }
            }
            false
        };
        let covers = (0..n).all(|u| (0..n).all(|v| !adj[u][v] || ancestor(u, v) || ancestor(v, u)));
        if covers {
            best = height;
        }
    }
    best
}

/// Random simple graph on `n` vertices.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Structure {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Structure::graph(n, &edges).unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<Element> {
    let mut p: Vec<Element> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Truth of `phi` by direct expansion of every quantifier over the
/// universe.
pub fn naive_eval(s: &Structure, phi: &Formula, env: &mut BTreeMap<String, Element>) -> bool {
    let val = |t: &Term, env: &BTreeMap<String, Element>| match t {
        Term::Var(v) => env[v],
        Term::Const(i) => s.constants()[*i],
    };
    match phi {
        Formula::Atom { relation, args } => {
            let r = s.vocab().relation_index(relation).unwrap();
            let t: Vec<Element> = args.iter().map(|a| val(a, env)).collect();
            s.relation(r).contains(&t)
        }
        Formula::Eq(x, y) => val(x, env) == val(y, env),
        Formula::Not(f) => !naive_eval(s, f, env),
        Formula::And(fs) => fs.iter().all(|f| naive_eval(s, f, env)),
        Formula::Or(fs) => fs.iter().any(|f| naive_eval(s, f, env)),
        Formula::Exists(v, f) | Formula::Forall(v, f) => {
            let old = env.get(v).copied();
            let mut results = Vec::new();
            for e in 0..s.size() {
                env.insert(v.clone(), e);
                results.push(naive_eval(s, f, env));
            }
            match old {
                Some(o) => env.insert(v.clone(), o),
                None => env.remove(v),
            };
            if matches!(phi, Formula::Exists(..)) {
                results.into_iter().any(|b| b)
            } else {
                results.into_iter().all(|b| b)
            }
        }
    }
}

/// Random formula over `E/2` in the variables `x`, `y` with at most
/// `rank` nested quantifiers; `free` lists the variables in scope.
pub fn random_formula<R: Rng>(rng: &mut R, rank: usize, free: &[&str], size: usize) -> Formula {
    let var = |rng: &mut R| Term::Var(free[rng.gen_range(0..free.len())].to_string());
    let leaf = |rng: &mut R| {
        if free.is_empty() {
            return Formula::And(Vec::new());
        }
        if rng.gen_bool(0.75) {
            Formula::Atom {
                relation: "E".into(),
                args: vec![var(rng), var(rng)],
            }
        } else {
            Formula::Eq(var(rng), var(rng))
        }
    };
    if size == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..6) {
        0 => Formula::Not(Box::new(random_formula(rng, rank, free, size - 1))),
        1 => Formula::And(vec![
            random_formula(rng, rank, free, size / 2),
            random_formula(rng, rank, free, size / 2),
        ]),
        2 => Formula::Or(vec![
            random_formula(rng, rank, free, size / 2),
            random_formula(rng, rank, free, size / 2),
        ]),
        3 | 4 if rank > 0 => {
            let v = ["x", "y"][rng.gen_range(0..2)];
            let mut inner: Vec<&str> = free.to_vec();
            if !inner.contains(&v) {
                inner.push(v);
            }
            let body = Box::new(random_formula(rng, rank - 1, &inner, size - 1));
            if rng.gen_bool(0.5) {
                Formula::Exists(v.into(), body)
            } else {
                Formula::Forall(v.into(), body)
            }
        }
        _ => leaf(rng),
    }
}
