//! Exact tree-depth by memoized recursion over vertex subsets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::structures::{gaifman_graph, Element, GaifmanGraph, Structure};

pub const DEFAULT_TD_BOUND: usize = 12;

struct Solver {
    adj: Vec<u32>,
    memo: HashMap<u32, u8>,
}

impl Solver {
    fn new(g: &GaifmanGraph) -> Self {
        let adj = (0..g.vertex_count())
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
            .collect();
        Solver {
            adj,
            memo: HashMap::new(),
        }
    }

    fn components(&self, mask: u32) -> Vec<u32> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & mask & !comp;
                comp |= new;
                frontier |= new;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    fn td(&mut self, mask: u32) -> u8 {
        if mask == 0 {
            return 0;
        }
        if mask.count_ones() == 1 {
            return 1;
        }
        if let Some(&d) = self.memo.get(&mask) {
            return d;
        }
        let comps = self.components(mask);
        let d = if comps.len() > 1 {
            comps.into_iter().map(|c| self.td(c)).max().unwrap_or(0)
        } else {
            1 + self.best_root(mask).1
        };
        self.memo.insert(mask, d);
        d
    }

    /// Root minimizing the depth of the rest of a connected `mask`.
    fn best_root(&mut self, mask: u32) -> (usize, u8) {
        let mut best = (usize::MAX, u8::MAX);
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = self.td(mask & !(1 << v));
            if d < best.1 {
                best = (v, d);
            }
        }
        best
    }

    fn forest(&mut self, mask: u32, parent: Option<Element>, out: &mut [Option<Element>]) {
        for comp in self.components(mask) {
            let (root, _) = if comp.count_ones() == 1 {
                (comp.trailing_zeros() as usize, 0)
            } else {
                self.best_root(comp)
            };
            out[root] = parent;
            self.forest(comp & !(1 << root), Some(root), out);
        }
    }
}

fn check(n: usize, bound: usize) -> Result<()> {
    if n > bound || n > 31 {
        return Err(Error::BoundExceeded {
            what: "tree-depth universe",
            bound: bound.min(31),
            actual: n,
        });
    }
    Ok(())
}

/// Tree-depth of a graph with at most `bound` vertices. The empty graph has
/// depth 0.
pub fn graph_tree_depth(g: &GaifmanGraph, bound: usize) -> Result<usize> {
    check(g.vertex_count(), bound)?;
    let full = if g.vertex_count() == 32 { u32::MAX } else { (1u32 << g.vertex_count()) - 1 };
    Ok(Solver::new(g).td(full) as usize)
}

/// Exact tree-depth of the Gaifman graph with the default universe bound.
pub fn tree_depth(a: &Structure) -> Result<usize> {
    tree_depth_bounded(a, DEFAULT_TD_BOUND)
}

pub fn tree_depth_bounded(a: &Structure, bound: usize) -> Result<usize> {
    graph_tree_depth(&gaifman_graph(a), bound)
}

/// Tree-depth of the Gaifman graph with the constant elements removed, the
/// number of quantified variables needed once constants are named.
pub fn relative_tree_depth(a: &Structure) -> Result<usize> {
    let g = gaifman_graph(a);
    check(a.size(), DEFAULT_TD_BOUND)?;
    let mut mask = (1u32 << a.size()) - 1;
    for &c in a.constants() {
        mask &= !(1 << c);
    }
    Ok(Solver::new(&g).td(mask) as usize)
}

/// A minimum-height elimination forest: `parent[v]`, `None` for roots.
/// Every edge joins an ancestor and a descendant.
pub fn elimination_forest(g: &GaifmanGraph) -> Result<Vec<Option<Element>>> {
    check(g.vertex_count(), DEFAULT_TD_BOUND)?;
    let n = g.vertex_count();
    let mut out = vec![None; n];
    let mut s = Solver::new(g);
    s.forest((1u32 << n) - 1, None, &mut out);
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::structures::{generate, GeneratorKind};

    /// Minimum height over all rooted forests (parent arrays) whose
    /// ancestor relation covers every edge.
    pub(crate) fn brute_tree_depth(g: &GaifmanGraph) -> usize {
        let n = g.vertex_count();
        let edges = g.edges();
        let mut best = usize::MAX;
        let mut parent = vec![0usize; n]; // value n means root
        let total = (n + 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            for p in parent.iter_mut() {
                *p = c % (n + 1);
                c /= n + 1;
            }
            let mut depth = vec![0usize; n];
            let mut ok = true;
            for v in 0..n {
                let mut d = 1;
                let mut u = v;
                while parent[u] != n {
                    u = parent[u];
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
            let is_ancestor = |a: usize, mut b: usize| {
                while parent[b] != n {
                    b = parent[b];
                    if b == a {
                        return true;
                    }
                }
                false
            };
            if edges
                .iter()
                .all(|&(a, b)| is_ancestor(a, b) || is_ancestor(b, a))
            {
                best = best.min(depth.iter().copied().max().unwrap_or(0));
            }
        }
        best
    }

    #[test]
    fn cliques_and_paths() {
        for n in 1..=5 {
            let k = generate(GeneratorKind::Clique, n, 0.0, 0).unwrap();
            assert_eq!(tree_depth(&k).unwrap(), n);
            assert_eq!(brute_tree_depth(&gaifman_graph(&k)), n);
        }
        let p4 = generate(GeneratorKind::Path, 4, 0.0, 0).unwrap();
        assert_eq!(tree_depth(&p4).unwrap(), 3);
        assert_eq!(brute_tree_depth(&gaifman_graph(&p4)), 3);
        let p7 = generate(GeneratorKind::Path, 7, 0.0, 0).unwrap();
        assert_eq!(tree_depth(&p7).unwrap(), 3);
    }

    #[test]
    fn bound_is_enforced() {
        let big = generate(GeneratorKind::Edgeless, 13, 0.0, 0).unwrap();
        assert!(matches!(tree_depth(&big), Err(Error::BoundExceeded { .. })));
        assert_eq!(tree_depth_bounded(&big, 13).unwrap(), 1);
    }

    #[test]
    fn relative_depth_ignores_constants() {
        let p3 = generate(GeneratorKind::Path, 3, 0.0, 0).unwrap();
        let mid = p3.with_extra_constants(&[1]).unwrap();
        assert_eq!(relative_tree_depth(&mid).unwrap(), 1);
        let k1 = generate(GeneratorKind::Edgeless, 1, 0.0, 0).unwrap();
        assert_eq!(relative_tree_depth(&k1.with_extra_constants(&[0]).unwrap()).unwrap(), 0);
    }

    #[test]
    fn forest_realizes_the_depth() {
        let c5 = generate(GeneratorKind::Cycle, 5, 0.0, 0).unwrap();
        let g = gaifman_graph(&c5);
        let parent = elimination_forest(&g).unwrap();
        let depth = |mut v: usize| {
            let mut d = 1;
            while let Some(p) = parent[v] {
                v = p;
                d += 1;
            }
            d
        };
        assert_eq!((0..5).map(depth).max(), Some(tree_depth(&c5).unwrap()));
        let anc = |a: usize, mut b: usize| {
            while let Some(p) = parent[b] {
                if p == a {
                    return true;
                }
                b = p;
            }
            false
        };
        for (a, b) in g.edges() {
            assert!(anc(a, b) || anc(b, a));
        }
    }
}
