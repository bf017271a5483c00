//! Gaifman graphs, distances and neighborhoods.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::{Element, Structure};
use crate::error::{Error, Result};

/// Undirected simple graph on the universe of a structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaifmanGraph {
    adj: Vec<Vec<Element>>,
}

impl GaifmanGraph {
    /// Builds from an edge list; loops are dropped and edges deduplicated.
    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = (Element, Element)>) -> Self {
        let mut sets = vec![BTreeSet::new(); vertex_count];
        for (a, b) in edges {
            if a != b {
                sets[a].insert(b);
                sets[b].insert(a);
            }
        }
        GaifmanGraph {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: Element) -> &[Element] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: Element, b: Element) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    /// Multi-source BFS distances; `None` marks unreachable vertices.
    pub fn distances_from(&self, sources: &[Element]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("visited") + 1;
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices at distance at most `r` from some source, ascending.
    pub fn ball(&self, sources: &[Element], r: usize) -> Vec<Element> {
        self.distances_from(sources)
            .iter()
            .enumerate()
            .filter(|(_, d)| matches!(d, Some(d) if *d <= r))
            .map(|(v, _)| v)
            .collect()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Element>> {
        let mut seen = vec![false; self.adj.len()];
        let mut out = Vec::new();
        for v in 0..self.adj.len() {
            if seen[v] {
                continue;
            }
            let comp = self.ball(&[v], usize::MAX);
            for &w in &comp {
                seen[w] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.ball(&[0], usize::MAX).len() == self.adj.len()
    }
}

pub fn gaifman_graph(s: &Structure) -> GaifmanGraph {
    let mut edges = Vec::new();
    for (_, t) in s.all_tuples() {
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                edges.push((t[i], t[j]));
            }
        }
    }
    GaifmanGraph::from_edges(s.size(), edges)
}

/// `min_i d(source_i, target)`; `None` for infinity. An empty source is
/// at infinite distance from everything.
pub fn distance(g: &GaifmanGraph, source: &[Element], target: Element) -> Result<Option<usize>> {
    let n = g.vertex_count();
    if let Some(&bad) = source.iter().chain([&target]).find(|&&e| e >= n) {
        return Err(Error::ElementOutOfRange { index: bad, size: n });
    }
    Ok(g.distances_from(source)[target])
}

/// An r-neighborhood together with its embedding into the ambient
/// structure (`embedding[new] = old`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub structure: Structure,
    pub embedding: Vec<Element>,
}

/// The induced substructure on the r-ball around `anchor`, expanded by the
/// anchor as constants appended after any existing ones. Existing constants
/// count as part of the anchor when the ball is measured. An empty anchor on
/// a constant-free structure yields the whole structure.
pub fn neighborhood(s: &Structure, anchor: &[Element], r: usize) -> Result<Neighborhood> {
    if let Some(&bad) = anchor.iter().find(|&&e| e >= s.size()) {
        return Err(Error::ElementOutOfRange {
            index: bad,
            size: s.size(),
        });
    }
    let mut sources: Vec<Element> = s.constants().to_vec();
    sources.extend_from_slice(anchor);
    if sources.is_empty() {
        return Ok(Neighborhood {
            structure: s.clone(),
            embedding: (0..s.size()).collect(),
        });
    }
    let ball = gaifman_graph(s).ball(&sources, r);
    let expanded = s.with_extra_constants(anchor)?;
    let (structure, embedding) = expanded.induced(&ball)?;
    Ok(Neighborhood {
        structure,
        embedding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Vocabulary;
    use std::sync::Arc;

    fn path(n: usize) -> Structure {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Structure::graph(n, &edges).unwrap()
    }

    #[test]
    fn ternary_tuple_gives_triangle() {
        let v = Arc::new(Vocabulary::new([("R", 3)], 0).unwrap());
        let s = Structure::new(v, 3, vec![vec![vec![0, 1, 2]]], vec![]).unwrap();
        assert_eq!(gaifman_graph(&s).edges(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn loops_add_no_edges() {
        let v = Arc::new(Vocabulary::graph());
        let s = Structure::new(v, 2, vec![vec![vec![0, 0]]], vec![]).unwrap();
        assert!(gaifman_graph(&s).edges().is_empty());
        let k2 = path(2);
        assert_eq!(gaifman_graph(&k2).edges(), vec![(0, 1)]);
    }

    #[test]
    fn distances_on_a_path() {
        let g = gaifman_graph(&path(3));
        assert_eq!(distance(&g, &[0], 2).unwrap(), Some(2));
        assert_eq!(distance(&g, &[0, 1], 2).unwrap(), Some(1));
        assert_eq!(distance(&g, &[1], 1).unwrap(), Some(0));
        let e2 = Structure::graph(2, &[]).unwrap();
        assert_eq!(distance(&gaifman_graph(&e2), &[0], 1).unwrap(), None);
        assert!(distance(&g, &[3], 0).is_err());
    }

    #[test]
    fn radius_one_ball_on_p4() {
        let n = neighborhood(&path(4), &[0], 1).unwrap();
        assert_eq!(n.embedding, vec![0, 1]);
        assert_eq!(n.structure.constants(), &[0]);
        assert_eq!(n.structure.tuple_count(), 2);
    }

    #[test]
    fn radius_zero_is_the_anchor() {
        let n = neighborhood(&path(4), &[2, 1], 0).unwrap();
        assert_eq!(n.embedding, vec![1, 2]);
        assert_eq!(n.structure.constants(), &[1, 0]);
    }

    #[test]
    fn empty_anchor_returns_everything() {
        let p = path(4);
        let n = neighborhood(&p, &[], 0).unwrap();
        assert_eq!(n.structure, p);
    }

    #[test]
    fn existing_constants_widen_the_ball() {
        let p = path(5).with_extra_constants(&[4]).unwrap();
        let n = neighborhood(&p, &[0], 1).unwrap();
        assert_eq!(n.embedding, vec![0, 1, 3, 4]);
        assert_eq!(n.structure.constants(), &[3, 0]);
    }
}
