//! The one-sided forth game: the spoiler picks only in the left structure
//! and the duplicator must keep a partial homomorphism. The duplicator wins
//! k rounds iff every primitive-positive formula of quantifier rank at most
//! k (over the seeded elements) true on the left is true on the right.

use std::collections::HashMap;
use std::sync::Arc;

use super::{extends_hom, seed_hom, Board, Move, Occurrences};
use crate::error::{Error, Result};
use crate::hom::{find_hom, relative_tree_depth};
use crate::structures::{Element, Structure};

pub(crate) struct Forth<'a> {
    left: &'a Structure,
    right: &'a Structure,
    occ: Occurrences<'a>,
    memo: HashMap<(Vec<u32>, usize), bool>,
}

impl<'a> Forth<'a> {
    pub(crate) fn new(left: &'a Structure, right: &'a Structure) -> Self {
        Forth {
            left,
            right,
            occ: Occurrences::new(left),
            memo: HashMap::new(),
        }
    }

    /// A partial map seeded with constants and `pairs`, if it is a partial
    /// homomorphism.
    pub(crate) fn seed(&self, pairs: &[(Element, Element)]) -> Option<Vec<Option<Element>>> {
        let mut fwd = vec![None; self.left.size()];
        seed_hom(self.left, self.right, &self.occ, pairs, &mut fwd).then_some(fwd)
    }

    fn answers(&self, fwd: &[Option<Element>], a: Element) -> Vec<Element> {
        let mut buf = Vec::new();
        (0..self.right.size())
            .filter(|&b| extends_hom(self.right, &self.occ, fwd, a, b, &mut buf))
            .collect()
    }

    pub(crate) fn wins(&mut self, fwd: &mut Vec<Option<Element>>, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        let key: Vec<u32> = fwd
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| ((x as u32) << 16) | y as u32))
            .collect();
        let key = (key, k);
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let mut win = true;
        for a in 0..self.left.size() {
            if fwd[a].is_some() {
                continue;
            }
            let answered = self.answers(fwd, a).into_iter().any(|b| {
                fwd[a] = Some(b);
                let w = self.wins(fwd, k - 1);
                fwd[a] = None;
                w
            });
            if !answered {
                win = false;
                break;
            }
        }
        self.memo.insert(key, win);
        win
    }

    /// A spoiler move that defeats every answer, if one exists.
    fn winning_pick(&mut self, fwd: &mut Vec<Option<Element>>, k: usize) -> Option<Element> {
        (0..self.left.size()).find(|&a| {
            fwd[a].is_none()
                && self.answers(fwd, a).into_iter().all(|b| {
                    fwd[a] = Some(b);
                    let w = self.wins(fwd, k - 1);
                    fwd[a] = None;
                    !w
                })
        })
    }
}

/// Whether the duplicator wins the k-round forth game from `seed` (a partial
/// map from `left` to `right`; constants are added to it). A seed that is not
/// itself a partial homomorphism is an error.
pub fn forth_khom(left: &Structure, right: &Structure, seed: &[(Element, Element)], k: usize) -> Result<bool> {
    left.check_compatible(right)?;
    if !seed.is_empty() {
        let (l, r) = (left.without_constants(), right.without_constants());
        if Forth::new(&l, &r).seed(seed).is_none() {
            return Err(Error::NotPartialHomomorphism(format!("seed {seed:?}")));
        }
    }
    let mut game = Forth::new(left, right);
    // a seed that clashes with the constants loses at once
    let Some(mut fwd) = game.seed(seed) else { return Ok(false) };
    Ok(game.wins(&mut fwd, k))
}

/// Forth games won in both directions.
pub fn khom_equivalent(a: &Structure, b: &Structure, k: usize) -> Result<bool> {
    Ok(forth_khom(a, b, &[], k)? && forth_khom(b, a, &[], k)?)
}

/// A line of play won by the spoiler in the k-round forth game from the
/// constants, if the spoiler wins: a winning pick each round and the first
/// legal answer.
pub fn forth_transcript(left: &Structure, right: &Structure, k: usize) -> Result<Option<Vec<Move>>> {
    left.check_compatible(right)?;
    let mut game = Forth::new(left, right);
    let Some(mut fwd) = game.seed(&[]) else { return Ok(Some(Vec::new())) };
    if game.wins(&mut fwd, k) {
        return Ok(None);
    }
    let mut moves = Vec::new();
    for rounds in (1..=k).rev() {
        let pick = game.winning_pick(&mut fwd, rounds).expect("spoiler wins from here");
        let answer = game.answers(&fwd, pick).first().copied();
        moves.push(Move {
            board: Board::Left,
            spoiler: pick,
            duplicator: answer,
        });
        match answer {
            Some(b) => fwd[pick] = Some(b),
            None => break,
        }
    }
    Ok(Some(moves))
}

struct TreeBuilder {
    /// element of `left` named by each tree node
    label: Vec<Element>,
    parent: Vec<Option<usize>>,
}

/// Unfolds a winning spoiler strategy into a structure: one node per
/// spoiler pick, children for each answer that keeps a partial
/// homomorphism. Returns nothing if the duplicator wins.
fn build_tree(game: &mut Forth<'_>, fwd: &mut Vec<Option<Element>>, k: usize, parent: Option<usize>, tree: &mut TreeBuilder) {
    let Some(a) = game.winning_pick(fwd, k) else {
        unreachable!("spoiler wins from this position")
    };
    let node = tree.label.len();
    tree.label.push(a);
    tree.parent.push(parent);
    for b in game.answers(fwd, a) {
        fwd[a] = Some(b);
        build_tree(game, fwd, k - 1, Some(node), tree);
        fwd[a] = None;
    }
}

/// A structure of tree-depth at most `k` (not counting constants) that maps
/// into `left` but not into `right`, if the spoiler wins the k-round forth
/// game from the constants. The strategy tree is pruned greedily, first by
/// elements and then by tuples, while it still fails to map into `right`.
pub fn forth_separator(left: &Structure, right: &Structure, k: usize) -> Result<Option<Structure>> {
    left.check_compatible(right)?;
    let mut game = Forth::new(left, right);
    let Some(mut fwd) = game.seed(&[]) else {
        // constants alone already fail: the constants with their tuples
        let consts: Vec<Element> = left.constants().to_vec();
        return Ok(Some(left.induced(&consts)?.0));
    };
    if game.wins(&mut fwd, k) {
        return Ok(None);
    }
    let mut tree = TreeBuilder {
        label: Vec::new(),
        parent: Vec::new(),
    };
    build_tree(&mut game, &mut fwd, k, None, &mut tree);

    // elements: distinct constant elements of `left`, then tree nodes
    let mut const_elems: Vec<Element> = left.constants().to_vec();
    const_elems.sort_unstable();
    const_elems.dedup();
    let base = const_elems.len();
    let n = base + tree.label.len();
    let label = |x: usize| if x < base { const_elems[x] } else { tree.label[x - base] };
    let mut relations = vec![Vec::new(); left.vocab().relations().len()];
    let mut add_path = |path: &[usize]| {
        // tuples of `left` over the labels of `path`, each pulled back once
        let at: HashMap<Element, usize> = path.iter().map(|&x| (label(x), x)).collect();
        for (r, t) in left.all_tuples() {
            if let Some(u) = t.iter().map(|e| at.get(e).copied()).collect::<Option<Vec<_>>>() {
                relations[r].push(u);
            }
        }
    };
    add_path(&(0..base).collect::<Vec<_>>());
    for node in 0..tree.label.len() {
        let mut path: Vec<usize> = (0..base).collect();
        let mut cur = Some(node);
        while let Some(x) = cur {
            path.push(base + x);
            cur = tree.parent[x];
        }
        add_path(&path);
    }
    let constants = left
        .constants()
        .iter()
        .map(|c| const_elems.binary_search(c).expect("listed"))
        .collect();
    let mut c = Structure::new(Arc::new(left.vocab().clone()), n, relations, constants)?;
    debug_assert!(find_hom(&c, right)?.is_none());

    // prune non-constant elements, then tuples
    let mut x = base;
    while x < c.size() && c.size() > 1 {
        let keep: Vec<Element> = (0..c.size()).filter(|&y| y != x).collect();
        let (smaller, _) = c.induced(&keep)?;
        if find_hom(&smaller, right)?.is_none() {
            c = smaller;
        } else {
            x += 1;
        }
    }
    let tuples: Vec<(usize, Vec<Element>)> = c.all_tuples().map(|(r, t)| (r, t.clone())).collect();
    for (r, t) in tuples {
        let smaller = c.without_tuple(r, &t);
        if find_hom(&smaller, right)?.is_none() {
            c = smaller;
        }
    }
    debug_assert!(relative_tree_depth(&c).map_or(true, |d| d <= k));
    Ok(Some(c))
}
