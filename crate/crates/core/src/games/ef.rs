//! The k-round back-and-forth game.

use std::collections::HashMap;

use super::{extends_hom, Board, Move, Occurrences};
use crate::error::{Error, Result};
use crate::structures::{Element, Structure};

struct Game<'a> {
    a: &'a Structure,
    b: &'a Structure,
    occ_a: Occurrences<'a>,
    occ_b: Occurrences<'a>,
    memo: HashMap<(Vec<u32>, usize), bool>,
}

/// Current position as forward and backward partial maps.
#[derive(Clone)]
struct Position {
    fwd: Vec<Option<Element>>,
    bwd: Vec<Option<Element>>,
}

impl<'a> Game<'a> {
    fn new(a: &'a Structure, b: &'a Structure) -> Self {
        Game {
            a,
            b,
            occ_a: Occurrences::new(a),
            occ_b: Occurrences::new(b),
            memo: HashMap::new(),
        }
    }

    /// Partial isomorphism check for adding `x -> y`: both directions must
    /// stay partial homomorphisms of the two maps.
    fn extends(&self, p: &Position, x: Element, y: Element, buf: &mut Vec<Element>) -> bool {
        extends_hom(self.b, &self.occ_a, &p.fwd, x, y, buf) && extends_hom(self.a, &self.occ_b, &p.bwd, y, x, buf)
    }

    fn push(p: &mut Position, x: Element, y: Element) {
        p.fwd[x] = Some(y);
        p.bwd[y] = Some(x);
    }

    fn key(p: &Position, k: usize) -> (Vec<u32>, usize) {
        let pairs = p
            .fwd
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| ((x as u32) << 16) | y as u32))
            .collect();
        (pairs, k)
    }

    fn answers(&self, p: &Position, board: Board, pick: Element) -> Vec<Element> {
        let mut buf = Vec::new();
        match board {
            Board::Left => (0..self.b.size())
                .filter(|&y| self.extends(p, pick, y, &mut buf))
                .collect(),
            Board::Right => (0..self.a.size())
                .filter(|&x| self.extends(p, x, pick, &mut buf))
                .collect(),
        }
    }

    fn play(p: &Position, board: Board, pick: Element, answer: Element) -> Position {
        let mut q = p.clone();
        match board {
            Board::Left => Game::push(&mut q, pick, answer),
            Board::Right => Game::push(&mut q, answer, pick),
        }
        q
    }

    /// Spoiler moves worth considering: elements not yet played.
    fn spoiler_moves(&self, p: &Position) -> Vec<(Board, Element)> {
        let left = (0..self.a.size()).filter(|&x| p.fwd[x].is_none()).map(|x| (Board::Left, x));
        let right = (0..self.b.size()).filter(|&y| p.bwd[y].is_none()).map(|y| (Board::Right, y));
        left.chain(right).collect()
    }

    fn duplicator_wins(&mut self, p: &Position, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        let key = Game::key(p, k);
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let win = self.spoiler_moves(p).into_iter().all(|(board, pick)| {
            self.answers(p, board, pick)
                .into_iter()
                .any(|ans| self.duplicator_wins(&Game::play(p, board, pick, ans), k - 1))
        });
        self.memo.insert(key, win);
        win
    }

    fn start(&self, abar: &[Element], bbar: &[Element]) -> Option<Position> {
        let mut p = Position {
            fwd: vec![None; self.a.size()],
            bwd: vec![None; self.b.size()],
        };
        let mut buf = Vec::new();
        let constants = self.a.constants().iter().zip(self.b.constants());
        for (&x, &y) in constants.chain(abar.iter().zip(bbar)) {
            if !self.extends(&p, x, y, &mut buf) {
                return None;
            }
            Game::push(&mut p, x, y);
        }
        Some(p)
    }
}

fn check_inputs(a: &Structure, abar: &[Element], b: &Structure, bbar: &[Element]) -> Result<()> {
    a.check_compatible(b)?;
    if abar.len() != bbar.len() {
        return Err(Error::TupleLengthMismatch {
            left: abar.len(),
            right: bbar.len(),
        });
    }
    for (&e, s) in abar.iter().map(|e| (e, a)).chain(bbar.iter().map(|e| (e, b))) {
        if e >= s.size() {
            return Err(Error::ElementOutOfRange { index: e, size: s.size() });
        }
    }
    Ok(())
}

/// Whether the duplicator wins the k-round back-and-forth game on
/// `(a, abar)` and `(b, bbar)`. Constants are part of the start position.
pub fn ef_equivalent(a: &Structure, abar: &[Element], b: &Structure, bbar: &[Element], k: usize) -> Result<bool> {
    check_inputs(a, abar, b, bbar)?;
    let mut g = Game::new(a, b);
    Ok(match g.start(abar, bbar) {
        Some(p) => g.duplicator_wins(&p, k),
        None => false,
    })
}

/// A line of play won by the spoiler, if the spoiler wins: at each round a
/// winning spoiler move and the first legal duplicator answer.
pub fn ef_transcript(
    a: &Structure,
    abar: &[Element],
    b: &Structure,
    bbar: &[Element],
    k: usize,
) -> Result<Option<Vec<Move>>> {
    check_inputs(a, abar, b, bbar)?;
    let mut g = Game::new(a, b);
    let Some(mut p) = g.start(abar, bbar) else {
        return Ok(Some(Vec::new()));
    };
    if g.duplicator_wins(&p, k) {
        return Ok(None);
    }
    let mut moves = Vec::new();
    for rounds in (1..=k).rev() {
        let (board, pick) = g
            .spoiler_moves(&p)
            .into_iter()
            .find(|&(board, pick)| {
                g.answers(&p, board, pick)
                    .into_iter()
                    .all(|ans| !g.duplicator_wins(&Game::play(&p, board, pick, ans), rounds - 1))
            })
            .expect("spoiler has a winning move");
        let answer = g.answers(&p, board, pick).first().copied();
        moves.push(Move {
            board,
            spoiler: pick,
            duplicator: answer,
        });
        match answer {
            Some(ans) => p = Game::play(&p, board, pick, ans),
            None => break,
        }
    }
    Ok(Some(moves))
}

/// Whether `pairs` (constants first) is a partial isomorphism, checked from
/// scratch over every tuple of the domain and range.
fn is_partial_iso(a: &Structure, b: &Structure, pairs: &[(Element, Element)]) -> bool {
    for (i, &(x, y)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[..i] {
            if (x == x2) != (y == y2) {
                return false;
            }
        }
    }
    let dom: Vec<Element> = pairs.iter().map(|p| p.0).collect();
    let img = |x: Element| pairs.iter().find(|p| p.0 == x).map(|p| p.1).expect("in domain");
    for (r, sym) in a.vocab().relations().iter().enumerate() {
        let total = dom.len().pow(sym.arity as u32);
        for code in 0..total {
            let mut c = code;
            let mut t = Vec::with_capacity(sym.arity);
            for _ in 0..sym.arity {
                t.push(dom[c % dom.len()]);
                c /= dom.len();
            }
            let u: Vec<Element> = t.iter().map(|&x| img(x)).collect();
            if a.contains(r, &t) != b.contains(r, &u) {
                return false;
            }
        }
    }
    true
}

fn reference(a: &Structure, b: &Structure, pairs: &mut Vec<(Element, Element)>, k: usize) -> bool {
    if k == 0 {
        return is_partial_iso(a, b, pairs);
    }
    let left = (0..a.size()).all(|x| {
        (0..b.size()).any(|y| {
            pairs.push((x, y));
            let w = reference(a, b, pairs, k - 1);
            pairs.pop();
            w
        })
    });
    left && (0..b.size()).all(|y| {
        (0..a.size()).any(|x| {
            pairs.push((x, y));
            let w = reference(a, b, pairs, k - 1);
            pairs.pop();
            w
        })
    })
}

/// Unmemoized game search that only checks the final position; used to
/// cross-check [`ef_equivalent`].
pub fn ef_equivalent_reference(
    a: &Structure,
    abar: &[Element],
    b: &Structure,
    bbar: &[Element],
    k: usize,
) -> Result<bool> {
    check_inputs(a, abar, b, bbar)?;
    let mut pairs: Vec<(Element, Element)> = a
        .constants()
        .iter()
        .copied()
        .zip(b.constants().iter().copied())
        .chain(abar.iter().copied().zip(bbar.iter().copied()))
        .collect();
    Ok(reference(a, b, &mut pairs, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{generate, GeneratorKind};

    fn g(kind: GeneratorKind, n: usize) -> Structure {
        generate(kind, n, 0.0, 0).unwrap()
    }

    #[test]
    fn cliques() {
        let k2 = g(GeneratorKind::Clique, 2);
        let k3 = g(GeneratorKind::Clique, 3);
        for k in 0..=3 {
            let fast = ef_equivalent(&k2, &[], &k3, &[], k).unwrap();
            assert_eq!(fast, k <= 2, "k = {k}");
            assert_eq!(fast, ef_equivalent_reference(&k2, &[], &k3, &[], k).unwrap());
        }
    }

    #[test]
    fn linear_orders() {
        let l = |n| g(GeneratorKind::LinearOrder, n);
        assert!(!ef_equivalent(&l(2), &[], &l(3), &[], 2).unwrap());
        assert!(ef_equivalent(&l(4), &[], &l(5), &[], 2).unwrap());
        assert!(ef_equivalent(&l(7), &[], &l(8), &[], 3).unwrap());
        assert!(!ef_equivalent(&l(6), &[], &l(7), &[], 3).unwrap());
    }

    #[test]
    fn start_positions_and_errors() {
        let p3 = g(GeneratorKind::Path, 3);
        assert!(ef_equivalent(&p3, &[0], &p3, &[2], 3).unwrap());
        assert!(!ef_equivalent(&p3, &[0], &p3, &[1], 1).unwrap());
        assert!(ef_equivalent(&p3, &[0], &p3, &[1], 0).unwrap());
        assert!(ef_equivalent(&p3, &[0], &p3, &[], 1).is_err());
    }

    #[test]
    fn transcripts_end_in_a_spoiler_win() {
        let k2 = g(GeneratorKind::Clique, 2);
        let k3 = g(GeneratorKind::Clique, 3);
        let t = ef_transcript(&k2, &[], &k3, &[], 3).unwrap().unwrap();
        assert!(!t.is_empty() && t.len() <= 3);
        assert!(t.iter().all(|m| m.board == Board::Right) || t.last().unwrap().duplicator.is_none());
        assert!(ef_transcript(&k2, &[], &k3, &[], 2).unwrap().is_none());
    }
}
