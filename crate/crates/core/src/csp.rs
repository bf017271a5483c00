//! Backtracking search for structure-preserving maps, with generalized arc
//! consistency over the relation tables of the target.
//!
//! Variables are the elements of a source structure, values the elements of
//! a target. Each source tuple is a table constraint whose table is the
//! matching relation of the target.

use crate::structures::Structure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum VarOrder {
    /// Smallest remaining domain first, ties broken by lowest index.
    MinDomain,
    /// Ascending variable index; together with ascending values this
    /// yields solutions in lexicographic order.
    Static,
}

#[derive(Clone)]
struct Domains {
    words: usize,
    bits: Vec<u64>,
}

impl Domains {
    fn full(vars: usize, vals: usize) -> Self {
        let words = vals.div_ceil(64).max(1);
        let mut bits = vec![0u64; vars * words];
        for v in 0..vars {
            for w in 0..words {
                let lo = w * 64;
                let n = vals.saturating_sub(lo).min(64);
                bits[v * words + w] = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            }
        }
        Domains { words, bits }
    }

    #[inline]
    fn row(&self, var: usize) -> &[u64] {
        &self.bits[var * self.words..(var + 1) * self.words]
    }

    #[inline]
    fn contains(&self, var: usize, val: usize) -> bool {
        self.bits[var * self.words + val / 64] >> (val % 64) & 1 == 1
    }

    fn count(&self, var: usize) -> u32 {
        self.row(var).iter().map(|w| w.count_ones()).sum()
    }

    fn set_single(&mut self, var: usize, val: usize) {
        let w = self.words;
        for x in &mut self.bits[var * w..(var + 1) * w] {
            *x = 0;
        }
        self.bits[var * w + val / 64] = 1u64 << (val % 64);
    }

    fn first(&self, var: usize) -> Option<usize> {
        self.row(var)
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(i, &x)| i * 64 + x.trailing_zeros() as usize)
    }

    fn values(&self, var: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &x) in self.row(var).iter().enumerate() {
            let mut x = x;
            while x != 0 {
                out.push(i * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }

    /// Intersects the domain of `var` with `mask`; returns whether it shrank.
    fn restrict(&mut self, var: usize, mask: &[u64]) -> bool {
        let w = self.words;
        let mut changed = false;
        for (x, m) in self.bits[var * w..(var + 1) * w].iter_mut().zip(mask) {
            let n = *x & m;
            changed |= n != *x;
            *x = n;
        }
        changed
    }

    fn remove(&mut self, var: usize, val: usize) -> bool {
        let idx = var * self.words + val / 64;
        let bit = 1u64 << (val % 64);
        let had = self.bits[idx] & bit != 0;
        self.bits[idx] &= !bit;
        had
    }

    fn is_empty(&self, var: usize) -> bool {
        self.row(var).iter().all(|&x| x == 0)
    }
}

struct Constraint {
    scope: Vec<usize>,
    table: usize,
}

/// A compiled homomorphism problem from `source` into `target`.
pub(crate) struct HomProblem<'a> {
    vars: usize,
    vals: usize,
    tables: Vec<Vec<&'a [usize]>>,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
    injective: bool,
    order: VarOrder,
    initial: Domains,
    infeasible: bool,
}

impl<'a> HomProblem<'a> {
    /// Assumes compatible vocabularies; constants are pre-seeded.
    pub(crate) fn new(source: &Structure, target: &'a Structure) -> Self {
        let vars = source.size();
        let vals = target.size();
        let tables: Vec<Vec<&'a [usize]>> = target
            .relations()
            .iter()
            .map(|set| set.iter().map(Vec::as_slice).collect())
            .collect();
        let mut constraints = Vec::new();
        let mut watch = vec![Vec::new(); vars];
        for (r, t) in source.all_tuples() {
            let id = constraints.len();
            let mut seen: Vec<usize> = Vec::with_capacity(t.len());
            for &e in t {
                if !seen.contains(&e) {
                    seen.push(e);
                    watch[e].push(id);
                }
            }
            constraints.push(Constraint {
                scope: t.clone(),
                table: r,
            });
        }
        let mut initial = Domains::full(vars, vals);
        for (&a, &b) in source.constants().iter().zip(target.constants()) {
            let mut mask = vec![0u64; initial.words];
            mask[b / 64] |= 1u64 << (b % 64);
            initial.restrict(a, &mask);
        }
        let infeasible = (0..vars).any(|v| initial.is_empty(v));
        HomProblem {
            vars,
            vals,
            tables,
            constraints,
            watch,
            injective: false,
            order: VarOrder::MinDomain,
            initial,
            infeasible,
        }
    }

    pub(crate) fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    pub(crate) fn order(mut self, order: VarOrder) -> Self {
        self.order = order;
        self
    }

    /// Restricts `var` to the values flagged in `allowed`.
    pub(crate) fn restrict(&mut self, var: usize, allowed: &[bool]) {
        let mut mask = vec![0u64; self.initial.words];
        for (v, &ok) in allowed.iter().enumerate().take(self.vals) {
            if ok {
                mask[v / 64] |= 1u64 << (v % 64);
            }
        }
        self.initial.restrict(var, &mask);
        if self.initial.is_empty(var) {
            self.infeasible = true;
        }
    }

    fn revise(&self, c: &Constraint, doms: &mut Domains, changed: &mut Vec<usize>) -> bool {
        let arity = c.scope.len();
        let words = doms.words;
        let mut support = vec![0u64; arity * words];
        'tuples: for s in &self.tables[c.table] {
            for j in 0..arity {
                if !doms.contains(c.scope[j], s[j]) {
                    continue 'tuples;
                }
                for l in 0..j {
                    if c.scope[l] == c.scope[j] && s[l] != s[j] {
                        continue 'tuples;
                    }
                }
            }
            for j in 0..arity {
                support[j * words + s[j] / 64] |= 1u64 << (s[j] % 64);
            }
        }
        for j in 0..arity {
            let var = c.scope[j];
            if doms.restrict(var, &support[j * words..(j + 1) * words]) {
                if doms.is_empty(var) {
                    return false;
                }
                changed.push(var);
            }
        }
        true
    }

    /// Runs propagation to a fixpoint starting from the variables in
    /// `dirty`. Returns false on a wipe-out.
    fn propagate(&self, doms: &mut Domains, dirty: Vec<usize>) -> bool {
        let mut queue: Vec<usize> = Vec::new();
        let mut queued = vec![false; self.constraints.len()];
        let mut changed: Vec<usize> = dirty;
        loop {
            while let Some(var) = changed.pop() {
                for &c in &self.watch[var] {
                    if !queued[c] {
                        queued[c] = true;
                        queue.push(c);
                    }
                }
                if self.injective && doms.count(var) == 1 {
                    let val = doms.first(var).expect("non-empty");
                    for other in 0..self.vars {
                        if other != var && doms.remove(other, val) {
                            if doms.is_empty(other) {
                                return false;
                            }
                            changed.push(other);
                        }
                    }
                }
            }
            let Some(c) = queue.pop() else { break };
            queued[c] = false;
            if !self.revise(&self.constraints[c], doms, &mut changed) {
                return false;
            }
        }
        true
    }

    fn pick(&self, doms: &Domains) -> Option<usize> {
        match self.order {
            VarOrder::Static => (0..self.vars).find(|&v| doms.count(v) > 1),
            VarOrder::MinDomain => (0..self.vars)
                .map(|v| (doms.count(v), v))
                .filter(|&(c, _)| c > 1)
                .min()
                .map(|(_, v)| v),
        }
    }

    fn root(&self) -> Option<Domains> {
        if self.infeasible || (self.injective && self.vars > self.vals) {
            return None;
        }
        let mut doms = self.initial.clone();
        let all: Vec<usize> = (0..self.vars).collect();
        self.propagate(&mut doms, all).then_some(doms)
    }

    fn extract(&self, doms: &Domains) -> Vec<usize> {
        (0..self.vars)
            .map(|v| doms.first(v).expect("non-empty"))
            .collect()
    }

    fn search(&self, doms: Domains, visit: &mut dyn FnMut(Vec<usize>) -> bool) -> bool {
        let Some(var) = self.pick(&doms) else {
            return visit(self.extract(&doms));
        };
        for val in doms.values(var) {
            let mut next = doms.clone();
            next.set_single(var, val);
            if self.propagate(&mut next, vec![var]) && !self.search(next, visit) {
                return false;
            }
        }
        true
    }

    /// First solution in search order.
    pub(crate) fn first(&self) -> Option<Vec<usize>> {
        let doms = self.root()?;
        let mut found = None;
        self.search(doms, &mut |m| {
            found = Some(m);
            false
        });
        found
    }

    /// All solutions up to `limit`; the flag is true when truncated.
    pub(crate) fn all(&self, limit: usize) -> (Vec<Vec<usize>>, bool) {
        let mut out = Vec::new();
        let mut truncated = false;
        if let Some(doms) = self.root() {
            self.search(doms, &mut |m| {
                if out.len() == limit {
                    truncated = true;
                    return false;
                }
                out.push(m);
                true
            });
        }
        (out, truncated)
    }
}
