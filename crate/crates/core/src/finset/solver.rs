//! Backtracking search over functional constraints `out = op(args..)`.
//!
//! Every finite limit in the crate (comma-category limits, hom-objects over a
//! monoid or an operad, audits of natural transformations) compiles to a
//! network of such constraints. Propagation is generalized arc consistency
//! for small constraints and forward checking for large ones; branching picks
//! the unassigned variable with the smallest domain.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Constraints whose argument space exceeds this are only forward-checked.
const GAC_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Domain {
    words: Vec<u64>,
    count: usize,
}

impl Domain {
    fn full(size: usize) -> Self {
        let mut words = vec![0u64; size.div_ceil(64)];
        for v in 0..size {
            words[v / 64] |= 1 << (v % 64);
        }
        Domain { words, count: size }
    }

    fn empty_like(&self) -> Self {
        Domain {
            words: vec![0; self.words.len()],
            count: 0,
        }
    }

    fn contains(&self, v: usize) -> bool {
        v / 64 < self.words.len() && self.words[v / 64] & (1 << (v % 64)) != 0
    }

    fn insert(&mut self, v: usize) {
        if !self.contains(v) {
            self.words[v / 64] |= 1 << (v % 64);
            self.count += 1;
        }
    }

    fn values(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count);
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    fn single(&self) -> Option<usize> {
        if self.count == 1 {
            self.values().first().copied()
        } else {
            None
        }
    }

    fn set_single(&mut self, v: usize) {
        self.words.iter_mut().for_each(|w| *w = 0);
        self.words[v / 64] |= 1 << (v % 64);
        self.count = 1;
    }

    /// Intersects in place; returns whether anything was removed.
    fn intersect(&mut self, other: &Domain) -> bool {
        let mut changed = false;
        let mut count = 0;
        for (a, &b) in self.words.iter_mut().zip(&other.words) {
            let n = *a & b;
            changed |= n != *a;
            *a = n;
            count += n.count_ones() as usize;
        }
        self.count = count;
        changed
    }
}

/// `out = table[rank(args)]` where the rank is mixed-radix over the argument
/// variables' domain sizes, first argument most significant.
#[derive(Debug, Clone)]
struct Constraint {
    args: Vec<usize>,
    out: usize,
    table: Vec<usize>,
    /// Distinct argument variables and, per argument position, its slot among them.
    distinct: Vec<usize>,
    slot: Vec<usize>,
}

impl Constraint {
    fn eval(&self, sizes: &[usize], args: impl Iterator<Item = usize>) -> usize {
        let mut rank = 0usize;
        for (pos, v) in args.enumerate() {
            rank = rank * sizes[self.args[pos]] + v;
        }
        self.table[rank]
    }
}

/// A network of functional constraints over finite-domain variables.
#[derive(Debug, Clone)]
pub struct Network {
    sizes: Vec<usize>,
    initial: Vec<Domain>,
    constraints: Vec<Constraint>,
    watchers: Vec<Vec<usize>>,
}

impl Network {
    pub fn new(sizes: Vec<usize>) -> Self {
        let initial = sizes.iter().map(|&s| Domain::full(s)).collect();
        let watchers = vec![Vec::new(); sizes.len()];
        Network {
            sizes,
            initial,
            constraints: Vec::new(),
            watchers,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Removes every value of `var` rejected by `keep`.
    pub fn restrict(&mut self, var: usize, keep: impl Fn(usize) -> bool) {
        let dom = &mut self.initial[var];
        let mut next = dom.empty_like();
        for v in dom.values() {
            if keep(v) {
                next.insert(v);
            }
        }
        *dom = next;
    }

    /// Adds `out = table[rank(args)]`.
    pub fn add(&mut self, args: Vec<usize>, out: usize, table: Vec<usize>) -> Result<()> {
        let expected: usize = args.iter().map(|&a| self.sizes[a]).product();
        if table.len() != expected {
            return Err(Error::Structural(format!(
                "constraint table has {} entries, argument space has {expected}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v >= self.sizes[out]) {
            return Err(Error::Structural(format!(
                "constraint value {bad} outside a domain of size {}",
                self.sizes[out]
            )));
        }
        let mut distinct: Vec<usize> = Vec::new();
        let slot = args
            .iter()
            .map(|a| match distinct.iter().position(|d| d == a) {
                Some(p) => p,
                None => {
                    distinct.push(*a);
                    distinct.len() - 1
                }
            })
            .collect();
        let idx = self.constraints.len();
        for &v in distinct.iter().chain(std::iter::once(&out)) {
            if !self.watchers[v].contains(&idx) {
                self.watchers[v].push(idx);
            }
        }
        self.constraints.push(Constraint {
            args,
            out,
            table,
            distinct,
            slot,
        });
        Ok(())
    }

    /// Whether a complete assignment satisfies every constraint.
    pub fn satisfied_by(&self, values: &[usize]) -> bool {
        values.len() == self.sizes.len()
            && values.iter().zip(&self.initial).all(|(&v, d)| d.contains(v))
            && self
                .constraints
                .iter()
                .all(|c| c.eval(&self.sizes, c.args.iter().map(|&a| values[a])) == values[c.out])
    }

    /// All solutions, sorted lexicographically. Fails once `solutions × vars`
    /// exceeds `cell_cap`.
    pub fn solve(&self, cell_cap: u128, what: &str) -> Result<Vec<Vec<usize>>> {
        let width = self.sizes.len().max(1) as u128;
        let max_solutions = cell_cap / width;
        let mut doms = self.initial.clone();
        let mut out = Vec::new();
        if self.propagate(&mut doms, None) {
            let mut search = Search {
                net: self,
                solutions: &mut out,
                max_solutions,
                stop_after: None,
            };
            search
                .run::<rand_chacha::ChaCha8Rng>(doms, None)
                .map_err(|_| Error::too_large(what, format!("more than {max_solutions} solutions"), cell_cap))?;
        }
        out.sort();
        for s in &out {
            if !self.satisfied_by(s) {
                return Err(Error::Internal(format!("solver produced a non-solution {s:?}")));
            }
        }
        Ok(out)
    }

    /// Up to `count` distinct solutions found by randomized depth-first search.
    pub fn sample<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut doms = self.initial.clone();
        if !self.propagate(&mut doms, None) {
            return found;
        }
        for _ in 0..count.saturating_mul(4) {
            if found.len() >= count {
                break;
            }
            let mut one = Vec::new();
            let mut search = Search {
                net: self,
                solutions: &mut one,
                max_solutions: u128::MAX,
                stop_after: Some(1),
            };
            if search.run(doms.clone(), Some(&mut *rng)).is_err() {
                break;
            }
            match one.pop() {
                Some(s) if !found.contains(&s) => found.push(s),
                Some(_) => {}
                None => break,
            }
        }
        found.sort();
        found
    }

    /// Runs propagation to a fixpoint. Returns `false` on a wipe-out.
    fn propagate(&self, doms: &mut [Domain], touched: Option<usize>) -> bool {
        let mut queue: VecDeque<usize> = VecDeque::new();
        let mut queued = vec![false; self.constraints.len()];
        match touched {
            Some(v) => {
                for &c in &self.watchers[v] {
                    queued[c] = true;
                    queue.push_back(c);
                }
            }
            None => {
                queue.extend(0..self.constraints.len());
                queued.iter_mut().for_each(|q| *q = true);
            }
        }
        if doms.iter().any(|d| d.count == 0) {
            return false;
        }
        while let Some(ci) = queue.pop_front() {
            queued[ci] = false;
            let changed = match self.revise(&self.constraints[ci], doms) {
                Some(changed) => changed,
                None => return false,
            };
            for v in changed {
                for &c in &self.watchers[v] {
                    if c != ci && !queued[c] {
                        queued[c] = true;
                        queue.push_back(c);
                    }
                }
            }
        }
        true
    }

    /// Prunes unsupported values; `None` signals an emptied domain.
    fn revise(&self, c: &Constraint, doms: &mut [Domain]) -> Option<Vec<usize>> {
        let space = c
            .distinct
            .iter()
            .try_fold(1usize, |acc, &v| acc.checked_mul(doms[v].count));
        let out_slot = c.distinct.iter().position(|&v| v == c.out);
        match space {
            Some(space) if space <= GAC_LIMIT => {
                let values: Vec<Vec<usize>> = c.distinct.iter().map(|&v| doms[v].values()).collect();
                let mut support: Vec<Domain> = c.distinct.iter().map(|&v| doms[v].empty_like()).collect();
                let mut out_support = doms[c.out].empty_like();
                let mut idx = vec![0usize; values.len()];
                if values.iter().all(|v| !v.is_empty()) {
                    loop {
                        let assign: Vec<usize> = idx.iter().zip(&values).map(|(&i, vs)| vs[i]).collect();
                        let o = c.eval(&self.sizes, c.slot.iter().map(|&s| assign[s]));
                        let ok = match out_slot {
                            Some(s) => assign[s] == o,
                            None => doms[c.out].contains(o),
                        };
                        if ok {
                            for (k, &a) in assign.iter().enumerate() {
                                support[k].insert(a);
                            }
                            out_support.insert(o);
                        }
                        if !advance(&mut idx, &values) {
                            break;
                        }
                    }
                }
                let mut changed = Vec::new();
                for (k, &v) in c.distinct.iter().enumerate() {
                    if doms[v].intersect(&support[k]) {
                        changed.push(v);
                    }
                    if doms[v].count == 0 {
                        return None;
                    }
                }
                if out_slot.is_none() {
                    if doms[c.out].intersect(&out_support) {
                        changed.push(c.out);
                    }
                    if doms[c.out].count == 0 {
                        return None;
                    }
                }
                Some(changed)
            }
            _ => {
                let singles: Option<Vec<usize>> = c.distinct.iter().map(|&v| doms[v].single()).collect();
                let Some(assign) = singles else {
                    return Some(Vec::new());
                };
                let o = c.eval(&self.sizes, c.slot.iter().map(|&s| assign[s]));
                if !doms[c.out].contains(o) {
                    return None;
                }
                if doms[c.out].count > 1 {
                    doms[c.out].set_single(o);
                    Some(vec![c.out])
                } else {
                    Some(Vec::new())
                }
            }
        }
    }
}

/// Steps a mixed-radix counter; `false` once it wraps around.
fn advance(idx: &mut [usize], values: &[Vec<usize>]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < values[k].len() {
            return true;
        }
        idx[k] = 0;
    }
    false
}

struct Search<'a> {
    net: &'a Network,
    solutions: &'a mut Vec<Vec<usize>>,
    max_solutions: u128,
    stop_after: Option<usize>,
}

impl Search<'_> {
    /// Returns `Ok(true)` when the search should stop early.
    fn run<R: Rng>(&mut self, doms: Vec<Domain>, mut rng: Option<&mut R>) -> Result<bool> {
        let branch = doms
            .iter()
            .enumerate()
            .filter(|(_, d)| d.count > 1)
            .min_by_key(|(i, d)| (d.count, *i))
            .map(|(i, _)| i);
        let Some(var) = branch else {
            let sol: Vec<usize> = doms.iter().map(|d| d.single().unwrap_or(0)).collect();
            self.solutions.push(sol);
            if self.solutions.len() as u128 > self.max_solutions {
                return Err(Error::too_large("limit", "solution table", self.max_solutions));
            }
            return Ok(self.stop_after.is_some_and(|n| self.solutions.len() >= n));
        };
        let mut values = doms[var].values();
        if let Some(r) = rng.as_deref_mut() {
            values.shuffle(r);
        }
        for v in values {
            let mut next = doms.clone();
            next[var].set_single(v);
            if self.net.propagate(&mut next, Some(var)) && self.run(next, rng.as_deref_mut())? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
