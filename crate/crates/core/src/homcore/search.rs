//! Backtracking homomorphism search with generalized arc consistency.

use fixedbitset::FixedBitSet;

use crate::budget::Budget;
use crate::error::Result;
use crate::structure::Structure;

pub(crate) struct Csp<'a> {
    src: &'a Structure,
    dst: &'a Structure,
    cons: Vec<(usize, &'a [usize])>,
    var_cons: Vec<Vec<usize>>,
    degree: Vec<usize>,
    strict: bool,
}

impl<'a> Csp<'a> {
    /// With `strict` unset, a variable repeated inside one fact is treated as
    /// independent copies; this is the propagation used for arc consistency.
    pub fn new(src: &'a Structure, dst: &'a Structure, strict: bool) -> Self {
        let mut cons = Vec::new();
        let mut var_cons = vec![Vec::new(); src.len()];
        for (r, t) in src.facts() {
            let c = cons.len();
            cons.push((r, t.as_slice()));
            for &v in t {
                if var_cons[v].last() != Some(&c) {
                    var_cons[v].push(c);
                }
            }
        }
        Csp {
            src,
            dst,
            cons,
            var_cons,
            degree: src.degrees(),
            strict,
        }
    }

    pub fn initial_domains(&self) -> Option<Vec<FixedBitSet>> {
        let m = self.dst.len();
        let mut full = FixedBitSet::with_capacity(m);
        full.insert_range(..);
        let mut doms = vec![full; self.src.len()];
        for (i, &d) in self.src.dist.iter().enumerate() {
            let mut only = FixedBitSet::with_capacity(m);
            only.insert(self.dst.dist[i]);
            doms[d].intersect_with(&only);
            if doms[d].is_clear() {
                return None;
            }
        }
        Some(doms)
    }

    fn revise(&self, c: usize, doms: &mut [FixedBitSet], changed: &mut Vec<usize>) -> bool {
        let (r, args) = self.cons[c];
        let rel = &self.dst.rels[r];
        let m = self.dst.len();
        let mut support = vec![FixedBitSet::with_capacity(m); args.len()];
        'tuples: for t in &rel.tuples {
            for (j, &x) in args.iter().enumerate() {
                if !doms[x].contains(t[j]) {
                    continue 'tuples;
                }
                if self.strict && args[..j].iter().zip(t).any(|(&y, &w)| y == x && w != t[j]) {
                    continue 'tuples;
                }
            }
            for (j, s) in support.iter_mut().enumerate() {
                s.insert(t[j]);
            }
        }
        for (j, &x) in args.iter().enumerate() {
            let before = doms[x].count_ones(..);
            doms[x].intersect_with(&support[j]);
            let after = doms[x].count_ones(..);
            if after == 0 {
                return false;
            }
            if after != before {
                changed.push(x);
            }
        }
        true
    }

    /// Runs propagation to a fixpoint starting from the given constraints.
    pub fn propagate(&self, doms: &mut [FixedBitSet], start: impl IntoIterator<Item = usize>, budget: &Budget) -> Result<bool> {
        let mut queued = vec![false; self.cons.len()];
        let mut queue: Vec<usize> = Vec::new();
        for c in start {
            if !queued[c] {
                queued[c] = true;
                queue.push(c);
            }
        }
        let mut changed = Vec::new();
        while let Some(c) = queue.pop() {
            queued[c] = false;
            budget.tick()?;
            changed.clear();
            if !self.revise(c, doms, &mut changed) {
                return Ok(false);
            }
            for &x in &changed {
                for &c2 in &self.var_cons[x] {
                    if !queued[c2] {
                        queued[c2] = true;
                        queue.push(c2);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn all_constraints(&self) -> std::ops::Range<usize> {
        0..self.cons.len()
    }

    fn solve(&self, doms: Vec<FixedBitSet>, budget: &Budget) -> Result<Option<Vec<usize>>> {
        budget.tick()?;
        let mut pick: Option<(usize, usize)> = None;
        for (x, d) in doms.iter().enumerate() {
            let size = d.count_ones(..);
            if size > 1 {
                let better = match pick {
                    None => true,
                    Some((y, best)) => size < best || (size == best && self.degree[x] > self.degree[y]),
                };
                if better {
                    pick = Some((x, size));
                }
            }
        }
        let Some((x, _)) = pick else {
            return Ok(Some(doms.iter().map(|d| d.ones().next().expect("non-empty domain")).collect()));
        };
        for v in doms[x].ones() {
            let mut next = doms.clone();
            next[x].clear();
            next[x].insert(v);
            if self.propagate(&mut next, self.var_cons[x].iter().copied(), budget)? {
                if let Some(sol) = self.solve(next, budget)? {
                    return Ok(Some(sol));
                }
            }
        }
        Ok(None)
    }
}

/// Finds a homomorphism as a vector indexed by source values.
pub(crate) fn find(src: &Structure, dst: &Structure, budget: &Budget) -> Result<Option<Vec<usize>>> {
    let csp = Csp::new(src, dst, true);
    let Some(mut doms) = csp.initial_domains() else {
        return Ok(None);
    };
    if !csp.propagate(&mut doms, csp.all_constraints(), budget)? {
        return Ok(None);
    }
    csp.solve(doms, budget)
}

pub(crate) fn exists(src: &Structure, dst: &Structure, budget: &Budget) -> Result<bool> {
    Ok(find(src, dst, budget)?.is_some())
}

/// Arc consistency with each fact position treated independently.
pub(crate) fn arc_consistent(src: &Structure, dst: &Structure, budget: &Budget) -> Result<bool> {
    let csp = Csp::new(src, dst, false);
    let Some(mut doms) = csp.initial_domains() else {
        return Ok(false);
    };
    csp.propagate(&mut doms, csp.all_constraints(), budget)
}
