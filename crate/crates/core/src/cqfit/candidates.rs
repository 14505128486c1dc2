//! Enumeration of c-acyclic conjunctive queries by growing one fact at a time.

use std::collections::{HashSet, VecDeque};

use crate::budget::Budget;
use crate::canon::{canonical_key, from_key, value_name, CanonKey};
use crate::error::Result;
use crate::structure::{Relation, Structure};

/// Bounds on generated queries.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bounds {
    pub max_vars: usize,
    /// Largest number of fg-connected components.
    pub max_components: usize,
    /// Largest number of fact occurrences of an existential variable.
    pub max_degree: usize,
}

/// Generates c-acyclic queries up to isomorphism, one level per variable count.
///
/// The filter must reject every extension of a rejected query.
pub(crate) struct Generator<'a> {
    arities: Vec<usize>,
    bounds: Bounds,
    filter: Box<dyn Fn(&Structure) -> Result<bool> + 'a>,
    seeds: Vec<Vec<Structure>>,
    /// The most recent levels, newest last.
    window: VecDeque<Vec<Structure>>,
    next_vars: usize,
}

impl<'a> Generator<'a> {
    pub fn new(
        arities: Vec<usize>,
        arity: usize,
        bounds: Bounds,
        filter: impl Fn(&Structure) -> Result<bool> + 'a,
    ) -> Self {
        let seeds = seeds(&arities, arity);
        Generator {
            arities,
            bounds,
            filter: Box::new(filter),
            seeds,
            window: VecDeque::new(),
            next_vars: 0,
        }
    }

    /// All queries with the next variable count, ordered by fact count and
    /// then by canonical encoding. `None` once the bound is passed.
    pub fn next_level(&mut self, budget: &Budget) -> Result<Option<Vec<Structure>>> {
        let v = self.next_vars;
        if v > self.bounds.max_vars {
            return Ok(None);
        }
        self.next_vars += 1;
        let mut seen: HashSet<CanonKey> = HashSet::new();
        let mut level: Vec<(CanonKey, Structure)> = Vec::new();
        let mut queue: VecDeque<Structure> = VecDeque::new();
        let mut admit = |s: Structure, level: &mut Vec<(CanonKey, Structure)>, queue: &mut VecDeque<Structure>| -> Result<()> {
            budget.tick()?;
            if !(self.filter)(&s)? {
                return Ok(());
            }
            let key = canonical_key(&s);
            if seen.insert(key.clone()) {
                let canon = from_key(&key, self.arities.clone());
                queue.push_back(canon.clone());
                level.push((key, canon));
            }
            Ok(())
        };
        if let Some(seeds) = self.seeds.get_mut(v) {
            for s in std::mem::take(seeds) {
                admit(s, &mut level, &mut queue)?;
            }
        }
        let depth = self.window.len();
        for (age, older) in self.window.iter().enumerate() {
            let fresh = depth - age;
            for s in older {
                for t in extensions(s, &self.arities, fresh, self.bounds) {
                    admit(t, &mut level, &mut queue)?;
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            for t in extensions(&s, &self.arities, 0, self.bounds) {
                admit(t, &mut level, &mut queue)?;
            }
        }
        level.sort_by(|a, b| (a.0 .1.len(), &a.0).cmp(&(b.0 .1.len(), &b.0)));
        let level: Vec<Structure> = level.into_iter().map(|(_, s)| s).collect();
        self.window.push_back(level.clone());
        if self.window.len() > self.arities.iter().copied().max().unwrap_or(0) {
            self.window.pop_front();
        }
        Ok(Some(level))
    }
}

/// Fact-free queries grouped by variable count, one per equality pattern on
/// the answer tuple.
fn seeds(arities: &[usize], arity: usize) -> Vec<Vec<Structure>> {
    let mut patterns: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for p in &patterns {
            let classes = p.iter().copied().max().map_or(0, |m| m + 1);
            for c in 0..=classes {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        patterns = next;
    }
    let mut by_vars: Vec<Vec<Structure>> = vec![Vec::new(); arity + 1];
    for dist in patterns {
        let n = dist.iter().copied().max().map_or(0, |m| m + 1);
        by_vars[n].push(Structure {
            names: (0..n).map(value_name).collect(),
            rels: arities.iter().map(|&a| Relation::new(a)).collect(),
            dist,
        });
    }
    by_vars
}

/// Queries obtained from `s` by adding one fact that introduces exactly
/// `fresh` new variables and keeps the query c-acyclic and within bounds.
fn extensions(s: &Structure, arities: &[usize], fresh: usize, bounds: Bounds) -> Vec<Structure> {
    let n = s.len();
    let answer = s.is_distinguished();
    let comp = components(s, &answer);
    let mut out = Vec::new();
    for (r, &a) in arities.iter().enumerate() {
        if a < fresh {
            continue;
        }
        let mut t = vec![0usize; a];
        fill(s, r, &mut t, 0, n, fresh, 0, &answer, &comp, bounds, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    s: &Structure,
    r: usize,
    t: &mut Vec<usize>,
    pos: usize,
    n: usize,
    fresh: usize,
    used_fresh: usize,
    answer: &[bool],
    comp: &[usize],
    bounds: Bounds,
    out: &mut Vec<Structure>,
) {
    if pos == t.len() {
        if used_fresh == fresh {
            if let Some(next) = add_fact(s, r, t, n + fresh, answer, comp, bounds) {
                out.push(next);
            }
        }
        return;
    }
    let remaining = t.len() - pos;
    if fresh - used_fresh > remaining {
        return;
    }
    for v in 0..n {
        t[pos] = v;
        fill(s, r, t, pos + 1, n, fresh, used_fresh, answer, comp, bounds, out);
    }
    if used_fresh < fresh {
        t[pos] = n + used_fresh;
        fill(s, r, t, pos + 1, n, fresh, used_fresh + 1, answer, comp, bounds, out);
    }
}

/// Component of each existential variable, where two variables are joined
/// when they share a fact.
fn components(s: &Structure, answer: &[bool]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..s.len()).collect();
    for (_, t) in s.facts() {
        let mut first = None;
        for &v in t {
            if answer[v] {
                continue;
            }
            match first {
                None => first = Some(v),
                Some(f) => {
                    let (a, b) = (root(&mut parent, f), root(&mut parent, v));
                    parent[a] = b;
                }
            }
        }
    }
    (0..s.len()).map(|v| root(&mut parent, v)).collect()
}

fn root(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn add_fact(
    s: &Structure,
    r: usize,
    t: &[usize],
    total: usize,
    answer: &[bool],
    comp: &[usize],
    bounds: Bounds,
) -> Option<Structure> {
    let n = s.len();
    if s.rels[r].contains(t) {
        return None;
    }
    let mut comps_hit: Vec<usize> = Vec::new();
    let mut vars_hit: Vec<usize> = Vec::new();
    for &v in t {
        if v < n && answer[v] {
            continue;
        }
        if vars_hit.contains(&v) {
            return None;
        }
        vars_hit.push(v);
        if v < n {
            if comps_hit.contains(&comp[v]) {
                return None;
            }
            comps_hit.push(comp[v]);
        }
    }
    let mut next = s.clone();
    for i in n..total {
        next.names.push(value_name(i));
    }
    next.rels[r].insert(t.to_vec());
    let mut is_answer = answer.to_vec();
    is_answer.resize(total, false);
    let degrees = next.degrees();
    if (0..total).any(|v| !is_answer[v] && degrees[v] > bounds.max_degree) {
        return None;
    }
    if fg_components(&next, &is_answer) > bounds.max_components {
        return None;
    }
    Some(next)
}

/// Number of fg-connected components: facts joined through shared
/// existential variables.
fn fg_components(s: &Structure, answer: &[bool]) -> usize {
    let comp = components(s, answer);
    let mut roots: HashSet<usize> = HashSet::new();
    let mut answer_only = 0;
    for (_, t) in s.facts() {
        match t.iter().find(|&&v| !answer[v]) {
            Some(&v) => {
                roots.insert(comp[v]);
            }
            None => answer_only += 1,
        }
    }
    roots.len() + answer_only
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(arities: Vec<usize>, arity: usize, bounds: Bounds) -> Vec<Vec<Structure>> {
        let b = Budget::default();
        let mut g = Generator::new(arities, arity, bounds, |_| Ok(true));
        let mut out = Vec::new();
        while let Some(level) = g.next_level(&b).unwrap() {
            out.push(level);
        }
        out
    }

    #[test]
    fn boolean_digraph_trees() {
        let bounds = Bounds {
            max_vars: 3,
            max_components: 1,
            max_degree: 10,
        };
        let levels = all(vec![2], 0, bounds);
        let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
        // Empty query; one edge; the three oriented paths of length two.
        assert_eq!(counts, vec![1, 0, 1, 3]);
    }

    #[test]
    fn unary_answer_patterns() {
        let bounds = Bounds {
            max_vars: 1,
            max_components: 2,
            max_degree: 10,
        };
        let levels = all(vec![2], 1, bounds);
        // q(x) with no facts, and q(x) :- R(x,x).
        assert_eq!(levels[1].len(), 2);
    }

    #[test]
    fn generated_queries_are_c_acyclic() {
        let bounds = Bounds {
            max_vars: 4,
            max_components: 2,
            max_degree: 3,
        };
        for level in all(vec![1, 2], 1, bounds) {
            for s in level {
                assert!(crate::frontier_duality::c_acyclic(&s));
            }
        }
    }
}
