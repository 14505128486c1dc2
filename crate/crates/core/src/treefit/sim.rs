//! Greatest simulations between instances over unary and binary relations.

use fixedbitset::FixedBitSet;

use crate::budget::Budget;
use crate::error::Result;
use crate::homcore::fold_dominated;
use crate::structure::Structure;

struct Adjacency {
    /// Unary relations holding at each value.
    labels: Vec<Vec<usize>>,
    /// `(relation, neighbor)` pairs along forward facts.
    out: Vec<Vec<(usize, usize)>>,
    /// `(relation, neighbor)` pairs along backward facts.
    inc: Vec<Vec<(usize, usize)>>,
}

impl Adjacency {
    fn new(s: &Structure) -> Self {
        let n = s.len();
        let mut adj = Adjacency {
            labels: vec![Vec::new(); n],
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
        };
        for (r, t) in s.facts() {
            match t.as_slice() {
                [a] => adj.labels[*a].push(r),
                [a, b] => {
                    adj.out[*a].push((r, *b));
                    adj.inc[*b].push((r, *a));
                }
                _ => {}
            }
        }
        adj
    }
}

/// Greatest simulation of `a` in `b`: entry `u` holds every value of `b`
/// that simulates `u`.
pub(crate) fn greatest(a: &Structure, b: &Structure, budget: &Budget) -> Result<Vec<FixedBitSet>> {
    let (n, m) = (a.len(), b.len());
    let src = Adjacency::new(a);
    let dst = Adjacency::new(b);
    let rels = a.rels.len();
    // Forward and backward neighbor sets of each target value per relation.
    let mut succ = vec![vec![FixedBitSet::with_capacity(m); rels]; m];
    let mut pred = vec![vec![FixedBitSet::with_capacity(m); rels]; m];
    for w in 0..m {
        for &(r, x) in &dst.out[w] {
            succ[w][r].insert(x);
        }
        for &(r, x) in &dst.inc[w] {
            pred[w][r].insert(x);
        }
    }
    let mut sim: Vec<FixedBitSet> = (0..n)
        .map(|u| {
            let mut row = FixedBitSet::with_capacity(m);
            for w in 0..m {
                if src.labels[u].iter().all(|l| dst.labels[w].contains(l)) {
                    row.insert(w);
                }
            }
            row
        })
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for u in 0..n {
            budget.tick()?;
            let candidates: Vec<usize> = sim[u].ones().collect();
            for w in candidates {
                let forward = src.out[u].iter().all(|&(r, x)| !sim[x].is_disjoint(&succ[w][r]));
                let backward = forward && src.inc[u].iter().all(|&(r, x)| !sim[x].is_disjoint(&pred[w][r]));
                if !backward {
                    sim[u].set(w, false);
                    changed = true;
                }
            }
        }
    }
    Ok(sim)
}

/// Every distinguished value of `a` is simulated by the one of `b` at the
/// same position.
pub(crate) fn simulated(a: &Structure, b: &Structure, budget: &Budget) -> Result<bool> {
    let sim = greatest(a, b, budget)?;
    Ok(a.dist.iter().zip(&b.dist).all(|(&u, &w)| sim[u].contains(w)))
}

/// A simulation-equivalent reduct of `s`: the values connected to a
/// distinguished one (all values if there are none), with dominated values
/// folded away and values that simulate each other merged.
pub(crate) fn reduce(s: &Structure, budget: &Budget) -> Result<Structure> {
    let mut cur = if s.dist.is_empty() { s.clone() } else { s.restrict(&connected(s)) };
    loop {
        let folded = fold_dominated(&cur, budget)?;
        let sim = greatest(&folded, &folded, budget)?;
        let class: Vec<usize> = (0..folded.len())
            .map(|u| sim[u].ones().find(|&w| sim[w].contains(u)).unwrap_or(u))
            .collect();
        let next = folded.image_of(&folded, &class);
        if next.len() == cur.len() {
            return Ok(next);
        }
        cur = next;
    }
}

fn connected(s: &Structure) -> Vec<bool> {
    let adj = Adjacency::new(s);
    let mut seen = vec![false; s.len()];
    let mut stack: Vec<usize> = s.dist.clone();
    while let Some(u) = stack.pop() {
        if std::mem::replace(&mut seen[u], true) {
            continue;
        }
        stack.extend(adj.out[u].iter().chain(&adj.inc[u]).map(|&(_, x)| x).filter(|&x| !seen[x]));
    }
    seen
}
