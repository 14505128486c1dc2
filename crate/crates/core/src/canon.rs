//! Canonical labelings by color refinement and individualization.

use crate::structure::{Relation, Structure};

/// Isomorphism-invariant encoding: value count, sorted facts, distinguished tuple.
pub(crate) type CanonKey = (usize, Vec<(usize, Vec<usize>)>, Vec<usize>);

fn ranks<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(s).expect("present")).collect()
}

fn num_classes(colors: &[usize]) -> usize {
    let mut c: Vec<usize> = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Occurrences {
    /// For each value: (relation, position, fact index).
    occ: Vec<Vec<(usize, usize, usize)>>,
    facts: Vec<(usize, Vec<usize>)>,
}

impl Occurrences {
    fn new(s: &Structure) -> Self {
        let facts: Vec<(usize, Vec<usize>)> = s.facts().map(|(r, t)| (r, t.clone())).collect();
        let mut occ = vec![Vec::new(); s.len()];
        for (i, (r, t)) in facts.iter().enumerate() {
            for (p, &v) in t.iter().enumerate() {
                occ[v].push((*r, p, i));
            }
        }
        Occurrences { occ, facts }
    }
}

fn refine(occ: &Occurrences, mut colors: Vec<usize>) -> Vec<usize> {
    let mut classes = num_classes(&colors);
    loop {
        let sigs: Vec<(usize, Vec<(usize, usize, Vec<usize>)>)> = (0..colors.len())
            .map(|v| {
                let mut around: Vec<(usize, usize, Vec<usize>)> = occ.occ[v]
                    .iter()
                    .map(|&(r, p, i)| (r, p, occ.facts[i].1.iter().map(|&w| colors[w]).collect()))
                    .collect();
                around.sort();
                (colors[v], around)
            })
            .collect();
        colors = ranks(&sigs);
        let now = num_classes(&colors);
        if now == classes {
            return colors;
        }
        classes = now;
    }
}

fn encode(s: &Structure, occ: &Occurrences, label: &[usize]) -> CanonKey {
    let mut facts: Vec<(usize, Vec<usize>)> = occ
        .facts
        .iter()
        .map(|(r, t)| (*r, t.iter().map(|&v| label[v]).collect()))
        .collect();
    facts.sort();
    (s.len(), facts, s.dist.iter().map(|&d| label[d]).collect())
}

fn search(s: &Structure, occ: &Occurrences, colors: Vec<usize>, best: &mut Option<(CanonKey, Vec<usize>)>) {
    let colors = refine(occ, colors);
    let n = colors.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    let Some(cell) = (0..n).find(|&c| counts[c] > 1) else {
        let key = encode(s, occ, &colors);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            *best = Some((key, colors));
        }
        return;
    };
    for w in (0..n).filter(|&v| colors[v] == cell) {
        let sigs: Vec<(usize, bool)> = (0..n).map(|v| (colors[v], !(v == w))).collect();
        search(s, occ, ranks(&sigs), best);
    }
}

/// Canonical key and a labeling realizing it.
pub(crate) fn canonical_labeling(s: &Structure) -> (CanonKey, Vec<usize>) {
    let occ = Occurrences::new(s);
    let initial: Vec<(Vec<usize>, usize)> = (0..s.len())
        .map(|v| {
            let pos: Vec<usize> = s.dist.iter().enumerate().filter(|(_, &d)| d == v).map(|(i, _)| i).collect();
            (pos, occ.occ[v].len())
        })
        .collect();
    let mut best = None;
    search(s, &occ, ranks(&initial), &mut best);
    best.expect("at least one leaf")
}

pub(crate) fn canonical_key(s: &Structure) -> CanonKey {
    canonical_labeling(s).0
}

/// Copy of `s` with values renamed `v0, v1, ..` in canonical order.
pub(crate) fn canonical_form(s: &Structure) -> Structure {
    let (key, _) = canonical_labeling(s);
    from_key(&key, s.rels.iter().map(|r| r.arity).collect())
}

pub(crate) fn value_name(i: usize) -> String {
    format!("v{i}")
}

pub(crate) fn from_key(key: &CanonKey, arities: Vec<usize>) -> Structure {
    let (n, facts, dist) = key;
    let mut rels: Vec<Relation> = arities.into_iter().map(Relation::new).collect();
    for (r, t) in facts {
        rels[*r].insert(t.clone());
    }
    Structure {
        names: (0..*n).map(value_name).collect(),
        rels,
        dist: dist.clone(),
    }
}

pub(crate) fn isomorphic(a: &Structure, b: &Structure) -> bool {
    a.len() == b.len() && a.num_facts() == b.num_facts() && canonical_key(a) == canonical_key(b)
}
