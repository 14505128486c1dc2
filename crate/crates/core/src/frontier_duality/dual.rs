//! Obstruction duals of c-acyclic pointed instances.
//!
//! Distinguished values are cut at every occurrence and each copy is marked
//! with unary markers, one per answer position. The result is a forest, and
//! each tree `T` of it gets the classical dual: its values are the functions
//! choosing, for every value of `T`, a fact of `T` containing it; a tuple is a
//! fact of the dual unless some fact `R(u1..un)` of `T` is chosen by all of
//! `f1(u1), .., fn(un)`. Pointed members are read off by picking, for each
//! position, a value carrying that position's marker.

use super::{c_acyclic, maximal_elements, DualitySide};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::homcore::core_of;
use crate::model::PointedInstance;
use crate::structure::{Relation, Structure};

/// A set `D` such that, for every pointed instance `x`, `x` maps into some
/// member of `D` iff `e` does not map into `x`.
pub fn single_obstruction_dual(e: &PointedInstance, budget: &Budget) -> Result<DualitySide> {
    let s = Structure::from_instance(e);
    if !c_acyclic(&s) {
        return Err(Error::NotCAcyclic);
    }
    let members = dual_structures(&s, budget)?;
    DualitySide::new(
        e.schema().clone(),
        e.arity(),
        members.iter().map(|m| m.to_instance(e.schema())).collect(),
    )
}

struct Forest {
    n: usize,
    /// (relation index, arguments); marker relations follow the schema relations.
    facts: Vec<(usize, Vec<usize>)>,
}

fn cut_at_answers(s: &Structure) -> Forest {
    let base = s.rels.len();
    let fixed = s.is_distinguished();
    let mut ids = vec![usize::MAX; s.len()];
    let mut n = 0;
    let mut facts = Vec::new();
    let mut markers = Vec::new();
    let mark = |v: usize, n: &mut usize, markers: &mut Vec<(usize, Vec<usize>)>| {
        let c = *n;
        *n += 1;
        for (i, &d) in s.dist.iter().enumerate() {
            if d == v {
                markers.push((base + i, vec![c]));
            }
        }
        c
    };
    for (r, t) in s.facts() {
        let args = t
            .iter()
            .map(|&v| {
                if fixed[v] {
                    mark(v, &mut n, &mut markers)
                } else {
                    if ids[v] == usize::MAX {
                        ids[v] = n;
                        n += 1;
                    }
                    ids[v]
                }
            })
            .collect();
        facts.push((r, args));
    }
    let in_adom = s.in_adom();
    let mut done = vec![false; s.len()];
    for &d in &s.dist {
        let repeats = s.dist.iter().filter(|&&x| x == d).count();
        if !in_adom[d] && repeats > 1 && !done[d] {
            done[d] = true;
            mark(d, &mut n, &mut markers);
        }
    }
    facts.extend(markers);
    Forest { n, facts }
}

fn components(forest: &Forest) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..forest.n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (_, t) in &forest.facts {
        for w in t.windows(2) {
            let (a, b) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, (_, t)) in forest.facts.iter().enumerate() {
        if let Some(&v) = t.first() {
            by_root.entry(root(&mut parent, v)).or_default().push(i);
        }
    }
    by_root.into_values().collect()
}

/// Dual of one tree, over the schema relations followed by the markers.
fn tree_dual(forest: &Forest, fact_ids: &[usize], arities: &[usize], budget: &Budget) -> Result<Structure> {
    let mut values: Vec<usize> = fact_ids.iter().flat_map(|&i| forest.facts[i].1.iter().copied()).collect();
    values.sort_unstable();
    values.dedup();
    let local = |v: usize| values.binary_search(&v).expect("value of the tree");
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); values.len()];
    for &i in fact_ids {
        for &v in &forest.facts[i].1 {
            let l = local(v);
            if incident[l].last() != Some(&i) {
                incident[l].push(i);
            }
        }
    }
    let count: usize = incident.iter().map(Vec::len).product();
    budget.charge(count as u64)?;
    // choice[f][l] = fact chosen by vertex f for local value l
    let mut choice: Vec<Vec<usize>> = Vec::with_capacity(count);
    let mut cur = vec![0usize; values.len()];
    loop {
        choice.push(cur.iter().enumerate().map(|(l, &k)| incident[l][k]).collect());
        let mut p = values.len();
        let mut advanced = false;
        while p > 0 {
            p -= 1;
            cur[p] += 1;
            if cur[p] < incident[p].len() {
                advanced = true;
                break;
            }
            cur[p] = 0;
        }
        if !advanced {
            break;
        }
    }
    let mut rels: Vec<Relation> = arities.iter().map(|&a| Relation::new(a)).collect();
    for (r, rel) in rels.iter_mut().enumerate() {
        let a = rel.arity;
        let blockers: Vec<&Vec<usize>> = fact_ids
            .iter()
            .filter(|&&i| forest.facts[i].0 == r)
            .map(|&i| &forest.facts[i].1)
            .collect();
        let blocker_ids: Vec<usize> = fact_ids.iter().copied().filter(|&i| forest.facts[i].0 == r).collect();
        let total = count.checked_pow(a as u32).unwrap_or(usize::MAX);
        budget.charge(total as u64)?;
        let mut t = vec![0usize; a];
        'tuples: for mut code in 0..total {
            for slot in t.iter_mut().rev() {
                *slot = code % count;
                code /= count;
            }
            for (b, args) in blocker_ids.iter().zip(&blockers) {
                if args.iter().enumerate().all(|(j, &u)| choice[t[j]][local(u)] == *b) {
                    continue 'tuples;
                }
            }
            rel.insert(t.clone());
        }
    }
    Ok(Structure {
        names: (0..count).map(|i| format!("d{i}")).collect(),
        rels,
        dist: Vec::new(),
    })
}

/// Pointed dual members as cores, pairwise hom-incomparable.
pub(crate) fn dual_structures(s: &Structure, budget: &Budget) -> Result<Vec<Structure>> {
    maximal_elements(pointed_duals(s, budget, &|d| core_of(d, budget))?, budget)
}

/// Pointed dual members, each passed through `shrink`, which must preserve
/// the relevant notion of equivalence. The dual of each tree is shrunk
/// before it is pointed.
pub(crate) fn pointed_duals(
    s: &Structure,
    budget: &Budget,
    shrink: &dyn Fn(&Structure) -> Result<Structure>,
) -> Result<Vec<Structure>> {
    let base = s.rels.len();
    let k = s.dist.len();
    let forest = cut_at_answers(s);
    let arities: Vec<usize> = s.rels.iter().map(|r| r.arity).chain(std::iter::repeat_n(1, k)).collect();
    let mut members = Vec::new();
    for comp in components(&forest) {
        let dual = shrink(&tree_dual(&forest, &comp, &arities, budget)?)?;
        let carriers: Vec<Vec<usize>> = (0..k)
            .map(|i| dual.rels[base + i].tuples.iter().map(|t| t[0]).collect())
            .collect();
        let plain = Structure {
            names: dual.names.clone(),
            rels: dual.rels[..base].to_vec(),
            dist: Vec::new(),
        };
        let mut pick = vec![0usize; k];
        if carriers.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            let mut m = plain.clone();
            m.dist = pick.iter().enumerate().map(|(i, &j)| carriers[i][j]).collect();
            budget.tick()?;
            members.push(shrink(&m)?);
            let mut p = k;
            let mut advanced = false;
            while p > 0 {
                p -= 1;
                pick[p] += 1;
                if pick[p] < carriers[p].len() {
                    advanced = true;
                    break;
                }
                pick[p] = 0;
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(members)
}
