//! Frontier construction for queries whose core is c-acyclic.

use std::collections::{BTreeMap, BTreeSet};

use super::{c_acyclic, Frontier};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::homcore::{core_of, product2};
use crate::model::{ConjunctiveQuery, Fact, PointedInstance};
use crate::structure::{Relation, Structure};

/// Frontier of the core of `q`.
///
/// Members may be unsafe: an answer variable of a member need not occur in
/// its body.
pub fn frontier(q: &ConjunctiveQuery, budget: &Budget) -> Result<Frontier> {
    let schema = q.schema().clone();
    let core = core_of(&Structure::from_instance(q.body()), budget)?;
    if !c_acyclic(&core) {
        return Err(Error::FrontierNotExists);
    }
    let core_inst = core.to_instance(&schema);
    let mut members: Vec<PointedInstance> = Vec::new();
    if core_inst.has_unp() {
        members.extend(frontier_unp(&core_inst));
    } else {
        // Positions grouped by equal answer variables, in order of first occurrence.
        let dist = core_inst.distinguished().to_vec();
        let mut class_of = Vec::with_capacity(dist.len());
        let mut reps: Vec<String> = Vec::new();
        for d in &dist {
            match reps.iter().position(|r| r == d) {
                Some(c) => class_of.push(c),
                None => {
                    class_of.push(reps.len());
                    reps.push(d.clone());
                }
            }
        }
        let quotient = core_inst.with_distinguished(reps.clone());
        for m in frontier_unp(&quotient) {
            let expanded = class_of.iter().map(|&c| m.distinguished()[c].clone()).collect();
            members.push(m.with_distinguished(expanded));
        }
        for split in minimal_weakenings(&class_of) {
            members.push(weaken(&core, &split, budget)?.to_instance(&schema));
        }
    }
    Ok(Frontier {
        members: members.into_iter().map(ConjunctiveQuery::new_unsafe).collect(),
    })
}

/// Partitions of positions obtained by splitting one class in two.
fn minimal_weakenings(class_of: &[usize]) -> Vec<Vec<usize>> {
    let classes = class_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = Vec::new();
    for c in 0..classes {
        let members: Vec<usize> = (0..class_of.len()).filter(|&i| class_of[i] == c).collect();
        if members.len() < 2 {
            continue;
        }
        // The first member stays; every non-empty subset of the rest moves out.
        let rest = members.len() - 1;
        for mask in 1u64..(1u64 << rest) {
            let mut split: Vec<usize> = class_of.to_vec();
            for (b, &pos) in members[1..].iter().enumerate() {
                if mask & (1 << b) != 0 {
                    split[pos] = classes;
                }
            }
            out.push(split);
        }
    }
    out
}

/// Most specific pointed instance with the given equality type that maps into `core`.
fn weaken(core: &Structure, split: &[usize], budget: &Budget) -> Result<Structure> {
    let classes = split.iter().copied().max().map_or(0, |m| m + 1);
    let mut full = Structure {
        names: (0..classes).map(|i| format!("t{i}")).collect(),
        rels: core.rels.iter().map(|r| Relation::new(r.arity)).collect(),
        dist: split.to_vec(),
    };
    for rel in &mut full.rels {
        let a = rel.arity;
        let total = classes.pow(a as u32);
        for mut code in 0..total {
            let mut t = vec![0; a];
            for slot in t.iter_mut().rev() {
                *slot = code % classes;
                code /= classes;
            }
            rel.insert(t);
        }
    }
    core_of(&product2(core, &full), budget)
}

/// Frontier of a core with pairwise distinct answer variables, one member per
/// fact-graph component.
fn frontier_unp(q: &PointedInstance) -> Vec<PointedInstance> {
    let facts: Vec<&Fact> = q.facts().iter().collect();
    let answer: BTreeSet<&str> = q.distinguished().iter().map(String::as_str).collect();
    let mut used: BTreeSet<String> = q.values().into_iter().map(str::to_string).collect();
    let mut fresh = |base: String| {
        let mut name = base;
        while used.contains(&name) {
            name.push('\'');
        }
        used.insert(name.clone());
        name
    };

    // Components of the graph joining facts that share an existential variable.
    let mut comp: Vec<usize> = (0..facts.len()).collect();
    let mut holder: BTreeMap<&str, usize> = BTreeMap::new();
    fn root(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            x = c[x];
        }
        x
    }
    for (i, f) in facts.iter().enumerate() {
        for a in &f.args {
            if answer.contains(a.as_str()) {
                continue;
            }
            if let Some(&j) = holder.get(a.as_str()) {
                let (ri, rj) = (root(&mut comp, i), root(&mut comp, j));
                if ri != rj {
                    comp[ri.max(rj)] = ri.min(rj);
                }
            } else {
                holder.insert(a, i);
            }
        }
    }
    let roots: Vec<usize> = (0..facts.len()).map(|i| root(&mut comp, i)).collect();
    let mut components: Vec<usize> = roots.clone();
    components.sort_unstable();
    components.dedup();

    let mut members = Vec::new();
    for &c in &components {
        let inside: Vec<usize> = (0..facts.len()).filter(|&i| roots[i] == c).collect();
        // Replicas: u_(y,f) for each existential y and fact f holding it; u_x for answer x.
        let mut replica: BTreeMap<(&str, usize), String> = BTreeMap::new();
        let mut answer_copy: BTreeMap<&str, String> = BTreeMap::new();
        for &i in &inside {
            for a in &facts[i].args {
                if answer.contains(a.as_str()) {
                    if !answer_copy.contains_key(a.as_str()) {
                        let name = fresh(format!("{a}_u"));
                        answer_copy.insert(a, name);
                    }
                } else if !replica.contains_key(&(a.as_str(), i)) {
                    let name = fresh(format!("{a}_{i}"));
                    replica.insert((a, i), name);
                }
            }
        }
        let mut new_facts: BTreeSet<Fact> = facts
            .iter()
            .enumerate()
            .filter(|(i, _)| roots[*i] != c)
            .map(|(_, f)| (*f).clone())
            .collect();
        for &i in &inside {
            let f = facts[i];
            // Per position: candidate replicas, flagged when they come from elsewhere.
            let options: Vec<Vec<(String, bool)>> = f
                .args
                .iter()
                .map(|a| {
                    if answer.contains(a.as_str()) {
                        vec![(a.clone(), false), (answer_copy[a.as_str()].clone(), true)]
                    } else {
                        replica
                            .iter()
                            .filter(|((y, _), _)| *y == a.as_str())
                            .map(|((_, j), name)| (name.clone(), *j != i))
                            .collect()
                    }
                })
                .collect();
            let mut choice = vec![0usize; options.len()];
            'all: loop {
                if choice.iter().enumerate().any(|(p, &k)| options[p][k].1) {
                    new_facts.insert(Fact {
                        relation: f.relation.clone(),
                        args: choice.iter().enumerate().map(|(p, &k)| options[p][k].0.clone()).collect(),
                    });
                }
                for p in (0..choice.len()).rev() {
                    choice[p] += 1;
                    if choice[p] < options[p].len() {
                        continue 'all;
                    }
                    choice[p] = 0;
                }
                break;
            }
        }
        members.push(PointedInstance::from_parts(
            q.schema().clone(),
            new_facts,
            q.distinguished().to_vec(),
        ));
    }
    members
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcore::{hom_exists, hom_equivalent};
    use crate::model::Schema;

    fn cq(s: &Schema, facts: &[(&str, &[&str])], ans: &[&str]) -> ConjunctiveQuery {
        ConjunctiveQuery::new(PointedInstance::from_tuples(s, facts, ans).unwrap()).unwrap()
    }

    #[test]
    fn self_loop_at_answer() {
        let s = Schema::new([("R", 2)]);
        let b = Budget::default();
        let f = frontier(&cq(&s, &[("R", &["x", "x"])], &["x"]), &b).unwrap();
        assert_eq!(f.len(), 1);
        let expected = PointedInstance::from_tuples(&s, &[("R", &["x", "u"]), ("R", &["u", "x"]), ("R", &["u", "u"])], &["x"]).unwrap();
        assert!(hom_equivalent(f.members[0].body(), &expected, &b).unwrap());
    }

    #[test]
    fn boolean_edge_has_trivial_frontier() {
        let s = Schema::new([("R", 2)]);
        let f = frontier(&cq(&s, &[("R", &["x", "y"])], &[]), &Budget::default()).unwrap();
        assert_eq!(f.len(), 1);
        assert!(f.members[0].body().facts().is_empty());
    }

    #[test]
    fn cycle_has_no_frontier() {
        let s = Schema::new([("R", 2)]);
        let c3 = cq(&s, &[("R", &["a", "b"]), ("R", &["b", "c"]), ("R", &["c", "a"])], &[]);
        assert_eq!(frontier(&c3, &Budget::default()), Err(Error::FrontierNotExists));
    }

    #[test]
    fn repeated_answer_variables() {
        let s = Schema::new([("R", 2)]);
        let b = Budget::default();
        let q = cq(&s, &[("R", &["x", "y"])], &["x", "x"]);
        let f = frontier(&q, &b).unwrap();
        for m in &f.members {
            assert!(hom_exists(m.body(), q.body(), &b).unwrap());
            assert!(!hom_exists(q.body(), m.body(), &b).unwrap());
        }
        assert!(f.members.iter().any(|m| m.body().has_unp()));
        assert!(f.members.iter().any(|m| !m.body().has_unp()));
    }
}
