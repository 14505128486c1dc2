//! Tree-shaped unary queries over unary and binary relations: simulations,
//! unravelings and the fitting notions for tree queries.

mod sim;
mod tree;

use std::collections::{BTreeSet, HashSet};

use crate::budget::Budget;
use crate::cqfit::{FittingKind, Sides};
use crate::error::{Error, Result};
use crate::canon::{canonical_key, CanonKey};
use crate::frontier_duality::{minimal_elements, pointed_duals, Frontier};
use crate::homcore::{core_of, product2};
use crate::model::{ConjunctiveQuery, LabeledExamples, PointedInstance, Schema};
use crate::outcome::SearchOutcome;
use crate::structure::{Relation, Structure};

use tree::{rooted_at, Enumerator, Tree};

/// Pairs `(u, w)` such that `w` simulates `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationRelation {
    pub pairs: BTreeSet<(String, String)>,
}

impl SimulationRelation {
    pub fn contains(&self, source: &str, target: &str) -> bool {
        self.pairs.contains(&(source.to_string(), target.to_string()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A tree query together with the unraveling depth that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeWitness {
    pub query: ConjunctiveQuery,
    pub depth: usize,
}

fn require_binary(schema: &Schema) -> Result<()> {
    schema.require_binary()
}

fn require_unary(arity: usize) -> Result<()> {
    if arity != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: arity });
    }
    Ok(())
}

fn arities(schema: &Schema) -> Vec<usize> {
    schema.relations().map(|(_, a)| a).collect()
}

/// Greatest simulation of `i` in `j`.
pub fn max_simulation(i: &PointedInstance, j: &PointedInstance, budget: &Budget) -> Result<SimulationRelation> {
    require_binary(i.schema())?;
    if i.schema() != j.schema() {
        return Err(Error::SchemaMismatch(format!("{} vs {}", i.schema(), j.schema())));
    }
    let (a, b) = (Structure::from_instance(i), Structure::from_instance(j));
    let sim = sim::greatest(&a, &b, budget)?;
    let mut pairs = BTreeSet::new();
    for (u, row) in sim.iter().enumerate() {
        for w in row.ones() {
            pairs.insert((a.names[u].clone(), b.names[w].clone()));
        }
    }
    Ok(SimulationRelation { pairs })
}

/// True iff the distinguished value of `e1` is simulated by that of `e2`.
pub fn simulates(e1: &PointedInstance, e2: &PointedInstance, budget: &Budget) -> Result<bool> {
    require_binary(e1.schema())?;
    e1.check_compatible(e2)?;
    require_unary(e1.arity())?;
    sim::simulated(&Structure::from_instance(e1), &Structure::from_instance(e2), budget)
}

/// The `m`-finite unraveling of `e` at its distinguished value. Paths are
/// named by their values and roles, as in `a.R.b` and `a.R-.b`.
pub fn unravel(e: &PointedInstance, m: usize) -> Result<PointedInstance> {
    require_binary(e.schema())?;
    require_unary(e.arity())?;
    if m == 0 {
        return Err(Error::InvalidParameter("the unraveling depth must be at least 1".into()));
    }
    let s = Structure::from_instance(e);
    let names: Vec<&str> = e.schema().relations().map(|(n, _)| n).collect();
    Ok(unravel_structure(&s, m, |r, inverse, from, to| {
        format!("{from}.{}{}.{to}", names[r], if inverse { "-" } else { "" })
    })
    .to_instance(e.schema()))
}

fn unravel_structure(s: &Structure, m: usize, name: impl Fn(usize, bool, &str, &str) -> String) -> Structure {
    let n = s.len();
    let mut labels = vec![Vec::new(); n];
    let mut steps: Vec<Vec<(usize, bool, usize)>> = vec![Vec::new(); n];
    for (r, t) in s.facts() {
        match t.as_slice() {
            [a] => labels[*a].push(r),
            [a, b] => {
                steps[*a].push((r, false, *b));
                steps[*b].push((r, true, *a));
            }
            _ => {}
        }
    }
    let mut out = Structure {
        names: vec![s.names[s.dist[0]].clone()],
        rels: s.rels.iter().map(|r| Relation::new(r.arity)).collect(),
        dist: vec![0],
    };
    // (path id, last value, length)
    let mut frontier = vec![(0usize, s.dist[0])];
    for &l in &labels[s.dist[0]] {
        out.rels[l].insert(vec![0]);
    }
    for _ in 1..m {
        let mut next = Vec::new();
        for &(p, v) in &frontier {
            for &(r, inverse, w) in &steps[v] {
                let id = out.names.len();
                let path_name = name(r, inverse, &out.names[p], &s.names[w]);
                out.names.push(path_name);
                for &l in &labels[w] {
                    out.rels[l].insert(vec![id]);
                }
                out.rels[r].insert(if inverse { vec![id, p] } else { vec![p, id] });
                next.push((id, w));
            }
        }
        frontier = next;
    }
    out
}

/// Unraveling with compact value names, for internal use.
fn unravel_plain(s: &Structure, m: usize) -> Structure {
    let mut u = unravel_structure(s, m, |_, _, _, _| String::new());
    for (i, n) in u.names.iter_mut().enumerate() {
        *n = crate::canon::value_name(i);
    }
    u
}

fn tree_query(q: &ConjunctiveQuery, e: &LabeledExamples) -> Result<Structure> {
    e.check_query(q.body())?;
    require_binary(e.schema())?;
    require_unary(q.arity())?;
    let s = Structure::from_instance(q.body());
    rooted_at(&s, s.dist[0])?;
    Ok(s)
}

fn examples(e: &LabeledExamples) -> Result<Sides> {
    require_binary(e.schema())?;
    require_unary(e.arity())?;
    Ok(Sides::new(e))
}

fn sim_fits(q: &Structure, sides: &Sides, budget: &Budget) -> Result<bool> {
    for p in &sides.pos {
        if !sim::simulated(q, p, budget)? {
            return Ok(false);
        }
    }
    Ok(!sim_negative(q, sides, budget)?)
}

fn sim_negative(q: &Structure, sides: &Sides, budget: &Budget) -> Result<bool> {
    for n in &sides.neg {
        if sim::simulated(q, n, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every member of the tree frontier of `q` simulates into a negative.
fn frontier_covered(q: &Structure, sides: &Sides, budget: &Budget) -> Result<bool> {
    let ar = arities(&sides.schema);
    for m in tree::frontier(q)? {
        if !sim_negative(&m.to_structure(&ar), sides, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_tree_fitting(kind: FittingKind, q: &ConjunctiveQuery, e: &LabeledExamples, budget: &Budget) -> Result<bool> {
    let s = tree_query(q, e)?;
    let sides = examples(e)?;
    if !sim_fits(&s, &sides, budget)? {
        return Ok(false);
    }
    let most_specific = || -> Result<bool> { sim::simulated(&sides.product_core(budget)?, &s, budget) };
    match kind {
        FittingKind::Any => Ok(true),
        FittingKind::MostSpecific => most_specific(),
        FittingKind::WeaklyMostGeneral => frontier_covered(&s, &sides, budget),
        FittingKind::Unique => Ok(most_specific()? && frontier_covered(&s, &sides, budget)?),
    }
}

/// Frontier of a tree query with respect to tree queries.
pub fn tree_frontier(q: &ConjunctiveQuery) -> Result<Frontier> {
    require_binary(q.schema())?;
    require_unary(q.arity())?;
    let s = Structure::from_instance(q.body());
    let ar = arities(q.schema());
    Ok(Frontier {
        members: tree::frontier(&s)?
            .iter()
            .map(|t| ConjunctiveQuery::new_unsafe(t.to_structure(&ar).to_instance(q.schema())))
            .collect(),
    })
}

fn to_query(s: &Structure, schema: &Schema) -> ConjunctiveQuery {
    ConjunctiveQuery::new_unsafe(s.to_instance(schema))
}

/// Tries the unravelings of the product of the positives at depths
/// `1..=depth_cap`; the first that simulates into no negative fits.
pub fn exists_tree_fitting(e: &LabeledExamples, depth_cap: usize, budget: &Budget) -> Result<SearchOutcome<TreeWitness>> {
    let sides = examples(e)?;
    let p = sides.product_core(budget)?;
    for m in 1..=depth_cap {
        let u = unravel_plain(&p, m);
        if !sim_negative(&u, &sides, budget)? {
            return Ok(SearchOutcome::Found(TreeWitness {
                query: to_query(&u, &sides.schema),
                depth: m,
            }));
        }
    }
    Ok(SearchOutcome::NotUpToCap {
        cap: depth_cap,
        partial: None,
    })
}

/// The first unraveling of the product of the positives that the product
/// simulates into is a most-specific fitting, provided some tree fits.
pub fn exists_most_specific_tree(
    e: &LabeledExamples,
    depth_cap: usize,
    budget: &Budget,
) -> Result<SearchOutcome<TreeWitness>> {
    match exists_tree_fitting(e, depth_cap, budget)? {
        SearchOutcome::Found(_) => {}
        other => return Ok(other),
    }
    let sides = examples(e)?;
    let p = sides.product_core(budget)?;
    for m in 1..=depth_cap {
        let u = unravel_plain(&p, m);
        if sim::simulated(&p, &u, budget)? {
            return Ok(SearchOutcome::Found(TreeWitness {
                query: to_query(&u, &sides.schema),
                depth: m,
            }));
        }
    }
    Ok(SearchOutcome::NotUpToCap {
        cap: depth_cap,
        partial: None,
    })
}

/// Bound on the number of children in enumerated trees.
fn degree_bound(e: &LabeledExamples) -> usize {
    e.negative_size()
}

/// Dropping any atom, with the subtree below it for binary atoms, makes
/// the tree simulate into a negative.
fn critical(t: &Tree, ar: &[usize], sides: &Sides, budget: &Budget) -> Result<bool> {
    for sub in t.one_removal() {
        if !sim_negative(&sub.to_structure(ar), sides, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fitting trees with at most `size_cap` nodes whose removals all break
/// fitting, smallest first.
fn critical_fittings(
    sides: &Sides,
    max_children: usize,
    size_cap: usize,
    budget: &Budget,
    mut visit: impl FnMut(&Tree, &Structure) -> Result<bool>,
) -> Result<()> {
    let ar = arities(&sides.schema);
    let mut gen = Enumerator::new(&ar, max_children);
    for nodes in 1..=size_cap {
        for t in gen.trees(nodes).to_vec() {
            budget.tick()?;
            let s = t.to_structure(&ar);
            if !sim_fits(&s, sides, budget)? || !critical(&t, &ar, sides, budget)? {
                continue;
            }
            if !visit(&t, &s)? {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Searches trees with at most `size_cap` nodes and at most `||E-||`
/// children per node for a weakly most-general fitting. Only critical
/// fittings are tested: a weakly most-general fitting stays one after
/// removing atoms as long as it fits.
pub fn search_weakly_most_general_tree(
    e: &LabeledExamples,
    size_cap: usize,
    budget: &Budget,
) -> Result<SearchOutcome<ConjunctiveQuery>> {
    let sides = examples(e)?;
    let mut found = None;
    critical_fittings(&sides, degree_bound(e), size_cap, budget, |_, s| {
        if frontier_covered(s, &sides, budget)? {
            found = Some(to_query(s, &sides.schema));
            return Ok(false);
        }
        Ok(true)
    })?;
    Ok(match found {
        Some(q) => SearchOutcome::Found(q),
        None => SearchOutcome::NotUpToCap {
            cap: size_cap,
            partial: None,
        },
    })
}

/// True iff every fitting tree query is contained in a member of `qs`.
pub fn verify_tree_basis(qs: &[ConjunctiveQuery], e: &LabeledExamples, budget: &Budget) -> Result<bool> {
    let sides = examples(e)?;
    let mut members = Vec::with_capacity(qs.len());
    for q in qs {
        let s = tree_query(q, e)?;
        if !sim_fits(&s, &sides, budget)? {
            return Ok(false);
        }
        members.push(s);
    }
    tree_basis_holds(&sides, &members, budget)
}

fn tree_basis_holds(sides: &Sides, members: &[Structure], budget: &Budget) -> Result<bool> {
    let shrink = |d: &Structure| sim::reduce(d, budget);
    let mut duals = Vec::with_capacity(members.len());
    for m in minimal_elements(members.to_vec(), budget)? {
        duals.push(sim_maximal(pointed_duals(&core_of(&m, budget)?, budget, &shrink)?, budget)?);
    }
    let p = sim::reduce(&sides.product_core(budget)?, budget)?;
    products_simulate(sides, &duals, 0, p, &mut HashSet::new(), budget)
}

/// Drops members simulated by another one, keeping the first of any
/// simulation-equivalent group.
fn sim_maximal(items: Vec<Structure>, budget: &Budget) -> Result<Vec<Structure>> {
    let mut kept: Vec<Structure> = Vec::new();
    for x in items {
        let mut dominated = false;
        for k in &kept {
            if sim::simulated(&x, k, budget)? {
                dominated = true;
                break;
            }
        }
        if dominated {
            continue;
        }
        let mut next = Vec::with_capacity(kept.len() + 1);
        for k in kept {
            if !sim::simulated(&k, &x, budget)? {
                next.push(k);
            }
        }
        next.push(x);
        kept = next;
    }
    Ok(kept)
}

/// Every product of `acc` with one member per remaining dual simulates
/// into a negative. Products are only needed up to simulation equivalence,
/// and `done` records subproblems already known to hold.
fn products_simulate(
    sides: &Sides,
    duals: &[Vec<Structure>],
    depth: usize,
    acc: Structure,
    done: &mut HashSet<(usize, CanonKey)>,
    budget: &Budget,
) -> Result<bool> {
    if sim_negative(&acc, sides, budget)? {
        return Ok(true);
    }
    if depth == duals.len() {
        return Ok(false);
    }
    let key = (depth, canonical_key(&acc));
    if done.contains(&key) {
        return Ok(true);
    }
    for member in &duals[depth] {
        let next = sim::reduce(&product2(&acc, member), budget)?;
        if !products_simulate(sides, duals, depth + 1, next, done, budget)? {
            return Ok(false);
        }
    }
    done.insert(key);
    Ok(true)
}

/// Collects the critical fitting trees with at most `size_cap` nodes and
/// at most `||E-||` children per node, and reports them when they form a
/// basis.
pub fn search_tree_basis(e: &LabeledExamples, size_cap: usize, budget: &Budget) -> Result<SearchOutcome<Vec<ConjunctiveQuery>>> {
    let sides = examples(e)?;
    let mut found: Vec<Structure> = Vec::new();
    critical_fittings(&sides, degree_bound(e), size_cap, budget, |_, s| {
        found.push(s.clone());
        Ok(true)
    })?;
    let queries: Vec<ConjunctiveQuery> = found.iter().map(|s| to_query(s, &sides.schema)).collect();
    if !found.is_empty() && tree_basis_holds(&sides, &found, budget)? {
        return Ok(SearchOutcome::Found(queries));
    }
    Ok(SearchOutcome::NotUpToCap {
        cap: size_cap,
        partial: Some(queries),
    })
}

/// All tree queries with at most `max_nodes` nodes over `schema`, up to
/// isomorphism, smallest first.
pub fn enumerate_trees(schema: &Schema, max_nodes: usize) -> Result<Vec<ConjunctiveQuery>> {
    require_binary(schema)?;
    let ar = arities(schema);
    let mut gen = Enumerator::new(&ar, usize::MAX);
    let mut out = Vec::new();
    for nodes in 1..=max_nodes {
        for t in gen.trees(nodes) {
            out.push(to_query(&t.to_structure(&ar), schema));
        }
    }
    Ok(out)
}

/// True iff `q` is a tree query: unary, over unary and binary relations, and
/// its binary atoms form a tree containing every variable.
pub fn is_tree_query(q: &ConjunctiveQuery) -> bool {
    if q.schema().require_binary().is_err() || q.arity() != 1 {
        return false;
    }
    let s = Structure::from_instance(q.body());
    rooted_at(&s, s.dist[0]).is_ok()
}
