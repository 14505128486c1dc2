//! Fitting conjunctive queries: verification, existence and construction of
//! arbitrary, most-specific, weakly most-general and unique fittings, and of
//! bases of most-general fittings.

mod candidates;

pub(crate) use candidates::{Bounds, Generator};

use crate::budget::Budget;
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::frontier_duality::{c_acyclic, dual_structures, frontier, minimal_elements, ConstructOptions};
use crate::frontier_duality::{construct_structures, duality_exists};
use crate::homcore::{core_of, equivalent, product2, search, top};
use crate::model::{ConjunctiveQuery, LabeledExamples, Schema};
use crate::outcome::SearchOutcome;
use crate::structure::Structure;

/// The fitting notions shared by conjunctive and tree queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FittingKind {
    Any,
    MostSpecific,
    WeaklyMostGeneral,
    Unique,
}

/// Examples in search form.
pub(crate) struct Sides {
    pub schema: Schema,
    pub arity: usize,
    pub pos: Vec<Structure>,
    pub neg: Vec<Structure>,
}

impl Sides {
    pub fn new(e: &LabeledExamples) -> Self {
        Sides {
            schema: e.schema().clone(),
            arity: e.arity(),
            pos: e.positives().iter().map(Structure::from_instance).collect(),
            neg: e.negatives().iter().map(Structure::from_instance).collect(),
        }
    }

    pub fn fits(&self, q: &Structure, budget: &Budget) -> Result<bool> {
        for e in &self.pos {
            if !search::exists(q, e, budget)? {
                return Ok(false);
            }
        }
        self.avoids_negatives(q, budget)
    }

    pub fn avoids_negatives(&self, q: &Structure, budget: &Budget) -> Result<bool> {
        Ok(!self.maps_to_negative(q, budget)?)
    }

    pub fn maps_to_negative(&self, q: &Structure, budget: &Budget) -> Result<bool> {
        for e in &self.neg {
            if search::exists(q, e, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Direct product of the positives.
    pub fn product(&self) -> Structure {
        self.pos
            .iter()
            .skip(1)
            .fold(self.pos.first().cloned().unwrap_or_else(|| top(&self.schema, self.arity)), |acc, e| {
                product2(&acc, e)
            })
    }

    /// Core of the product of the positives, taking cores along the way.
    pub fn product_core(&self, budget: &Budget) -> Result<Structure> {
        let mut acc = match self.pos.first() {
            None => return Ok(top(&self.schema, self.arity)),
            Some(first) => core_of(first, budget)?,
        };
        for e in &self.pos[1..] {
            acc = core_of(&product2(&acc, e), budget)?;
        }
        Ok(acc)
    }

    /// Every member of the frontier of `q` maps into some negative.
    /// False when `q` has no frontier.
    pub fn frontier_covered(&self, q: &Structure, budget: &Budget) -> Result<bool> {
        let cq = ConjunctiveQuery::new_unsafe(q.to_instance(&self.schema));
        let members = match frontier(&cq, budget) {
            Ok(f) => f.members,
            Err(Error::FrontierNotExists) => return Ok(false),
            Err(e) => return Err(e),
        };
        for m in &members {
            if !self.maps_to_negative(&Structure::from_instance(m.body()), budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_cq(&self, s: &Structure) -> Result<ConjunctiveQuery> {
        ConjunctiveQuery::new(canonical_form(s).to_instance(&self.schema))
    }
}

fn query(q: &ConjunctiveQuery, e: &LabeledExamples) -> Result<Structure> {
    e.check_query(q.body())?;
    Ok(Structure::from_instance(q.body()))
}

pub fn verify_fitting_cq(q: &ConjunctiveQuery, e: &LabeledExamples, budget: &Budget) -> Result<bool> {
    let s = query(q, e)?;
    Sides::new(e).fits(&s, budget)
}

pub fn verify_extremal_cq(kind: FittingKind, q: &ConjunctiveQuery, e: &LabeledExamples, budget: &Budget) -> Result<bool> {
    let s = query(q, e)?;
    let sides = Sides::new(e);
    if !sides.fits(&s, budget)? {
        return Ok(false);
    }
    let most_specific = || -> Result<bool> { equivalent(&s, &sides.product_core(budget)?, budget) };
    match kind {
        FittingKind::Any => Ok(true),
        FittingKind::MostSpecific => most_specific(),
        FittingKind::WeaklyMostGeneral => sides.frontier_covered(&s, budget),
        FittingKind::Unique => Ok(most_specific()? && sides.frontier_covered(&s, budget)?),
    }
}

/// A fitting exists iff the canonical query of the product of the positives
/// is safe and fits; that query is the witness.
pub fn exists_fitting_cq(e: &LabeledExamples, budget: &Budget) -> Result<SearchOutcome<ConjunctiveQuery>> {
    let sides = Sides::new(e);
    let p = sides.product();
    if !p.is_data_example() || sides.maps_to_negative(&p, budget)? {
        return Ok(SearchOutcome::NotExists);
    }
    Ok(SearchOutcome::Found(ConjunctiveQuery::new(p.to_instance(&sides.schema))?))
}

/// The core of the product of the positives, when it fits.
pub fn construct_most_specific_cq(e: &LabeledExamples, budget: &Budget) -> Result<SearchOutcome<ConjunctiveQuery>> {
    let sides = Sides::new(e);
    let p = sides.product_core(budget)?;
    if !p.is_data_example() || sides.maps_to_negative(&p, budget)? {
        return Ok(SearchOutcome::NotExists);
    }
    Ok(SearchOutcome::Found(sides.to_cq(&p)?))
}

/// A unique fitting exists iff the most-specific fitting is also weakly
/// most-general.
pub fn exists_unique_cq(e: &LabeledExamples, budget: &Budget) -> Result<SearchOutcome<ConjunctiveQuery>> {
    let sides = Sides::new(e);
    let p = sides.product_core(budget)?;
    if !p.is_data_example() || sides.maps_to_negative(&p, budget)? || !sides.frontier_covered(&p, budget)? {
        return Ok(SearchOutcome::NotExists);
    }
    Ok(SearchOutcome::Found(sides.to_cq(&p)?))
}

/// A basis of most-general fittings exists iff the negatives admit a finite
/// obstruction set relative to the product of the positives.
pub fn exists_basis_cq(e: &LabeledExamples, budget: &Budget) -> Result<bool> {
    let sides = Sides::new(e);
    let p = sides.product_core(budget)?;
    if !p.is_data_example() {
        return Ok(true);
    }
    duality_exists(&sides.neg, &p, budget)
}

/// Minimal basis of most-general fittings, built from obstructions of at
/// most `size_cap` values. Candidate sizes are tried in increasing order and
/// each candidate basis is verified exactly.
pub fn construct_basis_cq(
    e: &LabeledExamples,
    size_cap: usize,
    budget: &Budget,
) -> Result<SearchOutcome<Vec<ConjunctiveQuery>>> {
    let sides = Sides::new(e);
    let p = sides.product_core(budget)?;
    if !p.is_data_example() || sides.maps_to_negative(&p, budget)? || !duality_exists(&sides.neg, &p, budget)? {
        return Ok(SearchOutcome::NotExists);
    }
    for cap in 1..=size_cap {
        let options = ConstructOptions {
            size_cap: cap,
            check_bound: cap.min(3),
        };
        let fs = match construct_structures(&sides.neg, &p, &sides.schema, options, budget) {
            Ok(fs) => fs,
            Err(Error::CapTooSmall(_)) => continue,
            Err(Error::InvalidParameter(_)) => return Err(Error::CapTooSmall(cap - 1)),
            Err(err) => return Err(err),
        };
        let mut members = Vec::new();
        for f in fs {
            if sides.fits(&f, budget)? {
                members.push(core_of(&f, budget)?);
            }
        }
        let members = minimal_elements(members, budget)?;
        if members.is_empty() {
            return Ok(SearchOutcome::NotExists);
        }
        if basis_holds(&sides, &members, &p, budget)? {
            let mut qs = members.iter().map(|m| sides.to_cq(m)).collect::<Result<Vec<_>>>()?;
            qs.sort();
            return Ok(SearchOutcome::Found(qs));
        }
    }
    Err(Error::CapTooSmall(size_cap))
}

/// True iff `qs` is a basis of most-general fittings: every fitting
/// conjunctive query is contained in one of them.
pub fn verify_basis_cq(qs: &[ConjunctiveQuery], e: &LabeledExamples, budget: &Budget) -> Result<bool> {
    let sides = Sides::new(e);
    let mut members = Vec::with_capacity(qs.len());
    for q in qs {
        let s = query(q, e)?;
        if !sides.fits(&s, budget)? {
            return Ok(false);
        }
        members.push(core_of(&s, budget)?);
    }
    let members = minimal_elements(members, budget)?;
    let p = sides.product_core(budget)?;
    basis_holds(&sides, &members, &p, budget)
}

/// With `members` fitting, pairwise incomparable cores: every data example
/// below `p` that no member maps into maps into a negative.
fn basis_holds(sides: &Sides, members: &[Structure], p: &Structure, budget: &Budget) -> Result<bool> {
    if !members.iter().all(c_acyclic) {
        return Ok(false);
    }
    let mut duals = Vec::with_capacity(members.len());
    for m in members {
        duals.push(dual_structures(m, budget)?);
    }
    products_map_to_negatives(sides, &duals, 0, p.clone(), budget)
}

/// Every product of `acc` with one member per remaining dual maps into a
/// negative, ignoring products with a distinguished value outside the
/// active domain. Once `acc` maps, every refinement of it does too.
fn products_map_to_negatives(
    sides: &Sides,
    duals: &[Vec<Structure>],
    depth: usize,
    acc: Structure,
    budget: &Budget,
) -> Result<bool> {
    if !acc.is_data_example() || sides.maps_to_negative(&acc, budget)? {
        return Ok(true);
    }
    if depth == duals.len() {
        return Ok(false);
    }
    for member in &duals[depth] {
        let next = core_of(&product2(&acc, member), budget)?;
        if !products_map_to_negatives(sides, duals, depth + 1, next, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches c-acyclic queries with at most `size_cap` variables for a weakly
/// most-general fitting, smallest first.
///
/// Only queries with at most `max(|E-|, 1)` fg-connected components, whose
/// existential variables occur in at most `||E-|| + 1` facts, and in which
/// dropping any fact yields a non-fitting query are tested: if some weakly
/// most-general fitting exists within the cap, one of this shape does.
pub fn search_weakly_most_general_cq(
    e: &LabeledExamples,
    size_cap: usize,
    budget: &Budget,
) -> Result<SearchOutcome<ConjunctiveQuery>> {
    let sides = Sides::new(e);
    let p = if sides.pos.is_empty() { None } else { Some(sides.product_core(budget)?) };
    let bounds = Bounds {
        max_vars: size_cap,
        max_components: sides.neg.len().max(1),
        max_degree: e.negative_size() + 1,
    };
    let arities: Vec<usize> = sides.schema.relations().map(|(_, a)| a).collect();
    let mut gen = Generator::new(arities, sides.arity, bounds, |s| match &p {
        None => Ok(true),
        Some(p) => search::exists(s, p, budget),
    });
    while let Some(level) = gen.next_level(budget)? {
        for q in level {
            if !q.is_data_example() || sides.maps_to_negative(&q, budget)? {
                continue;
            }
            if !every_fact_needed(&sides, &q, budget)? {
                continue;
            }
            if sides.frontier_covered(&q, budget)? {
                return Ok(SearchOutcome::Found(sides.to_cq(&q)?));
            }
        }
    }
    Ok(SearchOutcome::NotUpToCap {
        cap: size_cap,
        partial: None,
    })
}

/// Dropping any single fact makes `q` unsafe or maps it into a negative.
fn every_fact_needed(sides: &Sides, q: &Structure, budget: &Budget) -> Result<bool> {
    let facts: Vec<(usize, Vec<usize>)> = q.facts().map(|(r, t)| (r, t.clone())).collect();
    for drop in 0..facts.len() {
        let mut sub = q.clone();
        for rel in &mut sub.rels {
            rel.tuples.clear();
            rel.set.clear();
        }
        for (i, (r, t)) in facts.iter().enumerate() {
            if i != drop {
                sub.rels[*r].insert(t.clone());
            }
        }
        let sub = sub.trim();
        if sub.is_data_example() && !sides.maps_to_negative(&sub, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PointedInstance;

    fn rpq() -> Schema {
        Schema::new([("P", 1), ("Q", 1), ("R", 2)])
    }

    fn inst(s: &Schema, facts: &[(&str, &[&str])], dist: &[&str]) -> PointedInstance {
        PointedInstance::from_tuples(s, facts, dist).unwrap()
    }

    fn cq(s: &Schema, facts: &[(&str, &[&str])], dist: &[&str]) -> ConjunctiveQuery {
        ConjunctiveQuery::new(inst(s, facts, dist)).unwrap()
    }

    fn ternary() -> LabeledExamples {
        let s = Schema::new([("P", 1), ("R", 3)]);
        LabeledExamples::new(
            s.clone(),
            0,
            vec![
                inst(&s, &[("R", &["a", "a", "b"]), ("P", &["a"])], &[]),
                inst(&s, &[("R", &["c", "d", "d"]), ("P", &["c"])], &[]),
            ],
            vec![inst(&s, &[], &[])],
        )
        .unwrap()
    }

    fn loop_examples() -> LabeledExamples {
        let g = Schema::new([("R", 2)]);
        let facts: &[(&str, &[&str])] = &[("R", &["a", "b"]), ("R", &["b", "a"]), ("R", &["b", "b"])];
        LabeledExamples::new(g.clone(), 1, vec![inst(&g, facts, &["b"])], vec![inst(&g, facts, &["a"])]).unwrap()
    }

    fn negatives_only(neg: Vec<PointedInstance>) -> LabeledExamples {
        LabeledExamples::new(rpq(), 0, vec![], neg).unwrap()
    }

    fn k2() -> PointedInstance {
        inst(&rpq(), &[("R", &["a", "b"]), ("R", &["b", "a"])], &[])
    }

    #[test]
    fn most_specific_ternary() {
        let b = Budget::default();
        let e = ternary();
        let s = e.schema().clone();
        let q1 = cq(&s, &[("R", &["x", "y", "z"])], &[]);
        let q2 = cq(&s, &[("R", &["x", "y", "z"]), ("P", &["x"])], &[]);
        assert!(verify_fitting_cq(&q1, &e, &b).unwrap());
        assert!(verify_extremal_cq(FittingKind::MostSpecific, &q2, &e, &b).unwrap());
        assert!(!verify_extremal_cq(FittingKind::MostSpecific, &q1, &e, &b).unwrap());
        let SearchOutcome::Found(w) = construct_most_specific_cq(&e, &b).unwrap() else { panic!() };
        assert!(crate::homcore::hom_equivalent(w.body(), q2.body(), &b).unwrap());
        assert_eq!(exists_unique_cq(&e, &b).unwrap(), SearchOutcome::NotExists);
    }

    #[test]
    fn unique_loop() {
        let b = Budget::default();
        let e = loop_examples();
        let q = cq(e.schema(), &[("R", &["x", "x"])], &["x"]);
        assert!(verify_extremal_cq(FittingKind::Unique, &q, &e, &b).unwrap());
        let SearchOutcome::Found(w) = exists_unique_cq(&e, &b).unwrap() else { panic!() };
        assert!(crate::homcore::hom_equivalent(w.body(), q.body(), &b).unwrap());
    }

    #[test]
    fn empty_positives_give_top() {
        let b = Budget::default();
        let g = Schema::new([("R", 2)]);
        let e = LabeledExamples::new(g.clone(), 0, vec![], vec![]).unwrap();
        let SearchOutcome::Found(w) = construct_most_specific_cq(&e, &b).unwrap() else { panic!() };
        assert_eq!(w.body().num_values(), 1);
        assert_eq!(w.body().facts().len(), 1);
    }

    #[test]
    fn basis_existence() {
        let b = Budget::default();
        let s = rpq();
        let ipq = inst(&s, &[("P", &["a"]), ("Q", &["a"])], &[]);
        let ip = inst(&s, &[("P", &["a"])], &[]);
        let iq = inst(&s, &[("Q", &["a"])], &[]);
        assert!(exists_basis_cq(&negatives_only(vec![ipq]), &b).unwrap());
        assert!(!exists_basis_cq(&negatives_only(vec![k2()]), &b).unwrap());
        assert!(!exists_basis_cq(&negatives_only(vec![k2(), ip, iq]), &b).unwrap());
    }

    #[test]
    fn basis_construction() {
        let b = Budget::default();
        let s = rpq();
        let edge = cq(&s, &[("R", &["x", "y"])], &[]);
        let pq = cq(&s, &[("P", &["x"]), ("Q", &["y"])], &[]);
        let e = negatives_only(vec![inst(&s, &[("P", &["a"])], &[]), inst(&s, &[("Q", &["a"])], &[])]);
        let SearchOutcome::Found(basis) = construct_basis_cq(&e, 3, &b).unwrap() else { panic!() };
        assert_eq!(basis.len(), 2);
        assert!(verify_basis_cq(&basis, &e, &b).unwrap());
        assert!(verify_basis_cq(&[edge.clone(), pq], &e, &b).unwrap());
        assert!(!verify_basis_cq(&[edge.clone()], &e, &b).unwrap());
        let single = negatives_only(vec![inst(&s, &[("P", &["a"]), ("Q", &["a"])], &[])]);
        let SearchOutcome::Found(basis) = construct_basis_cq(&single, 3, &b).unwrap() else { panic!() };
        assert_eq!(basis.len(), 1);
        assert!(crate::homcore::hom_equivalent(basis[0].body(), edge.body(), &b).unwrap());
    }

    #[test]
    fn odd_cycle_is_not_a_basis() {
        let b = Budget::default();
        let s = rpq();
        let c3 = cq(&s, &[("R", &["a", "b"]), ("R", &["b", "c"]), ("R", &["c", "a"])], &[]);
        assert!(!verify_basis_cq(&[c3], &negatives_only(vec![k2()]), &b).unwrap());
    }

    #[test]
    fn weakly_most_general_search() {
        let b = Budget::default();
        let s = rpq();
        let ip = inst(&s, &[("P", &["a"])], &[]);
        let iq = inst(&s, &[("Q", &["a"])], &[]);
        let e = negatives_only(vec![k2(), ip, iq]);
        let pq = cq(&s, &[("P", &["x"]), ("Q", &["y"])], &[]);
        assert!(verify_extremal_cq(FittingKind::WeaklyMostGeneral, &pq, &e, &b).unwrap());
        let SearchOutcome::Found(w) = search_weakly_most_general_cq(&e, 4, &b).unwrap() else { panic!() };
        assert!(crate::homcore::hom_equivalent(w.body(), pq.body(), &b).unwrap());
        let single = negatives_only(vec![inst(&s, &[("P", &["a"]), ("Q", &["a"])], &[])]);
        let SearchOutcome::Found(w) = search_weakly_most_general_cq(&single, 3, &b).unwrap() else { panic!() };
        assert!(crate::homcore::hom_equivalent(w.body(), cq(&s, &[("R", &["x", "y"])], &[]).body(), &b).unwrap());
    }
}
