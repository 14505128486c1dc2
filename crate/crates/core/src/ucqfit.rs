//! Fitting unions of conjunctive queries.

use crate::budget::Budget;
use crate::canon::canonical_form;
use crate::cqfit::Sides;
use crate::error::{Error, Result};
use crate::frontier_duality::{check_hom_duality, construct_structures, duality_exists, minimal_elements};
use crate::frontier_duality::{ConstructOptions, DualitySide};
use crate::homcore::{search, top};
use crate::model::{ConjunctiveQuery, LabeledExamples, UnionOfCQs};
use crate::outcome::SearchOutcome;
use crate::structure::Structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UcqKind {
    Any,
    MostSpecific,
    /// Weak and strong most-general fittings coincide for unions.
    MostGeneral,
    Unique,
}

fn disjuncts(q: &UnionOfCQs) -> Vec<Structure> {
    q.disjuncts().iter().map(|d| Structure::from_instance(d.body())).collect()
}

/// Every member of `to` has a member of `from` mapping into it.
fn covers(from: &[Structure], to: &[Structure], budget: &Budget) -> Result<bool> {
    'next: for t in to {
        for f in from {
            if search::exists(f, t, budget)? {
                continue 'next;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// True iff for every disjunct of `q2` some disjunct of `q` maps into it,
/// that is, iff `q2` is contained in `q`.
pub fn ucq_homomorphism(q: &UnionOfCQs, q2: &UnionOfCQs, budget: &Budget) -> Result<bool> {
    q.disjuncts()[0].body().check_compatible(q2.disjuncts()[0].body())?;
    covers(&disjuncts(q), &disjuncts(q2), budget)
}

fn fits(ds: &[Structure], sides: &Sides, budget: &Budget) -> Result<bool> {
    if !covers(ds, &sides.pos, budget)? {
        return Ok(false);
    }
    for d in ds {
        if sides.maps_to_negative(d, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn side(e: &LabeledExamples, examples: Vec<crate::model::PointedInstance>) -> Result<DualitySide> {
    DualitySide::new(e.schema().clone(), e.arity(), examples)
}

pub fn verify_extremal_ucq(kind: UcqKind, q: &UnionOfCQs, e: &LabeledExamples, budget: &Budget) -> Result<bool> {
    e.check_query(q.disjuncts()[0].body())?;
    let sides = Sides::new(e);
    let ds = disjuncts(q);
    if !fits(&ds, &sides, budget)? {
        return Ok(false);
    }
    let equivalent_to_positives =
        || -> Result<bool> { Ok(covers(&ds, &sides.pos, budget)? && covers(&sides.pos, &ds, budget)?) };
    let negatives = || side(e, e.negatives().to_vec());
    match kind {
        UcqKind::Any => Ok(true),
        UcqKind::MostSpecific => equivalent_to_positives(),
        UcqKind::MostGeneral => {
            let f = side(e, q.disjuncts().iter().map(|d| d.body().clone()).collect())?;
            check_hom_duality(&f, &negatives()?, budget)
        }
        UcqKind::Unique => Ok(equivalent_to_positives()?
            && check_hom_duality(&side(e, e.positives().to_vec())?, &negatives()?, budget)?),
    }
}

/// The union of the canonical queries of the positives, when it fits.
pub fn construct_most_specific_ucq(e: &LabeledExamples, budget: &Budget) -> Result<SearchOutcome<UnionOfCQs>> {
    let sides = Sides::new(e);
    if sides.pos.is_empty() {
        return Ok(SearchOutcome::NotExists);
    }
    for p in &sides.pos {
        if sides.maps_to_negative(p, budget)? {
            return Ok(SearchOutcome::NotExists);
        }
    }
    let qs = e
        .positives()
        .iter()
        .map(|p| ConjunctiveQuery::new(p.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchOutcome::Found(UnionOfCQs::new(qs)?))
}

/// A most-general fitting union exists iff the negatives admit a finite
/// obstruction set `F` and every positive is hit by a member of `F`; the
/// union of `F` is then the witness. Obstructions of up to `size_cap` values
/// are tried in increasing order and the result is verified exactly.
pub fn construct_most_general_ucq(
    e: &LabeledExamples,
    size_cap: usize,
    budget: &Budget,
) -> Result<SearchOutcome<UnionOfCQs>> {
    let sides = Sides::new(e);
    let t = top(&sides.schema, sides.arity);
    if !duality_exists(&sides.neg, &t, budget)? {
        return Ok(SearchOutcome::NotExists);
    }
    let negatives = side(e, e.negatives().to_vec())?;
    for cap in 1..=size_cap {
        let options = ConstructOptions {
            size_cap: cap,
            check_bound: cap.min(3),
        };
        let fs = match construct_structures(&sides.neg, &t, &sides.schema, options, budget) {
            Ok(fs) => fs,
            Err(Error::CapTooSmall(_)) => continue,
            Err(Error::InvalidParameter(_)) => return Err(Error::CapTooSmall(cap - 1)),
            Err(err) => return Err(err),
        };
        let fs = minimal_elements(fs, budget)?;
        let f_side = side(e, fs.iter().map(|f| f.to_instance(&sides.schema)).collect())?;
        if !check_hom_duality(&f_side, &negatives, budget)? {
            continue;
        }
        if fs.is_empty() || !covers(&fs, &sides.pos, budget)? {
            return Ok(SearchOutcome::NotExists);
        }
        let mut qs = fs
            .iter()
            .map(|f| ConjunctiveQuery::new(canonical_form(f).to_instance(&sides.schema)))
            .collect::<Result<Vec<_>>>()?;
        qs.sort();
        return Ok(SearchOutcome::Found(UnionOfCQs::new(qs)?));
    }
    Err(Error::CapTooSmall(size_cap))
}
