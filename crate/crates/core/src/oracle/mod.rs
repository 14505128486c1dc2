//! Brute-force enumerators, exhaustive duality checks and named fixtures.
//!
//! Everything here is deliberately naive; it exists to validate the
//! constructions elsewhere at small sizes.

mod fixtures;

pub use fixtures::{gen_fixture, Fixture, FixtureFamily, UNIT_EXAMPLES};

use std::collections::HashSet;

use crate::budget::Budget;
use crate::canon::{canonical_key, from_key, CanonKey};
use crate::error::{Error, Result};
use crate::frontier_duality::DualitySide;
use crate::homcore::search;
use crate::model::{ConjunctiveQuery, PointedInstance, Schema};
use crate::structure::Structure;

/// Largest number of candidate facts over which subsets are enumerated.
const MAX_SLOTS: usize = 40;

/// Data examples with at most `max_values` values, one per isomorphism type,
/// ordered by size and then by canonical encoding.
pub(crate) fn enumerate_structures(schema: &Schema, arity: usize, max_values: usize, budget: &Budget) -> Result<Vec<Structure>> {
    let arities: Vec<usize> = schema.relations().map(|(_, a)| a).collect();
    let mut out = Vec::new();
    for n in 0..=max_values {
        let mut slots: Vec<(usize, Vec<usize>)> = Vec::new();
        for (r, &a) in arities.iter().enumerate() {
            for code in 0..n.pow(a as u32) {
                slots.push((r, digits(code, n, a)));
            }
        }
        if slots.len() > MAX_SLOTS {
            return Err(Error::InvalidParameter(format!(
                "enumerating {} candidate facts over {n} values is out of reach",
                slots.len()
            )));
        }
        let cover: Vec<u64> = slots.iter().map(|(_, t)| t.iter().fold(0u64, |m, &v| m | (1 << v))).collect();
        let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
        let tuples: Vec<Vec<usize>> = (0..n.pow(arity as u32)).map(|c| digits(c, n, arity)).collect();
        let mut seen: HashSet<CanonKey> = HashSet::new();
        let mut level: Vec<CanonKey> = Vec::new();
        for mask in 0u64..(1u64 << slots.len()) {
            budget.tick()?;
            let used = (0..slots.len()).filter(|&i| mask & (1 << i) != 0).fold(0u64, |m, i| m | cover[i]);
            if used != full {
                continue;
            }
            let mut base = Structure {
                names: (0..n).map(|i| format!("v{i}")).collect(),
                rels: arities.iter().map(|&a| crate::structure::Relation::new(a)).collect(),
                dist: Vec::new(),
            };
            for (i, (r, t)) in slots.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    base.rels[*r].insert(t.clone());
                }
            }
            for dist in &tuples {
                base.dist = dist.clone();
                let key = canonical_key(&base);
                if seen.insert(key.clone()) {
                    level.push(key);
                }
            }
        }
        level.sort();
        out.extend(level.iter().map(|k| from_key(k, arities.clone())));
    }
    Ok(out)
}

fn digits(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = code % base.max(1);
        code /= base.max(1);
    }
    t
}

/// All data examples with at most `max_values` values, up to isomorphism.
pub fn enumerate_instances(schema: &Schema, arity: usize, max_values: usize, budget: &Budget) -> Result<Vec<PointedInstance>> {
    Ok(enumerate_structures(schema, arity, max_values, budget)?
        .iter()
        .map(|s| s.to_instance(schema))
        .collect())
}

/// All safe conjunctive queries with at most `max_vars` variables, up to isomorphism.
pub fn enumerate_cqs(schema: &Schema, arity: usize, max_vars: usize, budget: &Budget) -> Result<Vec<ConjunctiveQuery>> {
    enumerate_instances(schema, arity, max_vars, budget)?
        .into_iter()
        .map(ConjunctiveQuery::new)
        .collect()
}

/// A data example of at most `max_values` values (below `p` when given) on
/// which `(F, D)` fails to be a duality.
pub(crate) fn duality_counterexample(
    fs: &[Structure],
    ds: &[Structure],
    p: Option<&Structure>,
    schema: &Schema,
    arity: usize,
    max_values: usize,
    budget: &Budget,
) -> Result<Option<Structure>> {
    for x in enumerate_structures(schema, arity, max_values, budget)? {
        if let Some(p) = p {
            if !search::exists(&x, p, budget)? {
                continue;
            }
        }
        let mut into_d = false;
        for d in ds {
            if search::exists(&x, d, budget)? {
                into_d = true;
                break;
            }
        }
        let mut hit_by_f = false;
        for f in fs {
            if search::exists(f, &x, budget)? {
                hit_by_f = true;
                break;
            }
        }
        if into_d == hit_by_f {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

pub fn find_duality_counterexample(
    f: &DualitySide,
    d: &DualitySide,
    max_values: usize,
    p: Option<&PointedInstance>,
    budget: &Budget,
) -> Result<Option<PointedInstance>> {
    f.check_compatible(d)?;
    let ps = p.map(Structure::from_instance);
    Ok(duality_counterexample(
        &f.structures(),
        &d.structures(),
        ps.as_ref(),
        f.schema(),
        f.arity(),
        max_values,
        budget,
    )?
    .map(|s| s.to_instance(f.schema())))
}

/// Exhaustive duality check over all data examples with at most `max_values`
/// values, restricted to those mapping into `p` when given.
pub fn brute_check_duality(
    f: &DualitySide,
    d: &DualitySide,
    max_values: usize,
    p: Option<&PointedInstance>,
    budget: &Budget,
) -> Result<bool> {
    Ok(find_duality_counterexample(f, d, max_values, p, budget)?.is_none())
}

/// Isomorphism test by canonical labeling.
pub fn isomorphic(a: &PointedInstance, b: &PointedInstance) -> bool {
    a.schema() == b.schema() && crate::canon::isomorphic(&Structure::from_instance(a), &Structure::from_instance(b))
}
