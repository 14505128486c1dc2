//! Deciding whether a pair of finite sets is a homomorphism duality.

use super::relative::duality_exists;
use super::{c_acyclic, dual_structures, maximal_elements, minimal_elements, DualitySide};
use crate::budget::Budget;
use crate::error::Result;
use crate::homcore::{core_of, product2, search, top};
use crate::structure::Structure;

/// True iff for every data example `x`: `x` maps into a member of `D` exactly
/// when no member of `F` maps into `x`.
pub fn check_hom_duality(f: &DualitySide, d: &DualitySide, budget: &Budget) -> Result<bool> {
    f.check_compatible(d)?;
    let mut fs = Vec::new();
    for s in f.structures() {
        fs.push(core_of(&s, budget)?);
    }
    let fs = minimal_elements(fs, budget)?;
    let mut ds = Vec::new();
    for s in d.structures() {
        ds.push(core_of(&s, budget)?);
    }
    let ds = maximal_elements(ds, budget)?;
    if !fs.iter().all(c_acyclic) {
        return Ok(false);
    }
    for x in &fs {
        for y in &ds {
            if search::exists(x, y, budget)? {
                return Ok(false);
            }
        }
    }
    let top = top(f.schema(), f.arity());
    if !duality_exists(&ds, &top, budget)? {
        return Ok(false);
    }
    let mut duals = Vec::with_capacity(fs.len());
    for x in &fs {
        duals.push(dual_structures(x, budget)?);
    }
    every_product_maps(&duals, 0, top, &ds, budget)
}

/// Every product choosing one member per dual maps into `targets`, where
/// products that no data example maps into are skipped. Uses arc
/// consistency, which decides homomorphism into targets admitting a duality.
fn every_product_maps(
    duals: &[Vec<Structure>],
    depth: usize,
    acc: Structure,
    targets: &[Structure],
    budget: &Budget,
) -> Result<bool> {
    if !acc.is_data_example() {
        return Ok(true);
    }
    for t in targets {
        if search::arc_consistent(&acc, t, budget)? {
            return Ok(true);
        }
    }
    if depth == duals.len() {
        return Ok(false);
    }
    for member in &duals[depth] {
        let next = core_of(&product2(&acc, member), budget)?;
        if !every_product_maps(duals, depth + 1, next, targets, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}
