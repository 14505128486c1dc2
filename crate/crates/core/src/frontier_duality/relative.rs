//! Homomorphism dualities relative to a pointed instance.

use std::collections::HashMap;

use super::{minimal_elements, DualitySide};
use crate::budget::Budget;
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::homcore::{core_of, product2, product2_tracked, search, union2};
use crate::model::PointedInstance;
use crate::oracle::{duality_counterexample, enumerate_structures};
use crate::structure::{Relation, Structure};

/// Condition for `e` to admit a finite obstruction set relative to `p`:
/// with marker relations for the values of `p`, the `p`-diagonal part of the
/// square of the core of the marked product dismantles to its diagonal.
pub fn dismantle_check(e_p: &PointedInstance, e_e: &PointedInstance, budget: &Budget) -> Result<bool> {
    e_p.check_compatible(e_e)?;
    dismantles(&Structure::from_instance(e_p), &Structure::from_instance(e_e), budget)
}

pub(crate) fn dismantles(p: &Structure, e: &Structure, budget: &Budget) -> Result<bool> {
    let p_adom = p.in_adom();
    let p_vals: Vec<usize> = (0..p.len()).filter(|&v| p_adom[v]).collect();
    let e_adom = e.in_adom();
    let with_markers = |s: &Structure, marks: &dyn Fn(usize, usize) -> bool| {
        let mut out = s.clone();
        for &pv in &p_vals {
            let mut rel = Relation::new(1);
            for v in 0..s.len() {
                if marks(pv, v) {
                    rel.insert(vec![v]);
                }
            }
            out.rels.push(rel);
        }
        out
    };
    let p_bar = with_markers(p, &|pv, v| pv == v);
    let e_bar = with_markers(e, &|_, v| e_adom[v]);
    let (prod, pairs) = product2_tracked(&p_bar, &e_bar);
    let p_of_name: HashMap<&str, usize> = prod
        .names
        .iter()
        .zip(&pairs)
        .map(|(n, &(x, _))| (n.as_str(), x))
        .collect();
    let i_bar = core_of(&prod, budget)?;
    let p_of: Vec<usize> = i_bar.names.iter().map(|n| p_of_name[n.as_str()]).collect();
    let (square, sq_pairs) = product2_tracked(&i_bar, &i_bar);
    let keep: Vec<bool> = sq_pairs.iter().map(|&(a, b)| p_of[a] == p_of[b]).collect();
    let diagonal: Vec<bool> = sq_pairs
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(&(a, b), _)| a == b)
        .collect();
    let sub = square.restrict(&keep);
    fold_to_diagonal(&sub, &diagonal, budget)
}

/// Greedily folds dominated non-diagonal values, least index first.
fn fold_to_diagonal(s: &Structure, diagonal: &[bool], budget: &Budget) -> Result<bool> {
    let n = s.len();
    let mut alive = vec![true; n];
    // occurrences[v] = (relation, tuple index, position)
    let mut occurrences: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    // values found at a position for a given tuple with that position blanked
    let mut holes: HashMap<(usize, usize, Vec<usize>), Vec<usize>> = HashMap::new();
    for (r, rel) in s.rels.iter().enumerate() {
        for (ti, t) in rel.tuples.iter().enumerate() {
            for (i, &v) in t.iter().enumerate() {
                occurrences[v].push((r, ti, i));
                let mut key = t.clone();
                key[i] = usize::MAX;
                holes.entry((r, i, key)).or_default().push(v);
            }
        }
    }
    let fact_alive = |t: &[usize], alive: &[bool]| t.iter().all(|&v| alive[v]);
    let mut remaining = diagonal.iter().filter(|d| !**d).count();
    while remaining > 0 {
        budget.tick()?;
        let mut folded = None;
        'candidates: for a in 0..n {
            if !alive[a] || diagonal[a] {
                continue;
            }
            let live: Vec<(usize, &Vec<usize>, usize)> = occurrences[a]
                .iter()
                .map(|&(r, ti, i)| (r, &s.rels[r].tuples[ti], i))
                .filter(|(_, t, _)| fact_alive(t, &alive))
                .collect();
            let Some(&(r0, t0, i0)) = live.first() else {
                folded = Some(a);
                break;
            };
            let mut key = t0.clone();
            key[i0] = usize::MAX;
            let candidates = holes.get(&(r0, i0, key)).cloned().unwrap_or_default();
            for b in candidates {
                if b == a || !alive[b] {
                    continue;
                }
                let ok = live.iter().all(|&(r, t, i)| {
                    let mut moved = t.clone();
                    moved[i] = b;
                    s.rels[r].contains(&moved) && fact_alive(&moved, &alive)
                });
                if ok {
                    folded = Some(a);
                    break 'candidates;
                }
            }
        }
        match folded {
            Some(a) => {
                alive[a] = false;
                remaining -= 1;
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// `e` is strictly subsumed when `p x e` maps into some other member `e'`
/// while `p x e'` does not map into `e`.
pub(crate) fn strictly_subsumed(i: usize, ds: &[Structure], p: &Structure, budget: &Budget) -> Result<bool> {
    let pe = product2(p, &ds[i]);
    for (j, other) in ds.iter().enumerate() {
        if j == i {
            continue;
        }
        if search::exists(&pe, other, budget)? && !search::exists(&product2(p, other), &ds[i], budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn non_subsumed(ds: &[Structure], p: &Structure, budget: &Budget) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    for i in 0..ds.len() {
        if !strictly_subsumed(i, ds, p, budget)? {
            out.push(ds[i].clone());
        }
    }
    Ok(out)
}

pub(crate) fn duality_exists(ds: &[Structure], p: &Structure, budget: &Budget) -> Result<bool> {
    for e in non_subsumed(ds, p, budget)? {
        if !dismantles(p, &e, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff some finite `F` makes `(F, D)` a duality relative to `p`.
pub fn relativized_duality_exists(d: &DualitySide, p: &PointedInstance, budget: &Budget) -> Result<bool> {
    check_against(d, p)?;
    duality_exists(&d.structures(), &Structure::from_instance(p), budget)
}

fn check_against(d: &DualitySide, p: &PointedInstance) -> Result<()> {
    if d.schema() != p.schema() {
        return Err(Error::SchemaMismatch(format!("{} vs {}", d.schema(), p.schema())));
    }
    if d.arity() != p.arity() {
        return Err(Error::ArityMismatch {
            expected: d.arity(),
            found: p.arity(),
        });
    }
    Ok(())
}

/// Bounds used by [`relativized_duality_construct`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Largest number of values of an enumerated candidate obstruction.
    pub size_cap: usize,
    /// Largest instance size used when validating the result.
    pub check_bound: usize,
}

impl ConstructOptions {
    pub fn new(size_cap: usize) -> Self {
        ConstructOptions {
            size_cap,
            check_bound: 3,
        }
    }
}

/// Builds `F` with `(F, D)` a duality relative to `p`, from candidate
/// obstructions of at most `size_cap` values.
///
/// Each non-subsumed member `e` of `D` contributes the hom-minimal data
/// examples below `p` that do not map into `e`; `F` holds the minimal
/// disjoint unions choosing one such obstruction per member. The result is
/// validated by exhaustive search up to `check_bound` values.
pub fn relativized_duality_construct(
    d: &DualitySide,
    p: &PointedInstance,
    options: ConstructOptions,
    budget: &Budget,
) -> Result<DualitySide> {
    check_against(d, p)?;
    let ds = d.structures();
    let ps = Structure::from_instance(p);
    if !duality_exists(&ds, &ps, budget)? {
        return Err(Error::InvalidParameter(
            "no finite obstruction set exists relative to the given instance".into(),
        ));
    }
    let fs = construct_structures(&ds, &ps, d.schema(), options, budget)?;
    DualitySide::new(
        d.schema().clone(),
        d.arity(),
        fs.iter().map(|s| s.to_instance(d.schema())).collect(),
    )
}

pub(crate) fn construct_structures(
    ds: &[Structure],
    p: &Structure,
    schema: &crate::model::Schema,
    options: ConstructOptions,
    budget: &Budget,
) -> Result<Vec<Structure>> {
    let arity = p.dist.len();
    let mut candidates = Vec::new();
    for x in enumerate_structures(schema, arity, options.size_cap, budget)? {
        if search::exists(&x, p, budget)? {
            candidates.push(x);
        }
    }
    let kept = non_subsumed(ds, p, budget)?;
    let combined = if kept.is_empty() {
        minimal_elements(candidates, budget)?
    } else {
        let mut per_member = Vec::with_capacity(kept.len());
        for e in &kept {
            let mut avoid = Vec::new();
            for x in &candidates {
                if !search::exists(x, e, budget)? {
                    avoid.push(x.clone());
                }
            }
            per_member.push(minimal_elements(avoid, budget)?);
        }
        let mut combos: Vec<Structure> = vec![];
        let mut stack: Vec<(usize, Option<Structure>)> = vec![(0, None)];
        while let Some((depth, acc)) = stack.pop() {
            budget.tick()?;
            if depth == per_member.len() {
                if let Some(s) = acc {
                    combos.push(core_of(&s, budget)?);
                }
                continue;
            }
            for x in per_member[depth].iter().rev() {
                let next = match &acc {
                    None => x.clone(),
                    Some(a) => union2(a, x),
                };
                stack.push((depth + 1, Some(next)));
            }
        }
        minimal_elements(combos, budget)?
    };
    let fs: Vec<Structure> = combined.iter().map(canonical_form).collect();
    if duality_counterexample(&fs, ds, Some(p), schema, arity, options.check_bound, budget)?.is_some() {
        return Err(Error::CapTooSmall(options.size_cap));
    }
    Ok(fs)
}
