//! Homomorphisms, arc consistency, cores, direct products and disjoint unions.

pub(crate) mod search;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::model::{PointedInstance, Schema};
use crate::structure::{Relation, Structure};

/// A homomorphism, total on the active domain and distinguished values.
pub type Mapping = BTreeMap<String, String>;

/// Name of the single value of the empty product.
pub const STAR: &str = "*";

pub fn find_homomorphism(src: &PointedInstance, dst: &PointedInstance, budget: &Budget) -> Result<Option<Mapping>> {
    src.check_compatible(dst)?;
    let (s, d) = (Structure::from_instance(src), Structure::from_instance(dst));
    Ok(search::find(&s, &d, budget)?.map(|h| {
        h.iter()
            .enumerate()
            .map(|(x, &y)| (s.names[x].clone(), d.names[y].clone()))
            .collect()
    }))
}

pub fn hom_exists(src: &PointedInstance, dst: &PointedInstance, budget: &Budget) -> Result<bool> {
    Ok(find_homomorphism(src, dst, budget)?.is_some())
}

/// True iff every c-acyclic pointed instance that maps into `src` also maps
/// into `dst`.
pub fn arc_consistent(src: &PointedInstance, dst: &PointedInstance, budget: &Budget) -> Result<bool> {
    src.check_compatible(dst)?;
    search::arc_consistent(&Structure::from_instance(src), &Structure::from_instance(dst), budget)
}

pub fn hom_equivalent(e1: &PointedInstance, e2: &PointedInstance, budget: &Budget) -> Result<bool> {
    Ok(hom_exists(e1, e2, budget)? && hom_exists(e2, e1, budget)?)
}

pub fn compute_core(e: &PointedInstance, budget: &Budget) -> Result<PointedInstance> {
    Ok(core_of(&Structure::from_instance(e), budget)?.to_instance(e.schema()))
}

pub(crate) fn equivalent(a: &Structure, b: &Structure, budget: &Budget) -> Result<bool> {
    Ok(search::exists(a, b, budget)? && search::exists(b, a, budget)?)
}

/// Drops non-distinguished values `v` for which some other value `w` makes
/// the map sending `v` to `w` and fixing everything else an endomorphism.
pub(crate) fn fold_dominated(s: &Structure, budget: &Budget) -> Result<Structure> {
    let n = s.len();
    let fixed = s.is_distinguished();
    let mut occ: Vec<Vec<(usize, &Vec<usize>)>> = vec![Vec::new(); n];
    for (r, t) in s.facts() {
        for (i, &v) in t.iter().enumerate() {
            if !t[..i].contains(&v) {
                occ[v].push((r, t));
            }
        }
    }
    let mut alive = vec![true; n];
    let mut changed = true;
    while changed {
        changed = false;
        for v in (0..n).rev() {
            if fixed[v] || !alive[v] {
                continue;
            }
            let live: Vec<&(usize, &Vec<usize>)> = occ[v].iter().filter(|(_, t)| t.iter().all(|&x| alive[x])).collect();
            for w in 0..n {
                if w == v || !alive[w] {
                    continue;
                }
                budget.tick()?;
                let folds = live.iter().all(|(r, t)| {
                    let img: Vec<usize> = t.iter().map(|&x| if x == v { w } else { x }).collect();
                    s.rels[*r].contains(&img)
                });
                if folds {
                    alive[v] = false;
                    changed = true;
                    break;
                }
            }
        }
    }
    Ok(if alive.iter().all(|a| *a) { s.clone() } else { s.restrict(&alive) })
}

/// Folds dominated values, then retracts away one non-distinguished value at
/// a time until none can go.
pub(crate) fn core_of(s: &Structure, budget: &Budget) -> Result<Structure> {
    let mut cur = fold_dominated(&s.trim(), budget)?;
    'outer: loop {
        let fixed = cur.is_distinguished();
        for v in (0..cur.len()).rev() {
            if fixed[v] {
                continue;
            }
            let mut keep = vec![true; cur.len()];
            keep[v] = false;
            let target = cur.restrict(&keep);
            if let Some(h) = search::find(&cur, &target, budget)? {
                cur = target.image_of(&cur, &h);
                continue 'outer;
            }
        }
        return Ok(cur);
    }
}

/// The single-value instance containing every possible fact.
pub(crate) fn top(schema: &Schema, arity: usize) -> Structure {
    let mut s = Structure::empty(schema, 1, vec![STAR.to_string()], vec![0; arity]);
    for rel in &mut s.rels {
        let a = rel.arity;
        rel.insert(vec![0; a]);
    }
    s
}

pub(crate) fn pair_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Binary product restricted to values that occur in a fact or are distinguished.
pub(crate) fn product2(a: &Structure, b: &Structure) -> Structure {
    product2_tracked(a, b).0
}

/// Product together with the pair of factor values behind each product value.
pub(crate) fn product2_tracked(a: &Structure, b: &Structure) -> (Structure, Vec<(usize, usize)>) {
    let m = b.len();
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut pairs = Vec::new();
    let mut id = |x: usize, y: usize, names: &mut Vec<String>, pairs: &mut Vec<(usize, usize)>| -> usize {
        *index.entry(x * m + y).or_insert_with(|| {
            names.push(pair_name(&a.names[x], &b.names[y]));
            pairs.push((x, y));
            names.len() - 1
        })
    };
    let dist: Vec<usize> = a
        .dist
        .iter()
        .zip(&b.dist)
        .map(|(&x, &y)| id(x, y, &mut names, &mut pairs))
        .collect();
    let mut rels = Vec::with_capacity(a.rels.len());
    for (ra, rb) in a.rels.iter().zip(&b.rels) {
        let mut out = Relation::new(ra.arity);
        for ta in &ra.tuples {
            for tb in &rb.tuples {
                let t: Vec<usize> = ta.iter().zip(tb).map(|(&x, &y)| id(x, y, &mut names, &mut pairs)).collect();
                out.insert(t);
            }
        }
        rels.push(out);
    }
    (Structure { names, rels, dist }, pairs)
}

pub(crate) fn product_all<'a>(schema: &Schema, arity: usize, items: impl IntoIterator<Item = &'a Structure>) -> Structure {
    let mut it = items.into_iter();
    match it.next() {
        None => top(schema, arity),
        Some(first) => it.fold(first.clone(), |acc, s| product2(&acc, s)),
    }
}

/// Direct product; the empty product is the all-facts singleton.
pub fn direct_product(schema: &Schema, arity: usize, es: &[PointedInstance]) -> Result<PointedInstance> {
    for e in es {
        if e.schema() != schema {
            return Err(Error::SchemaMismatch(format!("{} vs {}", schema, e.schema())));
        }
        if e.arity() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: e.arity(),
            });
        }
    }
    let structs: Vec<Structure> = es.iter().map(Structure::from_instance).collect();
    Ok(product_all(schema, arity, &structs).to_instance(schema))
}

/// Disjoint union identifying the two distinguished tuples positionally.
pub(crate) fn union2(a: &Structure, b: &Structure) -> Structure {
    let n = a.len();
    let total = n + b.len();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for (&x, &y) in a.dist.iter().zip(&b.dist) {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, n + y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    }
    let mut class_of = vec![usize::MAX; total];
    let mut names: Vec<String> = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut root_class: HashMap<usize, usize> = HashMap::new();
    for v in 0..total {
        let r = find(&mut parent, v);
        if let Some(&c) = root_class.get(&r) {
            class_of[v] = c;
            continue;
        }
        let base = if r < n { &a.names[r] } else { &b.names[r - n] };
        let mut name = base.clone();
        while used.contains(&name) {
            name.push('\'');
        }
        used.insert(name.clone());
        names.push(name);
        root_class.insert(r, names.len() - 1);
        class_of[v] = names.len() - 1;
    }
    let rels = a
        .rels
        .iter()
        .zip(&b.rels)
        .map(|(ra, rb)| {
            let mut out = Relation::new(ra.arity);
            for t in &ra.tuples {
                out.insert(t.iter().map(|&v| class_of[v]).collect());
            }
            for t in &rb.tuples {
                out.insert(t.iter().map(|&v| class_of[n + v]).collect());
            }
            out
        })
        .collect();
    let dist = a.dist.iter().map(|&x| class_of[x]).collect();
    Structure { names, rels, dist }
}

pub fn disjoint_union(e1: &PointedInstance, e2: &PointedInstance) -> Result<PointedInstance> {
    e1.check_compatible(e2)?;
    Ok(union2(&Structure::from_instance(e1), &Structure::from_instance(e2)).to_instance(e1.schema()))
}
