//! C-acyclicity, frontiers, obstruction duals, homomorphism dualities and
//! relativized dualities.

mod dual;
mod frontier;
mod homdual;
mod relative;

pub(crate) use dual::pointed_duals;
pub use dual::single_obstruction_dual;
pub use frontier::frontier;
pub use homdual::check_hom_duality;
pub use relative::{dismantle_check, relativized_duality_construct, relativized_duality_exists, ConstructOptions};

pub(crate) use dual::dual_structures;
pub(crate) use relative::{construct_structures, duality_exists};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::homcore::search;
use crate::model::{ConjunctiveQuery, PointedInstance, Schema};
use crate::structure::Structure;

/// Frontier of a query: a finite complete set of minimal weakenings.
#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    pub members: Vec<ConjunctiveQuery>,
}

impl Frontier {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members whose answer variables do not all occur in the body.
    pub fn unsafe_members(&self) -> impl Iterator<Item = &ConjunctiveQuery> {
        self.members.iter().filter(|q| !q.is_safe())
    }
}

/// One side of a homomorphism duality.
#[derive(Debug, Clone, PartialEq)]
pub struct DualitySide {
    schema: Schema,
    arity: usize,
    examples: Vec<PointedInstance>,
}

impl DualitySide {
    pub fn new(schema: Schema, arity: usize, examples: Vec<PointedInstance>) -> Result<Self> {
        for e in &examples {
            if e.schema() != &schema {
                return Err(Error::SchemaMismatch(format!("{} vs {}", schema, e.schema())));
            }
            if e.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: e.arity(),
                });
            }
        }
        Ok(DualitySide { schema, arity, examples })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn examples(&self) -> &[PointedInstance] {
        &self.examples
    }

    pub fn into_examples(self) -> Vec<PointedInstance> {
        self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub(crate) fn check_compatible(&self, other: &DualitySide) -> Result<()> {
        if self.schema != other.schema {
            return Err(Error::SchemaMismatch(format!("{} vs {}", self.schema, other.schema)));
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub(crate) fn structures(&self) -> Vec<Structure> {
        self.examples.iter().map(Structure::from_instance).collect()
    }
}

/// True iff every cycle of the incidence multigraph passes through a
/// distinguished value.
pub fn is_c_acyclic(e: &PointedInstance) -> bool {
    c_acyclic(&Structure::from_instance(e))
}

pub(crate) fn c_acyclic(s: &Structure) -> bool {
    let fixed = s.is_distinguished();
    let n = s.len();
    let facts: Vec<&Vec<usize>> = s.facts().map(|(_, t)| t).collect();
    let mut parent: Vec<usize> = (0..n + facts.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, t) in facts.iter().enumerate() {
        for &v in t.iter() {
            if fixed[v] {
                continue;
            }
            let (a, b) = (root(&mut parent, v), root(&mut parent, n + i));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
    }
    true
}

/// Keeps the members that map into no other member (hom-maximal ones),
/// dropping duplicates up to hom-equivalence. Order of survivors follows input.
pub(crate) fn maximal_elements(items: Vec<Structure>, budget: &Budget) -> Result<Vec<Structure>> {
    let mut kept: Vec<Structure> = Vec::new();
    for x in items {
        let mut dominated = false;
        for k in &kept {
            if search::exists(&x, k, budget)? {
                dominated = true;
                break;
            }
        }
        if dominated {
            continue;
        }
        let mut next = Vec::with_capacity(kept.len() + 1);
        for k in kept {
            if !search::exists(&k, &x, budget)? {
                next.push(k);
            }
        }
        next.push(x);
        kept = next;
    }
    Ok(kept)
}

/// Keeps the members that no other member maps into (hom-minimal ones),
/// dropping duplicates up to hom-equivalence.
pub(crate) fn minimal_elements(items: Vec<Structure>, budget: &Budget) -> Result<Vec<Structure>> {
    let mut kept: Vec<Structure> = Vec::new();
    for x in items {
        let mut dominated = false;
        for k in &kept {
            if search::exists(k, &x, budget)? {
                dominated = true;
                break;
            }
        }
        if dominated {
            continue;
        }
        let mut next = Vec::with_capacity(kept.len() + 1);
        for k in kept {
            if !search::exists(&x, &k, budget)? {
                next.push(k);
            }
        }
        next.push(x);
        kept = next;
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_acyclicity_examples() {
        let s = Schema::new([("R", 2)]);
        let loop_at_answer = PointedInstance::from_tuples(&s, &[("R", &["x", "x"])], &["x"]).unwrap();
        assert!(is_c_acyclic(&loop_at_answer));
        let boolean_loop = PointedInstance::from_tuples(&s, &[("R", &["x", "x"])], &[]).unwrap();
        assert!(!is_c_acyclic(&boolean_loop));
        let c3 = PointedInstance::from_tuples(&s, &[("R", &["a", "b"]), ("R", &["b", "c"]), ("R", &["c", "a"])], &[]).unwrap();
        assert!(!is_c_acyclic(&c3));
        let two_cycle = PointedInstance::from_tuples(&s, &[("R", &["a", "b"]), ("R", &["b", "a"])], &[]).unwrap();
        assert!(!is_c_acyclic(&two_cycle));
        let through_answer = PointedInstance::from_tuples(&s, &[("R", &["a", "b"]), ("R", &["b", "a"])], &["a"]).unwrap();
        assert!(is_c_acyclic(&through_answer));
        let tree = PointedInstance::from_tuples(&s, &[("R", &["a", "b"]), ("R", &["a", "c"]), ("R", &["d", "a"])], &["a"]).unwrap();
        assert!(is_c_acyclic(&tree));
    }
}
