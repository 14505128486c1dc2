//! Schemas, pointed instances, conjunctive queries and labeled examples.
//!
//! A conjunctive query and its canonical pointed instance share one
//! representation: the body facts over variables plus the tuple of answer
//! variables. Values are opaque strings.

mod document;

pub use document::{Document, DocumentKind, Format};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Relation names with their arities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Schema {
    relations: BTreeMap<String, usize>,
}

impl Schema {
    pub fn new<I, S>(relations: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Schema {
            relations: relations.into_iter().map(|(n, a)| (n.into(), a)).collect(),
        }
    }

    pub fn arity(&self, relation: &str) -> Option<usize> {
        self.relations.get(relation).copied()
    }

    /// Relations in lexicographic order.
    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.relations.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.relations.values().copied().max().unwrap_or(0)
    }

    /// Position of a relation in the lexicographic order.
    pub fn index_of(&self, relation: &str) -> Option<usize> {
        self.relations.keys().position(|n| n == relation)
    }

    pub fn as_map(&self) -> &BTreeMap<String, usize> {
        &self.relations
    }

    /// Fails unless every relation is unary or binary.
    pub fn require_binary(&self) -> Result<()> {
        match self.relations.values().find(|a| **a > 2 || **a == 0) {
            Some(a) => Err(Error::NonBinarySchema(*a)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.relations.iter().map(|(n, a)| format!("{n}/{a}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A single fact `R(a1, ..., an)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub relation: String,
    pub args: Vec<String>,
}

impl Fact {
    pub fn new<S: Into<String>, I, V>(relation: S, args: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<String>,
    {
        Fact {
            relation: relation.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.relation, self.args.join(","))
    }
}

/// A finite instance together with a tuple of distinguished values.
///
/// Distinguished values need not occur in any fact. When they all do, the
/// pointed instance is a data example.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedInstance {
    schema: Schema,
    facts: BTreeSet<Fact>,
    distinguished: Vec<String>,
}

impl PointedInstance {
    pub fn new<I, D, V>(schema: Schema, facts: I, distinguished: D) -> Result<Self>
    where
        I: IntoIterator<Item = Fact>,
        D: IntoIterator<Item = V>,
        V: Into<String>,
    {
        let facts: BTreeSet<Fact> = facts.into_iter().collect();
        for fact in &facts {
            match schema.arity(&fact.relation) {
                None => {
                    return Err(Error::IllTyped {
                        fact: fact.to_string(),
                        reason: format!("relation {} is not in the schema", fact.relation),
                    })
                }
                Some(a) if a != fact.args.len() => {
                    return Err(Error::IllTyped {
                        fact: fact.to_string(),
                        reason: format!("expected {a} arguments"),
                    })
                }
                _ => {}
            }
        }
        Ok(PointedInstance {
            schema,
            facts,
            distinguished: distinguished.into_iter().map(Into::into).collect(),
        })
    }

    /// Builds from `(relation, args)` pairs; convenient for tests and fixtures.
    pub fn from_tuples(schema: &Schema, facts: &[(&str, &[&str])], distinguished: &[&str]) -> Result<Self> {
        PointedInstance::new(
            schema.clone(),
            facts.iter().map(|(r, args)| Fact::new(*r, args.iter().copied())),
            distinguished.iter().copied(),
        )
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn facts(&self) -> &BTreeSet<Fact> {
        &self.facts
    }

    pub fn distinguished(&self) -> &[String] {
        &self.distinguished
    }

    pub fn arity(&self) -> usize {
        self.distinguished.len()
    }

    /// Values occurring in some fact.
    pub fn adom(&self) -> BTreeSet<&str> {
        self.facts
            .iter()
            .flat_map(|f| f.args.iter().map(String::as_str))
            .collect()
    }

    /// Active domain together with the distinguished values.
    pub fn values(&self) -> BTreeSet<&str> {
        let mut vals = self.adom();
        vals.extend(self.distinguished.iter().map(String::as_str));
        vals
    }

    pub fn num_values(&self) -> usize {
        self.values().len()
    }

    /// True when every distinguished value occurs in a fact.
    pub fn is_data_example(&self) -> bool {
        let adom = self.adom();
        self.distinguished.iter().all(|d| adom.contains(d.as_str()))
    }

    /// Unique names property: distinguished values are pairwise distinct.
    pub fn has_unp(&self) -> bool {
        let set: BTreeSet<&String> = self.distinguished.iter().collect();
        set.len() == self.distinguished.len()
    }

    pub fn is_distinguished(&self, value: &str) -> bool {
        self.distinguished.iter().any(|d| d == value)
    }

    /// Subinstance induced by `keep`; the distinguished tuple is retained.
    pub fn induced(&self, keep: &BTreeSet<&str>) -> PointedInstance {
        PointedInstance {
            schema: self.schema.clone(),
            facts: self
                .facts
                .iter()
                .filter(|f| f.args.iter().all(|a| keep.contains(a.as_str())))
                .cloned()
                .collect(),
            distinguished: self.distinguished.clone(),
        }
    }

    /// Same instance with a different distinguished tuple.
    pub fn with_distinguished(&self, distinguished: Vec<String>) -> PointedInstance {
        PointedInstance {
            schema: self.schema.clone(),
            facts: self.facts.clone(),
            distinguished,
        }
    }

    /// Applies a value map; values absent from the map are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> PointedInstance {
        let f = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
        PointedInstance {
            schema: self.schema.clone(),
            facts: self
                .facts
                .iter()
                .map(|fact| Fact {
                    relation: fact.relation.clone(),
                    args: fact.args.iter().map(f).collect(),
                })
                .collect(),
            distinguished: self.distinguished.iter().map(f).collect(),
        }
    }

    pub(crate) fn from_parts(schema: Schema, facts: BTreeSet<Fact>, distinguished: Vec<String>) -> Self {
        PointedInstance {
            schema,
            facts,
            distinguished,
        }
    }

    pub(crate) fn check_compatible(&self, other: &PointedInstance) -> Result<()> {
        if self.schema != other.schema {
            return Err(Error::SchemaMismatch(format!("{} vs {}", self.schema, other.schema)));
        }
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for PointedInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facts: Vec<String> = self.facts.iter().map(Fact::to_string).collect();
        write!(f, "({{{}}} @ ({}))", facts.join(", "), self.distinguished.join(","))
    }
}

/// A conjunctive query, stored as its canonical pointed instance.
///
/// Queries built with [`ConjunctiveQuery::new`] are safe. Frontier
/// constructions may produce unsafe queries, whose answer variables need not
/// occur in the body; those are built with [`ConjunctiveQuery::new_unsafe`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjunctiveQuery {
    body: PointedInstance,
}

impl ConjunctiveQuery {
    pub fn new(body: PointedInstance) -> Result<Self> {
        let adom = body.adom();
        if let Some(x) = body.distinguished.iter().find(|d| !adom.contains(d.as_str())) {
            return Err(Error::WellDefinedness(x.clone()));
        }
        Ok(ConjunctiveQuery { body })
    }

    pub fn new_unsafe(body: PointedInstance) -> Self {
        ConjunctiveQuery { body }
    }

    pub fn body(&self) -> &PointedInstance {
        &self.body
    }

    pub fn into_body(self) -> PointedInstance {
        self.body
    }

    pub fn answer_vars(&self) -> &[String] {
        &self.body.distinguished
    }

    pub fn arity(&self) -> usize {
        self.body.arity()
    }

    pub fn schema(&self) -> &Schema {
        &self.body.schema
    }

    pub fn is_safe(&self) -> bool {
        self.body.is_data_example()
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facts: Vec<String> = self.body.facts.iter().map(Fact::to_string).collect();
        let body = if facts.is_empty() { "true".to_string() } else { facts.join(" & ") };
        write!(f, "q({}) :- {}", self.body.distinguished.join(","), body)
    }
}

/// Canonical query of a data example.
pub fn canonical_cq(e: &PointedInstance) -> Result<ConjunctiveQuery> {
    ConjunctiveQuery::new(e.clone())
}

/// Canonical pointed instance of a query.
pub fn canonical_instance(q: &ConjunctiveQuery) -> PointedInstance {
    q.body.clone()
}

/// A finite non-empty union of conjunctive queries of one arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnionOfCQs {
    disjuncts: Vec<ConjunctiveQuery>,
}

impl UnionOfCQs {
    pub fn new(disjuncts: Vec<ConjunctiveQuery>) -> Result<Self> {
        let first = disjuncts
            .first()
            .ok_or_else(|| Error::InvalidParameter("a union needs at least one disjunct".into()))?;
        for q in &disjuncts[1..] {
            first.body.check_compatible(&q.body)?;
        }
        Ok(UnionOfCQs { disjuncts })
    }

    pub fn disjuncts(&self) -> &[ConjunctiveQuery] {
        &self.disjuncts
    }

    pub fn arity(&self) -> usize {
        self.disjuncts[0].arity()
    }

    pub fn schema(&self) -> &Schema {
        self.disjuncts[0].schema()
    }
}

impl fmt::Display for UnionOfCQs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.disjuncts.iter().map(ConjunctiveQuery::to_string).collect();
        write!(f, "{}", parts.join("  |  "))
    }
}

/// Positive and negative data examples over one schema and arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledExamples {
    schema: Schema,
    arity: usize,
    positives: Vec<PointedInstance>,
    negatives: Vec<PointedInstance>,
}

impl LabeledExamples {
    pub fn new(
        schema: Schema,
        arity: usize,
        positives: Vec<PointedInstance>,
        negatives: Vec<PointedInstance>,
    ) -> Result<Self> {
        for e in positives.iter().chain(negatives.iter()) {
            if e.schema != schema {
                return Err(Error::SchemaMismatch(format!("{} vs {}", schema, e.schema)));
            }
            if e.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: e.arity(),
                });
            }
            if let Some(d) = e.distinguished.iter().find(|d| !e.adom().contains(d.as_str())) {
                return Err(Error::WellDefinedness(d.clone()));
            }
        }
        Ok(LabeledExamples {
            schema,
            arity,
            positives,
            negatives,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn positives(&self) -> &[PointedInstance] {
        &self.positives
    }

    pub fn negatives(&self) -> &[PointedInstance] {
        &self.negatives
    }

    /// Total number of facts over all negative examples.
    pub fn negative_size(&self) -> usize {
        self.negatives.iter().map(|e| e.facts.len()).sum()
    }

    pub(crate) fn check_query(&self, q: &PointedInstance) -> Result<()> {
        if q.schema != self.schema {
            return Err(Error::SchemaMismatch(format!("{} vs {}", self.schema, q.schema)));
        }
        if q.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: q.arity(),
            });
        }
        Ok(())
    }
}
