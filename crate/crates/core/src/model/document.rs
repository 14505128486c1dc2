//! JSON document format for instances, queries, unions and example sets.
//!
//! Every document is an object `{"schema": .., "kind": .., "body": ..}`. A
//! JSON array of such objects is a list document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ConjunctiveQuery, Fact, LabeledExamples, PointedInstance, Schema, UnionOfCQs};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Instance,
    Cq,
    Ucq,
    Examples,
}

impl DocumentKind {
    fn as_str(self) -> &'static str {
        match self {
            DocumentKind::Instance => "instance",
            DocumentKind::Cq => "cq",
            DocumentKind::Ucq => "ucq",
            DocumentKind::Examples => "examples",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Compact,
    Pretty,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Instance(PointedInstance),
    Cq(ConjunctiveQuery),
    Ucq(UnionOfCQs),
    Examples(LabeledExamples),
    List(Vec<Document>),
}

#[derive(Serialize, Deserialize)]
struct RawDocument {
    schema: BTreeMap<String, usize>,
    kind: String,
    body: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    facts: Vec<Vec<String>>,
    #[serde(default)]
    distinguished: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnion {
    disjuncts: Vec<RawInstance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExamples {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arity: Option<usize>,
    positives: Vec<RawInstance>,
    negatives: Vec<RawInstance>,
}

fn raw_instance(e: &PointedInstance) -> RawInstance {
    RawInstance {
        facts: e
            .facts()
            .iter()
            .map(|f| std::iter::once(f.relation.clone()).chain(f.args.iter().cloned()).collect())
            .collect(),
        distinguished: e.distinguished().to_vec(),
    }
}

fn cook_instance(schema: &Schema, raw: RawInstance, path: &str) -> Result<PointedInstance> {
    let mut facts = Vec::with_capacity(raw.facts.len());
    for (i, row) in raw.facts.into_iter().enumerate() {
        let mut it = row.into_iter();
        let relation = it
            .next()
            .ok_or_else(|| Error::Document(format!("{path}.facts[{i}]: empty fact")))?;
        facts.push(Fact {
            relation,
            args: it.collect(),
        });
    }
    PointedInstance::new(schema.clone(), facts, raw.distinguished)
        .map_err(|e| Error::Document(format!("{path}: {e}")))
}

fn body<T: for<'de> Deserialize<'de>>(value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Document(format!("body: {e}")))
}

impl Document {
    pub fn kind(&self) -> Option<DocumentKind> {
        match self {
            Document::Instance(_) => Some(DocumentKind::Instance),
            Document::Cq(_) => Some(DocumentKind::Cq),
            Document::Ucq(_) => Some(DocumentKind::Ucq),
            Document::Examples(_) => Some(DocumentKind::Examples),
            Document::List(_) => None,
        }
    }

    pub fn parse(text: &str) -> Result<Document> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::Document(format!("line {} column {}: {e}", e.line(), e.column())))?;
        Document::from_value(value)
    }

    fn from_value(value: Value) -> Result<Document> {
        if let Value::Array(items) = value {
            return items
                .into_iter()
                .enumerate()
                .map(|(i, v)| Document::from_value(v).map_err(|e| Error::Document(format!("[{i}]: {e}"))))
                .collect::<Result<Vec<_>>>()
                .map(Document::List);
        }
        let raw: RawDocument = serde_json::from_value(value).map_err(|e| Error::Document(e.to_string()))?;
        let schema = Schema::new(raw.schema);
        match raw.kind.as_str() {
            "instance" => Ok(Document::Instance(cook_instance(&schema, body(raw.body)?, "body")?)),
            "cq" => {
                let e = cook_instance(&schema, body(raw.body)?, "body")?;
                Ok(Document::Cq(ConjunctiveQuery::new_unsafe(e)))
            }
            "ucq" => {
                let raw_union: RawUnion = body(raw.body)?;
                let disjuncts = raw_union
                    .disjuncts
                    .into_iter()
                    .enumerate()
                    .map(|(i, d)| {
                        cook_instance(&schema, d, &format!("body.disjuncts[{i}]")).map(ConjunctiveQuery::new_unsafe)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Document::Ucq(
                    UnionOfCQs::new(disjuncts).map_err(|e| Error::Document(format!("body: {e}")))?,
                ))
            }
            "examples" => {
                let raw_ex: RawExamples = body(raw.body)?;
                let cook_all = |items: Vec<RawInstance>, label: &str| {
                    items
                        .into_iter()
                        .enumerate()
                        .map(|(i, d)| cook_instance(&schema, d, &format!("body.{label}[{i}]")))
                        .collect::<Result<Vec<_>>>()
                };
                let positives = cook_all(raw_ex.positives, "positives")?;
                let negatives = cook_all(raw_ex.negatives, "negatives")?;
                let arity = raw_ex
                    .arity
                    .or_else(|| positives.iter().chain(negatives.iter()).map(|e| e.arity()).next())
                    .unwrap_or(0);
                LabeledExamples::new(schema, arity, positives, negatives)
                    .map(Document::Examples)
                    .map_err(|e| Error::Document(format!("body: {e}")))
            }
            other => Err(Error::Document(format!("kind: unknown document kind {other:?}"))),
        }
    }

    fn to_value(&self) -> Value {
        let (schema, kind, body) = match self {
            Document::List(items) => return Value::Array(items.iter().map(Document::to_value).collect()),
            Document::Instance(e) => (e.schema(), DocumentKind::Instance, to_json(&raw_instance(e))),
            Document::Cq(q) => (q.schema(), DocumentKind::Cq, to_json(&raw_instance(q.body()))),
            Document::Ucq(u) => (
                u.schema(),
                DocumentKind::Ucq,
                to_json(&RawUnion {
                    disjuncts: u.disjuncts().iter().map(|q| raw_instance(q.body())).collect(),
                }),
            ),
            Document::Examples(ex) => (
                ex.schema(),
                DocumentKind::Examples,
                to_json(&RawExamples {
                    arity: Some(ex.arity()),
                    positives: ex.positives().iter().map(raw_instance).collect(),
                    negatives: ex.negatives().iter().map(raw_instance).collect(),
                }),
            ),
        };
        to_json(&RawDocument {
            schema: schema.as_map().clone(),
            kind: kind.as_str().to_string(),
            body,
        })
    }

    pub fn render(&self, format: Format) -> String {
        let value = self.to_value();
        match format {
            Format::Compact => serde_json::to_string(&value),
            Format::Pretty => serde_json::to_string_pretty(&value),
        }
        .expect("documents always serialize")
    }
}

fn to_json<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_order_is_schema_kind_body() {
        let s = Schema::new([("R", 2)]);
        let e = PointedInstance::from_tuples(&s, &[("R", &["b", "a"]), ("R", &["a", "b"])], &["a"]).unwrap();
        let text = Document::Instance(e).render(Format::Compact);
        assert_eq!(
            text,
            r#"{"schema":{"R":2},"kind":"instance","body":{"facts":[["R","a","b"],["R","b","a"]],"distinguished":["a"]}}"#
        );
    }

    #[test]
    fn malformed_documents_report_position() {
        let err = Document::parse("{\"schema\": {\"R\": 2},\n \"kind\": ").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = Document::parse(r#"{"schema":{"R":2},"kind":"instance","body":{"facts":[["R","a"]]}}"#).unwrap_err();
        assert!(err.to_string().contains("body"), "{err}");
    }

    #[test]
    fn list_documents_round_trip() {
        let s = Schema::new([("P", 1)]);
        let e = PointedInstance::from_tuples(&s, &[("P", &["a"])], &["a"]).unwrap();
        let doc = Document::List(vec![Document::Cq(ConjunctiveQuery::new(e.clone()).unwrap()), Document::Instance(e)]);
        let text = doc.render(Format::Pretty);
        assert_eq!(Document::parse(&text).unwrap(), doc);
    }
}
