//! Query-by-example fitting for conjunctive queries, unions of conjunctive
//! queries and tree-shaped unary queries.
//!
//! Given positive and negative data examples, the engine decides whether a
//! fitting query exists and constructs extremal fittings: most-specific,
//! weakly most-general, bases of most-general fittings, and unique fittings.

pub mod budget;
pub mod cqfit;
pub mod error;
pub mod frontier_duality;
pub mod homcore;
pub mod model;
pub mod oracle;
pub mod outcome;
pub mod treefit;
pub mod ucqfit;

mod canon;
mod structure;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use model::{
    canonical_cq, canonical_instance, ConjunctiveQuery, Document, DocumentKind, Fact, Format, LabeledExamples,
    PointedInstance, Schema, UnionOfCQs,
};
pub use outcome::SearchOutcome;
