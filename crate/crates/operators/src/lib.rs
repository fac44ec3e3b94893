//! The analytical operator algebra over logical graphs and graph
//! collections: selection, duplicate elimination, sorting and prefixes on
//! collections; combination, overlap and exclusion between graphs;
//! aggregation, projection and summarization on single graphs; and the
//! apply/reduce combinators lifting graph operators to collections.
//!
//! Operators are pure functions over immutable inputs. Results that
//! construct new graphs are temporaries with fresh head ids; persisting them
//! is the store's business.

pub mod aggregates;
pub mod binary;
pub mod collection;
pub mod error;
pub mod summarize;
pub mod unary;

pub use aggregates::Attributed;
pub use binary::{combine, exclude, overlap};
pub use collection::{
    apply, difference, distinct, intersect, reduce, select, sort_by, top, union, SortOrder,
};
pub use error::{DynError, OperatorError};
pub use summarize::{summarize, GroupKey};
pub use unary::{aggregate, project};
