use thiserror::Error;

/// Error type for user-supplied callbacks (predicates, aggregate and
/// projection functions); anything that implements `std::error::Error` flows
/// through the operators unchanged.
pub type DynError = Box<dyn std::error::Error + Send + Sync + 'static>;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("predicate failed on graph {graph}: {source}")]
    PredicateFailed { graph: u64, source: DynError },

    #[error("operand failed on collection element {index}: {source}")]
    ApplyFailed { index: usize, source: DynError },

    #[error("reduce operand failed folding element {index}: {source}")]
    ReduceFailed { index: usize, source: DynError },

    #[error("reduce of an empty collection")]
    EmptyReduce,

    #[error("aggregate function failed: {source}")]
    AggregateFailed { source: DynError },

    #[error("aggregate function produced a non-numeric value for key {key:?}")]
    AggregateNotNumeric { key: String },

    #[error(
        "cannot sort by {key:?}: graphs {first} and {second} carry values of incomparable kinds"
    )]
    SortTypeMismatch {
        key: String,
        first: u64,
        second: u64,
    },

    #[error("binary graph operator inputs come from different databases")]
    CrossDatabase,

    #[error("projection function failed on {element} {id}: {source}")]
    ProjectionFailed {
        element: &'static str,
        id: u64,
        source: DynError,
    },

    #[error("projection must preserve structure: {element} {id} changed its {what}")]
    StructureViolation {
        element: &'static str,
        id: u64,
        what: &'static str,
    },

    #[error("summarization callback failed: {source}")]
    SummarizeFailed { source: DynError },

    #[error("average over zero elements carrying key {key:?}")]
    EmptyAverage { key: String },

    #[error("non-numeric value under key {key:?} on element {element}")]
    NonNumeric { key: String, element: u64 },

    #[error("sum requires numeric values, found {found}")]
    NonNumericValue { found: String },
}
