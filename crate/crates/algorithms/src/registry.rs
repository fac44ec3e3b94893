//! Registry of pluggable algorithms, addressed by symbol from workflows.
//! Each entry declares its output arity, which the call operators enforce.

use std::collections::BTreeMap;

use epgm_model::{GraphCollection, LogicalGraph};

use crate::btg::{btg_extract, BtgParams};
use crate::label_propagation::{community_split, label_propagation, DEFAULT_MAX_ITERATIONS};
use crate::AlgorithmError;

/// Algorithm input: a single graph or a collection.
#[derive(Debug, Clone)]
pub enum CallInput {
    Graph(LogicalGraph),
    Collection(GraphCollection),
}

impl CallInput {
    /// Collections passed where one graph is expected contribute their
    /// first element; this mirrors how workflows hand a one-graph collection
    /// to a graph algorithm.
    pub fn into_graph(self) -> Result<LogicalGraph, AlgorithmError> {
        match self {
            CallInput::Graph(g) => Ok(g),
            CallInput::Collection(c) => c
                .first()
                .cloned()
                .ok_or(AlgorithmError::EmptyCollectionInput),
        }
    }
}

#[derive(Debug, Clone)]
pub enum CallOutput {
    Graph(LogicalGraph),
    Collection(GraphCollection),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputArity {
    Graph,
    Collection,
}

/// String-keyed parameters as they arrive from workflow scripts; each
/// algorithm parses and validates its own.
pub type Params = BTreeMap<String, String>;

pub type AlgorithmFn =
    Box<dyn Fn(CallInput, &Params) -> Result<CallOutput, AlgorithmError> + Send + Sync>;

pub struct AlgorithmRegistry {
    entries: BTreeMap<String, (OutputArity, AlgorithmFn)>,
}

impl AlgorithmRegistry {
    /// Empty registry, for tests that register their own algorithms.
    pub fn empty() -> Self {
        AlgorithmRegistry {
            entries: BTreeMap::new(),
        }
    }

    /// Registry with the built-in algorithms:
    /// `:LabelPropagation`, `:CommunityDetection` and
    /// `:BusinessTransactionGraphs`.
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        let mut registry = AlgorithmRegistry::empty();

        registry
            .register("LabelPropagation", OutputArity::Graph, |input, params| {
                let graph = input.into_graph()?;
                let key = require_param(params, "propertyKey")?;
                let max_iterations =
                    optional_u32(params, "maxIterations")?.unwrap_or(DEFAULT_MAX_ITERATIONS);
                Ok(CallOutput::Graph(label_propagation(
                    &graph,
                    &key,
                    max_iterations,
                )))
            })
            .expect("fresh symbol");

        registry
            .register(
                "CommunityDetection",
                OutputArity::Collection,
                |input, params| {
                    let graph = input.into_graph()?;
                    let graph_key = require_param(params, "graphPropertyKey")?;
                    let vertex_key = params
                        .get("propertyKey")
                        .cloned()
                        .unwrap_or_else(|| graph_key.clone());
                    let max_iterations =
                        optional_u32(params, "maxIterations")?.unwrap_or(DEFAULT_MAX_ITERATIONS);
                    let labeled = label_propagation(&graph, &vertex_key, max_iterations);
                    Ok(CallOutput::Collection(community_split(
                        &labeled,
                        &vertex_key,
                        &graph_key,
                    )?))
                },
            )
            .expect("fresh symbol");

        registry
            .register(
                "BusinessTransactionGraphs",
                OutputArity::Collection,
                |input, params| {
                    let graph = input.into_graph()?;
                    let mut btg_params = BtgParams::default();
                    if let Some(labels) = params.get("transactionalLabels") {
                        btg_params.transactional_labels =
                            labels.split(',').map(|s| s.trim().to_string()).collect();
                    }
                    if let Some(labels) = params.get("masterLabels") {
                        btg_params.master_labels =
                            labels.split(',').map(|s| s.trim().to_string()).collect();
                    }
                    Ok(CallOutput::Collection(btg_extract(&graph, &btg_params)?))
                },
            )
            .expect("fresh symbol");

        registry
    }

    /// Register an algorithm under a fresh symbol (without the leading `:`).
    pub fn register<F>(
        &mut self,
        symbol: impl Into<String>,
        arity: OutputArity,
        algorithm: F,
    ) -> Result<(), AlgorithmError>
    where
        F: Fn(CallInput, &Params) -> Result<CallOutput, AlgorithmError> + Send + Sync + 'static,
    {
        let symbol = symbol.into();
        if self.entries.contains_key(&symbol) {
            return Err(AlgorithmError::DuplicateSymbol { symbol });
        }
        self.entries.insert(symbol, (arity, Box::new(algorithm)));
        Ok(())
    }

    pub fn lookup(&self, symbol: &str) -> Result<(OutputArity, &AlgorithmFn), AlgorithmError> {
        self.entries
            .get(symbol)
            .map(|(arity, f)| (*arity, f))
            .ok_or_else(|| AlgorithmError::UnknownSymbol {
                symbol: symbol.to_string(),
            })
    }

    /// Run an algorithm that must produce a single graph.
    pub fn call_for_graph(
        &self,
        input: CallInput,
        symbol: &str,
        params: &Params,
    ) -> Result<LogicalGraph, AlgorithmError> {
        let (arity, f) = self.lookup(symbol)?;
        if arity != OutputArity::Graph {
            return Err(AlgorithmError::ArityMismatch {
                symbol: symbol.to_string(),
                expected: "graph",
                declared: "collection",
            });
        }
        match f(input, params)? {
            CallOutput::Graph(g) => Ok(g),
            CallOutput::Collection(_) => Err(AlgorithmError::ArityMismatch {
                symbol: symbol.to_string(),
                expected: "graph",
                declared: "collection",
            }),
        }
    }

    /// Run an algorithm that must produce a collection.
    pub fn call_for_collection(
        &self,
        input: CallInput,
        symbol: &str,
        params: &Params,
    ) -> Result<GraphCollection, AlgorithmError> {
        let (arity, f) = self.lookup(symbol)?;
        if arity != OutputArity::Collection {
            return Err(AlgorithmError::ArityMismatch {
                symbol: symbol.to_string(),
                expected: "collection",
                declared: "graph",
            });
        }
        match f(input, params)? {
            CallOutput::Collection(c) => Ok(c),
            CallOutput::Graph(_) => Err(AlgorithmError::ArityMismatch {
                symbol: symbol.to_string(),
                expected: "collection",
                declared: "graph",
            }),
        }
    }
}

fn require_param(params: &Params, key: &str) -> Result<String, AlgorithmError> {
    params
        .get(key)
        .cloned()
        .ok_or_else(|| AlgorithmError::MissingParam {
            param: key.to_string(),
        })
}

fn optional_u32(params: &Params, key: &str) -> Result<Option<u32>, AlgorithmError> {
    params
        .get(key)
        .map(|raw| {
            raw.parse::<u32>().map_err(|_| AlgorithmError::BadParam {
                param: key.to_string(),
                value: raw.clone(),
            })
        })
        .transpose()
}
