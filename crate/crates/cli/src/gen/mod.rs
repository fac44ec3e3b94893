//! Seeded synthetic dataset generators. The same (kind, scale, seed) always
//! produces a bit-identical dataset.

pub mod business;
pub mod social;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Generator bookkeeping written next to each dataset; tests assert against
/// the recorded ground truth instead of re-deriving it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub kind: String,
    pub scale: u32,
    pub seed: u64,
    /// Social datasets: planted community per person vertex id.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub planted_communities: BTreeMap<u64, u32>,
    /// Business datasets: process case counts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invoiced_cases: Option<u32>,
}
