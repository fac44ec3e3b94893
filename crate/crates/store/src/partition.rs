//! Range and hash partitioning over the vertex id space. Both strategies
//! are total: every id maps to exactly one partition below the configured
//! count.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum PartitionStrategy {
    Hash,
    /// Sorted interval start keys; partition `i` covers
    /// `[boundaries[i], boundaries[i+1])` and the last interval is open
    /// ended. `boundaries[0]` must be 0 to keep the mapping total.
    Range {
        boundaries: Vec<u64>,
    },
}

impl PartitionStrategy {
    /// Administrator-defined boundaries are the normal case; the default
    /// carves the full id space into equal-width intervals.
    pub fn default_range(partition_count: u16) -> PartitionStrategy {
        let count = partition_count.max(1) as u64;
        let width = u64::MAX / count;
        PartitionStrategy::Range {
            boundaries: (0..count).map(|i| i * width).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Partitioner {
    strategy: PartitionStrategy,
    partition_count: u16,
}

impl Partitioner {
    pub fn new(strategy: PartitionStrategy, partition_count: u16) -> Result<Self, String> {
        if partition_count == 0 {
            return Err("partition count must be positive".to_string());
        }
        if let PartitionStrategy::Range { boundaries } = &strategy {
            if boundaries.len() != partition_count as usize {
                return Err(format!(
                    "range partitioning needs one boundary per partition: {} boundaries for {} partitions",
                    boundaries.len(),
                    partition_count
                ));
            }
            if boundaries.first() != Some(&0) {
                return Err("the first range boundary must be 0".to_string());
            }
            if !boundaries.windows(2).all(|w| w[0] < w[1]) {
                return Err("range boundaries must be strictly increasing".to_string());
            }
        }
        Ok(Partitioner {
            strategy,
            partition_count,
        })
    }

    pub fn strategy(&self) -> &PartitionStrategy {
        &self.strategy
    }

    pub fn partition_count(&self) -> u16 {
        self.partition_count
    }

    /// Assign a vertex id to its partition: modulo for hash partitioning,
    /// interval lookup for range partitioning.
    pub fn assign(&self, vertex_id: u64) -> u16 {
        match &self.strategy {
            PartitionStrategy::Hash => (vertex_id % self.partition_count as u64) as u16,
            PartitionStrategy::Range { boundaries } => match boundaries.binary_search(&vertex_id) {
                Ok(i) => i as u16,
                Err(i) => (i - 1) as u16,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn hash_is_modulo() {
        let p = Partitioner::new(PartitionStrategy::Hash, 4).unwrap();
        assert_eq!(p.assign(10), 2);
        assert_eq!(p.assign(0), 0);
        assert_eq!(p.assign(7), 3);
    }

    #[test]
    fn range_uses_interval_starts() {
        let p = Partitioner::new(
            PartitionStrategy::Range {
                boundaries: vec![0, 100, 200],
            },
            3,
        )
        .unwrap();
        assert_eq!(p.assign(0), 0);
        assert_eq!(p.assign(99), 0);
        assert_eq!(p.assign(100), 1);
        assert_eq!(p.assign(150), 1);
        assert_eq!(p.assign(200), 2);
        assert_eq!(p.assign(u64::MAX), 2);
    }

    #[test]
    fn hash_balances_sequential_ids_exactly() {
        let p = Partitioner::new(PartitionStrategy::Hash, 10).unwrap();
        let mut counts: BTreeMap<u16, usize> = BTreeMap::new();
        for id in 0..1000u64 {
            *counts.entry(p.assign(id)).or_default() += 1;
        }
        assert_eq!(counts.len(), 10);
        assert!(counts.values().all(|&n| n == 100));
    }

    #[test]
    fn bad_boundaries_are_rejected() {
        assert!(Partitioner::new(
            PartitionStrategy::Range {
                boundaries: vec![5, 100]
            },
            2
        )
        .is_err());
        assert!(Partitioner::new(
            PartitionStrategy::Range {
                boundaries: vec![0, 100]
            },
            3
        )
        .is_err());
        assert!(Partitioner::new(PartitionStrategy::Hash, 0).is_err());
    }
}
