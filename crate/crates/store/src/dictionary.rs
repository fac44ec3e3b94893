//! Bidirectional label dictionary: type labels are stored as compact u16
//! ids assigned in first-use order and persisted in the store's meta file.

use std::collections::BTreeMap;

use crate::StoreError;

#[derive(Debug, Clone, Default)]
pub struct LabelDictionary {
    by_label: BTreeMap<String, u16>,
    by_id: Vec<String>,
}

impl LabelDictionary {
    pub fn new() -> Self {
        LabelDictionary::default()
    }

    pub fn from_labels(labels: Vec<String>) -> Self {
        let mut dict = LabelDictionary::new();
        for label in labels {
            dict.intern(&label);
        }
        dict
    }

    /// Id for a label, assigning the next free id on first use.
    pub fn intern(&mut self, label: &str) -> u16 {
        if let Some(&id) = self.by_label.get(label) {
            return id;
        }
        let id = self.by_id.len() as u16;
        self.by_label.insert(label.to_string(), id);
        self.by_id.push(label.to_string());
        id
    }

    pub fn id_of(&self, label: &str) -> Option<u16> {
        self.by_label.get(label).copied()
    }

    pub fn label_of(&self, id: u16) -> Result<&str, StoreError> {
        self.by_id
            .get(id as usize)
            .map(|s| s.as_str())
            .ok_or(StoreError::UnknownLabelId(id))
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    /// Labels in id order, the persisted representation.
    pub fn labels(&self) -> &[String] {
        &self.by_id
    }
}
