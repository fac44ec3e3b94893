//! Schema-free properties: typed scalar values keyed by strings.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A single property value. Exactly one variant is populated; the type code
/// byte used by the storage codec is fixed per variant.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertyValue {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
}

impl PropertyValue {
    /// Storage type code: 0 = int64, 1 = float64, 2 = boolean, 5 = string.
    /// Codes 3 and 4 are reserved.
    pub fn type_code(&self) -> u8 {
        match self {
            PropertyValue::Int(_) => 0,
            PropertyValue::Float(_) => 1,
            PropertyValue::Bool(_) => 2,
            PropertyValue::Str(_) => 5,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            PropertyValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            PropertyValue::Str(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            PropertyValue::Bool(v) => Some(*v),
            _ => None,
        }
    }

    /// Numeric view with int-to-float promotion; `None` for bool/string.
    pub fn as_number(&self) -> Option<f64> {
        match self {
            PropertyValue::Int(v) => Some(*v as f64),
            PropertyValue::Float(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, PropertyValue::Int(_) | PropertyValue::Float(_))
    }

    /// Equality with int-to-float promotion; values of unrelated kinds are
    /// simply unequal.
    pub fn loose_eq(&self, other: &PropertyValue) -> bool {
        match (self.as_number(), other.as_number()) {
            (Some(a), Some(b)) => a == b,
            _ => self == other,
        }
    }

    /// Ordering comparison for values of compatible kinds. Int and float are
    /// intercomparable (promotion), strings compare with strings, bools with
    /// bools. Anything else is `None`: callers decide how loudly to fail.
    pub fn compare_promoting(&self, other: &PropertyValue) -> Option<Ordering> {
        use PropertyValue::*;
        match (self, other) {
            (Str(a), Str(b)) => Some(a.cmp(b)),
            (Bool(a), Bool(b)) => Some(a.cmp(b)),
            _ => match (self.as_number(), other.as_number()) {
                (Some(a), Some(b)) => Some(a.total_cmp(&b)),
                _ => None,
            },
        }
    }

    /// Total order used for deterministic grouping and output ordering.
    /// Unlike [`compare_promoting`](Self::compare_promoting) it never fails:
    /// values of different kinds order by variant rank, so `Int(2)` and
    /// `Float(2.0)` land in different groups.
    pub fn grouping_cmp(&self, other: &PropertyValue) -> Ordering {
        use PropertyValue::*;
        fn rank(v: &PropertyValue) -> u8 {
            match v {
                Int(_) => 0,
                Float(_) => 1,
                Bool(_) => 2,
                Str(_) => 3,
            }
        }
        match (self, other) {
            (Int(a), Int(b)) => a.cmp(b),
            (Float(a), Float(b)) => a.total_cmp(b),
            (Bool(a), Bool(b)) => a.cmp(b),
            (Str(a), Str(b)) => a.cmp(b),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Int(v) => write!(f, "{v}"),
            PropertyValue::Float(v) => write!(f, "{v:?}"),
            PropertyValue::Bool(v) => write!(f, "{v}"),
            PropertyValue::Str(v) => write!(f, "{v}"),
        }
    }
}

impl From<i64> for PropertyValue {
    fn from(v: i64) -> Self {
        PropertyValue::Int(v)
    }
}

impl From<f64> for PropertyValue {
    fn from(v: f64) -> Self {
        PropertyValue::Float(v)
    }
}

impl From<bool> for PropertyValue {
    fn from(v: bool) -> Self {
        PropertyValue::Bool(v)
    }
}

impl From<&str> for PropertyValue {
    fn from(v: &str) -> Self {
        PropertyValue::Str(v.to_string())
    }
}

impl From<String> for PropertyValue {
    fn from(v: String) -> Self {
        PropertyValue::Str(v)
    }
}

impl Serialize for PropertyValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PropertyValue::Int(v) => serializer.serialize_i64(*v),
            PropertyValue::Float(v) => serializer.serialize_f64(*v),
            PropertyValue::Bool(v) => serializer.serialize_bool(*v),
            PropertyValue::Str(v) => serializer.serialize_str(v),
        }
    }
}

impl<'de> Deserialize<'de> for PropertyValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ValueVisitor;

        impl Visitor<'_> for ValueVisitor {
            type Value = PropertyValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a JSON scalar (integer, float, boolean or string)")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<PropertyValue, E> {
                i64::try_from(v)
                    .map(PropertyValue::Int)
                    .map_err(|_| E::custom(format!("integer {v} out of range for int64")))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Float(v))
            }

            fn visit_bool<E: de::Error>(self, v: bool) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Bool(v))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Str(v.to_string()))
            }

            fn visit_string<E: de::Error>(self, v: String) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Str(v))
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}

/// Ordered map of property key to value. Keys are unique per element and no
/// global schema is enforced: two elements with the same label may carry
/// entirely different key sets.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Properties(BTreeMap<String, PropertyValue>);

impl Properties {
    pub fn new() -> Self {
        Properties(BTreeMap::new())
    }

    /// Last written value for `key`; an absent key is distinguishable from
    /// any stored value.
    pub fn get(&self, key: &str) -> Option<&PropertyValue> {
        self.0.get(key)
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<PropertyValue>) {
        self.0.insert(key.into(), value.into());
    }

    pub fn remove(&mut self, key: &str) -> Option<PropertyValue> {
        self.0.remove(key)
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &PropertyValue)> {
        self.0.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }
}

impl FromIterator<(String, PropertyValue)> for Properties {
    fn from_iter<T: IntoIterator<Item = (String, PropertyValue)>>(iter: T) -> Self {
        Properties(iter.into_iter().collect())
    }
}

impl IntoIterator for Properties {
    type Item = (String, PropertyValue);
    type IntoIter = std::collections::btree_map::IntoIter<String, PropertyValue>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

/// Shorthand for building a [`Properties`] map in tests and fixtures:
/// `props! { "name" => "Alice", "age" => 23i64 }`.
#[macro_export]
macro_rules! props {
    () => { $crate::Properties::new() };
    ($($key:expr => $value:expr),+ $(,)?) => {{
        let mut p = $crate::Properties::new();
        $( p.set($key, $value); )+
        p
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_codes_match_codec_table() {
        assert_eq!(PropertyValue::Int(7).type_code(), 0);
        assert_eq!(PropertyValue::Float(1.5).type_code(), 1);
        assert_eq!(PropertyValue::Bool(true).type_code(), 2);
        assert_eq!(PropertyValue::Str("x".into()).type_code(), 5);
    }

    #[test]
    fn set_then_get_round_trips() {
        let mut p = Properties::new();
        p.set("name", "Alice");
        assert_eq!(p.get("name"), Some(&PropertyValue::Str("Alice".into())));
        p.set("name", "Alicia");
        assert_eq!(p.get("name"), Some(&PropertyValue::Str("Alicia".into())));
    }

    #[test]
    fn absent_key_is_distinguishable() {
        let p = props! { "present" => 0i64 };
        assert!(p.get("missing").is_none());
        assert!(p.get("present").is_some());
    }

    #[test]
    fn promoting_comparison_mixes_int_and_float_only() {
        let two = PropertyValue::Int(2);
        let two_f = PropertyValue::Float(2.0);
        let s = PropertyValue::Str("2".into());
        assert_eq!(two.compare_promoting(&two_f), Some(Ordering::Equal));
        assert_eq!(two.compare_promoting(&s), None);
        assert!(two.loose_eq(&two_f));
        assert!(!two.loose_eq(&s));
    }

    #[test]
    fn grouping_order_is_total_and_kind_separated() {
        let vals = [
            PropertyValue::Int(2),
            PropertyValue::Float(2.0),
            PropertyValue::Bool(false),
            PropertyValue::Str("a".into()),
        ];
        for a in &vals {
            for b in &vals {
                let ab = a.grouping_cmp(b);
                let ba = b.grouping_cmp(a);
                assert_eq!(ab, ba.reverse());
            }
        }
        assert_ne!(
            PropertyValue::Int(2).grouping_cmp(&PropertyValue::Float(2.0)),
            Ordering::Equal
        );
    }

    #[test]
    fn json_scalars_round_trip() {
        for (json, value) in [
            ("5", PropertyValue::Int(5)),
            ("2.5", PropertyValue::Float(2.5)),
            ("2.0", PropertyValue::Float(2.0)),
            ("true", PropertyValue::Bool(true)),
            ("\"hi\"", PropertyValue::Str("hi".into())),
        ] {
            let parsed: PropertyValue = serde_json::from_str(json).unwrap();
            assert_eq!(parsed, value);
            let emitted = serde_json::to_string(&value).unwrap();
            let reparsed: PropertyValue = serde_json::from_str(&emitted).unwrap();
            assert_eq!(reparsed, value);
        }
    }
}
