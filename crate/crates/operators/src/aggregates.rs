//! Predefined aggregation building blocks: count, sum, average and value
//! extraction over property-bearing elements.

use std::sync::Arc;

use epgm_model::{Edge, LogicalGraph, Properties, PropertyValue, Vertex};

use crate::{DynError, OperatorError};

/// Anything carrying an id and a property map.
pub trait Attributed {
    fn element_id(&self) -> u64;
    fn attributes(&self) -> &Properties;
}

impl Attributed for Vertex {
    fn element_id(&self) -> u64 {
        self.id
    }
    fn attributes(&self) -> &Properties {
        &self.properties
    }
}

impl Attributed for Edge {
    fn element_id(&self) -> u64 {
        self.id
    }
    fn attributes(&self) -> &Properties {
        &self.properties
    }
}

impl Attributed for LogicalGraph {
    fn element_id(&self) -> u64 {
        self.id()
    }
    fn attributes(&self) -> &Properties {
        self.properties()
    }
}

impl<T: Attributed> Attributed for Arc<T> {
    fn element_id(&self) -> u64 {
        (**self).element_id()
    }
    fn attributes(&self) -> &Properties {
        (**self).attributes()
    }
}

pub fn count<T>(items: &[T]) -> i64 {
    items.len() as i64
}

/// Extract the multiset of values stored under `key`, in element order.
/// Elements lacking the key contribute nothing.
pub fn values<'a, T, I>(items: I, key: &str) -> Vec<PropertyValue>
where
    T: Attributed + 'a,
    I: IntoIterator<Item = &'a T>,
{
    items
        .into_iter()
        .filter_map(|item| item.attributes().get(key).cloned())
        .collect()
}

/// Sum over the elements possessing `key`. Integer inputs yield an integer
/// sum; any float makes the result a float. The empty sum is integer zero.
pub fn sum<'a, T, I>(items: I, key: &str) -> Result<PropertyValue, OperatorError>
where
    T: Attributed + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let mut int_sum: i64 = 0;
    let mut float_sum: f64 = 0.0;
    let mut saw_float = false;
    for item in items {
        match item.attributes().get(key) {
            None => {}
            Some(PropertyValue::Int(v)) => {
                int_sum = int_sum.wrapping_add(*v);
                float_sum += *v as f64;
            }
            Some(PropertyValue::Float(v)) => {
                saw_float = true;
                float_sum += v;
            }
            Some(_) => {
                return Err(OperatorError::NonNumeric {
                    key: key.to_string(),
                    element: item.element_id(),
                })
            }
        }
    }
    if saw_float {
        Ok(PropertyValue::Float(float_sum))
    } else {
        Ok(PropertyValue::Int(int_sum))
    }
}

/// Mean over the elements possessing `key`; always a float. Averaging zero
/// matching elements is an error rather than a silent zero.
pub fn average<'a, T, I>(items: I, key: &str) -> Result<PropertyValue, OperatorError>
where
    T: Attributed + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let mut total = 0.0;
    let mut n = 0usize;
    for item in items {
        match item.attributes().get(key) {
            None => {}
            Some(v) => match v.as_number() {
                Some(x) => {
                    total += x;
                    n += 1;
                }
                None => {
                    return Err(OperatorError::NonNumeric {
                        key: key.to_string(),
                        element: item.element_id(),
                    })
                }
            },
        }
    }
    if n == 0 {
        return Err(OperatorError::EmptyAverage {
            key: key.to_string(),
        });
    }
    Ok(PropertyValue::Float(total / n as f64))
}

/// Sum a plain value list, e.g. the output of [`values`].
pub fn sum_of_values(values: &[PropertyValue]) -> Result<PropertyValue, OperatorError> {
    let mut int_sum: i64 = 0;
    let mut float_sum: f64 = 0.0;
    let mut saw_float = false;
    for v in values {
        match v {
            PropertyValue::Int(x) => {
                int_sum = int_sum.wrapping_add(*x);
                float_sum += *x as f64;
            }
            PropertyValue::Float(x) => {
                saw_float = true;
                float_sum += x;
            }
            other => {
                return Err(OperatorError::NonNumericValue {
                    found: other.to_string(),
                })
            }
        }
    }
    if saw_float {
        Ok(PropertyValue::Float(float_sum))
    } else {
        Ok(PropertyValue::Int(int_sum))
    }
}

pub fn average_of_values(values: &[PropertyValue]) -> Result<PropertyValue, OperatorError> {
    if values.is_empty() {
        return Err(OperatorError::EmptyAverage { key: String::new() });
    }
    let mut total = 0.0;
    for v in values {
        match v.as_number() {
            Some(x) => total += x,
            None => {
                return Err(OperatorError::NonNumericValue {
                    found: v.to_string(),
                })
            }
        }
    }
    Ok(PropertyValue::Float(total / values.len() as f64))
}

/// Convenience adapter: a graph aggregate function computing the vertex
/// count, the most common aggregation in workflows.
pub fn vertex_count(graph: &LogicalGraph) -> Result<PropertyValue, DynError> {
    Ok(PropertyValue::Int(graph.vertex_count() as i64))
}
