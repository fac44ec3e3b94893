//! Structural graph summarization: group vertices and edges by key tuples,
//! condense every group to a single element and aggregate group members onto
//! it, GROUP BY style.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use epgm_model::{Edge, LogicalGraph, Properties, PropertyValue, Vertex};
use im::OrdMap;

use crate::{DynError, OperatorError};

/// A grouping key: either a property key or the type-label marker, which is
/// distinct from any property key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKey {
    Label,
    Property(String),
}

/// One component of a computed grouping tuple. A missing property groups
/// under the distinguished null token (`Value(None)`), forming its own group
/// per grouping position.
#[derive(Debug, Clone)]
enum GroupComponent {
    Label(String),
    Value(Option<PropertyValue>),
}

impl GroupComponent {
    fn cmp_total(&self, other: &GroupComponent) -> Ordering {
        use GroupComponent::*;
        match (self, other) {
            (Label(a), Label(b)) => a.cmp(b),
            (Value(None), Value(None)) => Ordering::Equal,
            (Value(None), Value(Some(_))) => Ordering::Less,
            (Value(Some(_)), Value(None)) => Ordering::Greater,
            (Value(Some(a)), Value(Some(b))) => a.grouping_cmp(b),
            // Tuples built from the same key list never mix variants at a
            // position; order labels first for completeness.
            (Label(_), Value(_)) => Ordering::Less,
            (Value(_), Label(_)) => Ordering::Greater,
        }
    }
}

/// Grouping tuple with a total, deterministic order.
#[derive(Debug, Clone)]
struct GroupTuple(Vec<GroupComponent>);

impl PartialEq for GroupTuple {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for GroupTuple {}

impl PartialOrd for GroupTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.cmp_total(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

fn tuple_of(label: &str, properties: &Properties, keys: &[GroupKey]) -> GroupTuple {
    GroupTuple(
        keys.iter()
            .map(|key| match key {
                GroupKey::Label => GroupComponent::Label(label.to_string()),
                GroupKey::Property(k) => GroupComponent::Value(properties.get(k).cloned()),
            })
            .collect(),
    )
}

/// Copy grouping keys and values onto a summary element: the label when the
/// type marker is grouped, and each grouped property that had a value.
fn apply_tuple(tuple: &GroupTuple, keys: &[GroupKey], label: &mut String, props: &mut Properties) {
    for (key, component) in keys.iter().zip(tuple.0.iter()) {
        match (key, component) {
            (GroupKey::Label, GroupComponent::Label(l)) => *label = l.clone(),
            (GroupKey::Property(k), GroupComponent::Value(Some(v))) => props.set(k, v.clone()),
            (GroupKey::Property(_), GroupComponent::Value(None)) => {}
            _ => unreachable!("tuple shape follows the key list"),
        }
    }
}

/// Summarize a graph: one summary vertex per distinct vertex grouping tuple,
/// one summary edge per (source group, target group, edge grouping tuple).
/// The aggregation callbacks receive the summary element and its members.
/// Summary elements carry fresh small ids (0, 1, ..) deterministic in
/// grouping-tuple order; the result is a temporary graph.
pub fn summarize<VF, EF>(
    graph: &LogicalGraph,
    vertex_keys: &[GroupKey],
    mut vertex_agg: VF,
    edge_keys: &[GroupKey],
    mut edge_agg: EF,
) -> Result<LogicalGraph, OperatorError>
where
    VF: FnMut(&mut Vertex, &[Arc<Vertex>]) -> Result<(), DynError>,
    EF: FnMut(&mut Edge, &[Arc<Edge>]) -> Result<(), DynError>,
{
    // Group vertices; member lists inherit the graph's id order.
    let mut vertex_groups: BTreeMap<GroupTuple, Vec<Arc<Vertex>>> = BTreeMap::new();
    for v in graph.vertices() {
        vertex_groups
            .entry(tuple_of(&v.label, &v.properties, vertex_keys))
            .or_default()
            .push(v.clone());
    }

    let mut vertices = OrdMap::new();
    let mut group_of: BTreeMap<u64, u64> = BTreeMap::new();
    for (summary_id, (tuple, members)) in vertex_groups.iter().enumerate() {
        let summary_id = summary_id as u64;
        let mut label = String::new();
        let mut props = Properties::new();
        apply_tuple(tuple, vertex_keys, &mut label, &mut props);
        let mut summary = Vertex::new(summary_id, label, props);
        vertex_agg(&mut summary, members)
            .map_err(|source| OperatorError::SummarizeFailed { source })?;
        for member in members {
            group_of.insert(member.id, summary_id);
        }
        vertices.insert(summary_id, Arc::new(summary));
    }

    // Group edges by source group, target group and edge tuple.
    let mut edge_groups: BTreeMap<(u64, u64, GroupTuple), Vec<Arc<Edge>>> = BTreeMap::new();
    for e in graph.edges() {
        let key = (
            group_of[&e.source],
            group_of[&e.target],
            tuple_of(&e.label, &e.properties, edge_keys),
        );
        edge_groups.entry(key).or_default().push(e.clone());
    }

    let mut edges = OrdMap::new();
    let mut next_index: BTreeMap<u64, u32> = BTreeMap::new();
    for (summary_id, ((src, tgt, tuple), members)) in edge_groups.iter().enumerate() {
        let summary_id = summary_id as u64;
        let mut label = String::new();
        let mut props = Properties::new();
        apply_tuple(tuple, edge_keys, &mut label, &mut props);
        let index = next_index.entry(*src).or_insert(0);
        let mut summary = Edge::new(summary_id, *src, *tgt, *index, label, props);
        *index += 1;
        edge_agg(&mut summary, members)
            .map_err(|source| OperatorError::SummarizeFailed { source })?;
        edges.insert(summary_id, Arc::new(summary));
    }

    Ok(LogicalGraph::from_parts(
        graph.id_source(),
        graph.id_source().fresh_id(),
        "",
        Properties::new(),
        vertices,
        edges,
    ))
}

/// Aggregation callback storing the member count under `key`.
pub fn count_members<T>(
    key: &str,
) -> impl FnMut(&mut T, &[Arc<T::Member>]) -> Result<(), DynError> + '_
where
    T: HasProps,
{
    move |summary: &mut T, members: &[Arc<T::Member>]| {
        summary.props_mut().set(key, members.len() as i64);
        Ok(())
    }
}

/// Minimal mutable-properties hook for the [`count_members`] helper.
pub trait HasProps {
    type Member;
    fn props_mut(&mut self) -> &mut Properties;
}

impl HasProps for Vertex {
    type Member = Vertex;
    fn props_mut(&mut self) -> &mut Properties {
        &mut self.properties
    }
}

impl HasProps for Edge {
    type Member = Edge;
    fn props_mut(&mut self) -> &mut Properties {
        &mut self.properties
    }
}
