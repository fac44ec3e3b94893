//! Business transaction graph extraction: connected components over the
//! transactional vertices (master data ignored for connectivity), then each
//! component plus its directly adjacent master vertices and the connecting
//! edges forms one business transaction graph.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use epgm_model::{GraphCollection, LogicalGraph, Properties};
use im::OrdMap;

use crate::AlgorithmError;

/// Label classification for BTG extraction. The two sets must be disjoint
/// and together cover every vertex label of the input.
#[derive(Debug, Clone)]
pub struct BtgParams {
    pub transactional_labels: BTreeSet<String>,
    pub master_labels: BTreeSet<String>,
}

impl Default for BtgParams {
    fn default() -> Self {
        let transactional = [
            "SalesQuotation",
            "SalesOrder",
            "SalesInvoice",
            "PurchOrder",
            "DeliveryNote",
        ];
        let master = ["Customer", "Vendor", "Employee", "Product"];
        BtgParams {
            transactional_labels: transactional.iter().map(|s| s.to_string()).collect(),
            master_labels: master.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Transactional,
    Master,
}

/// Extract one graph per business process execution. Output order follows
/// the smallest transactional vertex id of each component.
pub fn btg_extract(
    graph: &LogicalGraph,
    params: &BtgParams,
) -> Result<GraphCollection, AlgorithmError> {
    let mut class: BTreeMap<u64, Class> = BTreeMap::new();
    for v in graph.vertices() {
        let c = if params.transactional_labels.contains(&v.label) {
            Class::Transactional
        } else if params.master_labels.contains(&v.label) {
            Class::Master
        } else {
            return Err(AlgorithmError::UnclassifiedLabel {
                label: v.label.clone(),
                vertex: v.id,
            });
        };
        class.insert(v.id, c);
    }

    // Union-find over transactional vertices, joined by edges whose both
    // endpoints are transactional (direction ignored).
    let mut parent: BTreeMap<u64, u64> = class
        .iter()
        .filter(|(_, c)| **c == Class::Transactional)
        .map(|(id, _)| (*id, *id))
        .collect();

    fn find(parent: &mut BTreeMap<u64, u64>, v: u64) -> u64 {
        let mut root = v;
        while parent[&root] != root {
            root = parent[&root];
        }
        let mut cur = v;
        while parent[&cur] != root {
            let next = parent[&cur];
            parent.insert(cur, root);
            cur = next;
        }
        root
    }

    for e in graph.edges() {
        if class[&e.source] == Class::Transactional && class[&e.target] == Class::Transactional {
            let a = find(&mut parent, e.source);
            let b = find(&mut parent, e.target);
            if a != b {
                let (low, high) = if a < b { (a, b) } else { (b, a) };
                parent.insert(high, low);
            }
        }
    }

    let roots: Vec<u64> = parent.keys().copied().collect();
    let mut components: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for v in roots {
        let root = find(&mut parent, v);
        components.entry(root).or_default().insert(v);
    }

    let ids = graph.id_source();
    let mut out = Vec::with_capacity(components.len());
    for members in components.values() {
        let mut vertex_ids: BTreeSet<u64> = members.clone();
        let mut edge_ids: BTreeSet<u64> = BTreeSet::new();
        for e in graph.edges() {
            let s_in = members.contains(&e.source);
            let t_in = members.contains(&e.target);
            match (s_in, t_in) {
                // Transactional edge inside the component.
                (true, true) => {
                    edge_ids.insert(e.id);
                }
                // Connection to adjacent master data.
                (true, false) if class[&e.target] == Class::Master => {
                    vertex_ids.insert(e.target);
                    edge_ids.insert(e.id);
                }
                (false, true) if class[&e.source] == Class::Master => {
                    vertex_ids.insert(e.source);
                    edge_ids.insert(e.id);
                }
                _ => {}
            }
        }
        let vertices: OrdMap<u64, Arc<epgm_model::Vertex>> = vertex_ids
            .iter()
            .map(|id| (*id, graph.vertex(*id).unwrap().clone()))
            .collect();
        let edges: OrdMap<u64, Arc<epgm_model::Edge>> = edge_ids
            .iter()
            .map(|id| (*id, graph.edge(*id).unwrap().clone()))
            .collect();
        out.push(LogicalGraph::from_parts(
            ids,
            ids.fresh_id(),
            "BusinessTransactionGraph",
            Properties::new(),
            vertices,
            edges,
        ));
    }
    Ok(out.into())
}
