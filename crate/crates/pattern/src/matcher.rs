//! Backtracking subgraph isomorphism: enumerate all vertex- and
//! edge-injective, non-induced embeddings of a pattern, filter them through
//! a binding predicate and project the survivors to deduplicated subgraphs.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use epgm_model::{Edge, GraphCollection, LogicalGraph, Properties, Vertex};
use im::OrdMap;

use crate::{DynError, Embedding, PatternError, PatternGraph};

/// Search steps: bind the next pattern vertex, or bind a pattern edge whose
/// endpoints just became bound.
#[derive(Debug, Clone, Copy)]
enum Step {
    Vertex(usize),
    Edge(usize),
}

struct Search<'a, F> {
    graph: &'a LogicalGraph,
    pattern: &'a PatternGraph,
    predicate: F,
    out_adj: HashMap<u64, Vec<&'a Arc<Edge>>>,
    in_adj: HashMap<u64, Vec<&'a Arc<Edge>>>,
    plan: Vec<Step>,
    vertex_binding: Vec<Option<u64>>,
    edge_binding: Vec<Option<u64>>,
    used_vertices: HashSet<u64>,
    used_edges: HashSet<u64>,
    results: BTreeSet<(Vec<u64>, Vec<u64>)>,
}

/// Enumerate all embeddings of `pattern` in `graph`, keep those satisfying
/// `predicate`, and project each survivor to the subgraph of its bound
/// elements. Subgraphs with identical element sets collapse to one result;
/// output order is deterministic (sorted by element-id tuples).
pub fn match_pattern<F>(
    graph: &LogicalGraph,
    pattern: &PatternGraph,
    predicate: F,
) -> Result<GraphCollection, PatternError>
where
    F: FnMut(&LogicalGraph, &Embedding) -> Result<bool, DynError>,
{
    if pattern.vertex_count() == 0 {
        return Ok(GraphCollection::new());
    }

    let mut out_adj: HashMap<u64, Vec<&Arc<Edge>>> = HashMap::new();
    let mut in_adj: HashMap<u64, Vec<&Arc<Edge>>> = HashMap::new();
    for edge in graph.edges() {
        out_adj.entry(edge.source).or_default().push(edge);
        in_adj.entry(edge.target).or_default().push(edge);
    }

    let plan = build_plan(graph, pattern, &out_adj, &in_adj);

    let mut search = Search {
        graph,
        pattern,
        predicate,
        out_adj,
        in_adj,
        plan,
        vertex_binding: vec![None; pattern.vertex_count()],
        edge_binding: vec![None; pattern.edge_count()],
        used_vertices: HashSet::new(),
        used_edges: HashSet::new(),
        results: BTreeSet::new(),
    };
    search.run(0)?;

    // Materialize the surviving subgraphs in sorted order with fresh heads.
    let ids = graph.id_source();
    let mut out = Vec::with_capacity(search.results.len());
    for (vertex_ids, edge_ids) in &search.results {
        let vertices: OrdMap<u64, Arc<Vertex>> = vertex_ids
            .iter()
            .map(|id| (*id, graph.vertex(*id).unwrap().clone()))
            .collect();
        let edges: OrdMap<u64, Arc<Edge>> = edge_ids
            .iter()
            .map(|id| (*id, graph.edge(*id).unwrap().clone()))
            .collect();
        out.push(LogicalGraph::from_parts(
            ids,
            ids.fresh_id(),
            "",
            Properties::new(),
            vertices,
            edges,
        ));
    }
    Ok(out.into())
}

/// Order pattern vertices by ascending degree-constrained candidate domain
/// size, preferring vertices adjacent to the already-planned prefix so the
/// search extends along pattern edges. Each vertex step is followed by the
/// edge steps it completes.
fn build_plan(
    graph: &LogicalGraph,
    pattern: &PatternGraph,
    out_adj: &HashMap<u64, Vec<&Arc<Edge>>>,
    in_adj: &HashMap<u64, Vec<&Arc<Edge>>>,
) -> Vec<Step> {
    let n = pattern.vertex_count();
    let mut out_deg = vec![0usize; n];
    let mut in_deg = vec![0usize; n];
    for e in &pattern.edges {
        out_deg[e.source] += 1;
        in_deg[e.target] += 1;
    }
    let domain_size = |pv: usize| {
        graph
            .vertices()
            .filter(|v| {
                out_adj.get(&v.id).map_or(0, |es| es.len()) >= out_deg[pv]
                    && in_adj.get(&v.id).map_or(0, |es| es.len()) >= in_deg[pv]
            })
            .count()
    };
    let domains: Vec<usize> = (0..n).map(domain_size).collect();

    let mut placed = vec![false; n];
    let mut edge_done = vec![false; pattern.edge_count()];
    let mut plan = Vec::with_capacity(n + pattern.edge_count());
    for _ in 0..n {
        let adjacent_to_prefix = |pv: usize| {
            pattern.edges.iter().any(|e| {
                (e.source == pv && placed[e.target]) || (e.target == pv && placed[e.source])
            })
        };
        let next = (0..n)
            .filter(|&pv| !placed[pv])
            .min_by_key(|&pv| (!adjacent_to_prefix(pv), domains[pv], pv))
            .unwrap();
        placed[next] = true;
        plan.push(Step::Vertex(next));
        for (idx, e) in pattern.edges.iter().enumerate() {
            if !edge_done[idx] && placed[e.source] && placed[e.target] {
                edge_done[idx] = true;
                plan.push(Step::Edge(idx));
            }
        }
    }
    plan
}

impl<F> Search<'_, F>
where
    F: FnMut(&LogicalGraph, &Embedding) -> Result<bool, DynError>,
{
    fn run(&mut self, step: usize) -> Result<(), PatternError> {
        if step == self.plan.len() {
            return self.emit();
        }
        match self.plan[step] {
            Step::Vertex(pv) => {
                let candidates = self.vertex_candidates(pv);
                for candidate in candidates {
                    if self.used_vertices.contains(&candidate) {
                        continue;
                    }
                    self.vertex_binding[pv] = Some(candidate);
                    self.used_vertices.insert(candidate);
                    self.run(step + 1)?;
                    self.used_vertices.remove(&candidate);
                    self.vertex_binding[pv] = None;
                }
            }
            Step::Edge(pe) => {
                let edge = &self.pattern.edges[pe];
                let source = self.vertex_binding[edge.source].expect("bound by plan order");
                let target = self.vertex_binding[edge.target].expect("bound by plan order");
                let mut candidates: Vec<u64> = self
                    .out_adj
                    .get(&source)
                    .map(|es| {
                        es.iter()
                            .filter(|e| e.target == target)
                            .map(|e| e.id)
                            .collect()
                    })
                    .unwrap_or_default();
                candidates.sort_unstable();
                for candidate in candidates {
                    if self.used_edges.contains(&candidate) {
                        continue;
                    }
                    self.edge_binding[pe] = Some(candidate);
                    self.used_edges.insert(candidate);
                    self.run(step + 1)?;
                    self.used_edges.remove(&candidate);
                    self.edge_binding[pe] = None;
                }
            }
        }
        Ok(())
    }

    /// Candidate graph vertices for a pattern vertex: derived from adjacency
    /// when a pattern neighbor is already bound, the whole vertex space
    /// otherwise. Ascending id order keeps the search deterministic.
    fn vertex_candidates(&self, pv: usize) -> Vec<u64> {
        for e in &self.pattern.edges {
            if e.target == pv {
                if let Some(bound) = self.vertex_binding[e.source] {
                    let mut c: Vec<u64> = self
                        .out_adj
                        .get(&bound)
                        .map(|es| es.iter().map(|e| e.target).collect())
                        .unwrap_or_default();
                    c.sort_unstable();
                    c.dedup();
                    return c;
                }
            }
            if e.source == pv {
                if let Some(bound) = self.vertex_binding[e.target] {
                    let mut c: Vec<u64> = self
                        .in_adj
                        .get(&bound)
                        .map(|es| es.iter().map(|e| e.source).collect())
                        .unwrap_or_default();
                    c.sort_unstable();
                    c.dedup();
                    return c;
                }
            }
        }
        self.graph.vertex_ids().collect()
    }

    fn emit(&mut self) -> Result<(), PatternError> {
        let mut embedding = Embedding::default();
        for (pv, var) in self.pattern.vertex_vars.iter().enumerate() {
            embedding
                .vertices
                .insert(var.clone(), self.vertex_binding[pv].unwrap());
        }
        for (pe, edge) in self.pattern.edges.iter().enumerate() {
            embedding
                .edges
                .insert(edge.var.clone(), self.edge_binding[pe].unwrap());
        }

        let vertex_ids: Vec<u64> = {
            let mut ids: Vec<u64> = embedding.vertices.values().copied().collect();
            ids.sort_unstable();
            ids
        };
        let edge_ids: Vec<u64> = {
            let mut ids: Vec<u64> = embedding.edges.values().copied().collect();
            ids.sort_unstable();
            ids
        };

        // Present the candidate subgraph to the predicate.
        let ids = self.graph.id_source();
        let vertices: OrdMap<u64, Arc<Vertex>> = vertex_ids
            .iter()
            .map(|id| (*id, self.graph.vertex(*id).unwrap().clone()))
            .collect();
        let edges: OrdMap<u64, Arc<Edge>> = edge_ids
            .iter()
            .map(|id| (*id, self.graph.edge(*id).unwrap().clone()))
            .collect();
        let candidate =
            LogicalGraph::from_parts(ids, ids.fresh_id(), "", Properties::new(), vertices, edges);

        match (self.predicate)(&candidate, &embedding) {
            Ok(true) => {
                self.results.insert((vertex_ids, edge_ids));
                Ok(())
            }
            Ok(false) => Ok(()),
            Err(source) => Err(PatternError::PredicateFailed { source }),
        }
    }
}

/// Convenience predicate matching on element type labels: every listed
/// vertex variable must bind a vertex of the given label, every edge
/// variable an edge of the given label.
pub fn label_predicate<'a>(
    vertex_labels: &'a [(&'a str, &'a str)],
    edge_labels: &'a [(&'a str, &'a str)],
) -> impl FnMut(&LogicalGraph, &Embedding) -> Result<bool, DynError> + 'a {
    move |g: &LogicalGraph, m: &Embedding| {
        for (var, label) in vertex_labels {
            let id = m.vertex(var).ok_or_else(|| format!("unbound ${var}"))?;
            if g.vertex(id).map(|v| v.label.as_str()) != Some(*label) {
                return Ok(false);
            }
        }
        for (var, label) in edge_labels {
            let id = m.edge(var).ok_or_else(|| format!("unbound ${var}"))?;
            if g.edge(id).map(|e| e.label.as_str()) != Some(*label) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Reference implementation used by the test oracles: enumerate every
/// injective assignment of pattern vertices over all vertex tuples, then all
/// compatible injective edge choices, with no pruning at all.
pub type SubgraphKey = (Vec<u64>, Vec<u64>);

pub fn brute_force_match<F>(
    graph: &LogicalGraph,
    pattern: &PatternGraph,
    mut predicate: F,
) -> Result<BTreeSet<SubgraphKey>, PatternError>
where
    F: FnMut(&LogicalGraph, &Embedding) -> Result<bool, DynError>,
{
    fn assign_vertices(
        vertex_ids: &[u64],
        k: usize,
        chosen: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if chosen.len() == k {
            out.push(chosen.clone());
            return;
        }
        for &v in vertex_ids {
            if !chosen.contains(&v) {
                chosen.push(v);
                assign_vertices(vertex_ids, k, chosen, out);
                chosen.pop();
            }
        }
    }

    let vertex_ids: Vec<u64> = graph.vertex_ids().collect();
    let mut tuples = Vec::new();
    assign_vertices(
        &vertex_ids,
        pattern.vertex_count(),
        &mut Vec::new(),
        &mut tuples,
    );

    let all_edges: Vec<&Arc<Edge>> = graph.edges().collect();
    let mut results = BTreeSet::new();

    for tuple in tuples {
        // All injective edge assignments compatible with this vertex tuple.
        let mut edge_choices: Vec<Vec<u64>> = vec![Vec::new()];
        for pe in &pattern.edges {
            let want_source = tuple[pe.source];
            let want_target = tuple[pe.target];
            let mut next = Vec::new();
            for partial in &edge_choices {
                for e in &all_edges {
                    if e.source == want_source
                        && e.target == want_target
                        && !partial.contains(&e.id)
                    {
                        let mut extended = partial.clone();
                        extended.push(e.id);
                        next.push(extended);
                    }
                }
            }
            edge_choices = next;
            if edge_choices.is_empty() {
                break;
            }
        }

        for edges in edge_choices {
            let mut embedding = Embedding::default();
            for (pv, var) in pattern.vertex_vars.iter().enumerate() {
                embedding.vertices.insert(var.clone(), tuple[pv]);
            }
            for (pe, pedge) in pattern.edges.iter().enumerate() {
                embedding.edges.insert(pedge.var.clone(), edges[pe]);
            }
            let mut vset: Vec<u64> = embedding.vertices.values().copied().collect();
            vset.sort_unstable();
            vset.dedup();
            let mut eset: Vec<u64> = embedding.edges.values().copied().collect();
            eset.sort_unstable();

            let ids = graph.id_source();
            let vertices: OrdMap<u64, Arc<Vertex>> = vset
                .iter()
                .map(|id| (*id, graph.vertex(*id).unwrap().clone()))
                .collect();
            let eedges: OrdMap<u64, Arc<Edge>> = eset
                .iter()
                .map(|id| (*id, graph.edge(*id).unwrap().clone()))
                .collect();
            let candidate = LogicalGraph::from_parts(
                ids,
                ids.fresh_id(),
                "",
                Properties::new(),
                vertices,
                eedges,
            );
            match predicate(&candidate, &embedding) {
                Ok(true) => {
                    results.insert((vset, eset));
                }
                Ok(false) => {}
                Err(source) => return Err(PatternError::PredicateFailed { source }),
            }
        }
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_pattern;
    use epgm_model::fixtures::example_db;
    use epgm_model::{props, EpgmDatabase};

    #[test]
    fn forum_membership_pattern_finds_two_subgraphs() {
        let db = example_db();
        let pattern = parse_pattern("(a)<-d-(b)-e->(c)").unwrap();
        let predicate = label_predicate(
            &[("b", "Forum"), ("a", "Person"), ("c", "Person")],
            &[("d", "hasMember"), ("e", "hasMember")],
        );
        let result = match_pattern(&db.database_graph(), &pattern, predicate).unwrap();
        assert_eq!(result.len(), 2);
        let sets: Vec<(Vec<u64>, Vec<u64>)> = result
            .iter()
            .map(|g| {
                (
                    g.vertex_ids().collect::<Vec<u64>>(),
                    g.edge_ids().collect::<Vec<u64>>(),
                )
            })
            .collect();
        assert_eq!(sets[0], (vec![0, 1, 9], vec![17, 18]));
        assert_eq!(sets[1], (vec![2, 3, 10], vec![19, 20]));
    }

    #[test]
    fn single_vertex_pattern_yields_one_graph_per_vertex() {
        let db = example_db();
        let pattern = parse_pattern("(a)").unwrap();
        let result = match_pattern(&db.database_graph(), &pattern, |_, _| Ok(true)).unwrap();
        assert_eq!(result.len(), 11);
        for g in &result {
            assert_eq!(g.vertex_count(), 1);
            assert_eq!(g.edge_count(), 0);
        }
    }

    #[test]
    fn mutual_knows_pair_yields_one_graph_per_direction() {
        let mut db = EpgmDatabase::new();
        let p = db.add_vertex("Person", props! {});
        let q = db.add_vertex("Person", props! {});
        db.add_edge(p, q, "knows", props! {}).unwrap();
        db.add_edge(q, p, "knows", props! {}).unwrap();
        let pattern = parse_pattern("(a)-c->(b)").unwrap();
        let predicate = label_predicate(&[("a", "Person"), ("b", "Person")], &[("c", "knows")]);
        let result = match_pattern(&db.database_graph(), &pattern, predicate).unwrap();
        // Brute-force enumeration agrees.
        let oracle = brute_force_match(
            &db.database_graph(),
            &pattern,
            label_predicate(&[("a", "Person"), ("b", "Person")], &[("c", "knows")]),
        )
        .unwrap();
        assert_eq!(result.len(), 2);
        assert_eq!(oracle.len(), 2);
        for g in &result {
            assert_eq!(g.edge_count(), 1);
            assert_eq!(g.vertex_count(), 2);
        }
    }

    #[test]
    fn empty_graph_with_nonempty_pattern_matches_nothing() {
        let db = EpgmDatabase::new();
        let pattern = parse_pattern("(a)-c->(b)").unwrap();
        let result = match_pattern(&db.database_graph(), &pattern, |_, _| Ok(true)).unwrap();
        assert!(result.is_empty());
    }

    #[test]
    fn loop_patterns_bind_loop_edges() {
        let mut db = EpgmDatabase::new();
        let v = db.add_vertex("X", props! {});
        let w = db.add_vertex("X", props! {});
        db.add_edge(v, v, "self", props! {}).unwrap();
        db.add_edge(v, w, "other", props! {}).unwrap();
        let pattern = parse_pattern("(a)-x->(a)").unwrap();
        let result = match_pattern(&db.database_graph(), &pattern, |_, _| Ok(true)).unwrap();
        assert_eq!(result.len(), 1);
        let g = result.get(0).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.edges().next().unwrap().is_loop());
    }

    #[test]
    fn symmetric_embeddings_collapse_to_one_subgraph() {
        // A forum with two members admits two (a, c) assignments that
        // project to the same subgraph.
        let db = example_db();
        let pattern = parse_pattern("(a)<-d-(b)-e->(c)").unwrap();
        let result = match_pattern(
            &db.database_graph(),
            &pattern,
            label_predicate(&[("b", "Forum")], &[("d", "hasMember"), ("e", "hasMember")]),
        )
        .unwrap();
        assert_eq!(result.len(), 2);
    }

    #[test]
    fn predicate_errors_propagate() {
        let db = example_db();
        let pattern = parse_pattern("(a)").unwrap();
        let err =
            match_pattern(&db.database_graph(), &pattern, |_, _| Err("bad".into())).unwrap_err();
        assert!(matches!(err, PatternError::PredicateFailed { .. }));
    }

    #[test]
    fn outputs_reverify_against_the_pattern() {
        let db = example_db();
        let pattern = parse_pattern("(a)-c->(b)").unwrap();
        let result = match_pattern(
            &db.database_graph(),
            &pattern,
            label_predicate(&[("a", "Person"), ("b", "Person")], &[("c", "knows")]),
        )
        .unwrap();
        assert!(!result.is_empty());
        for g in &result {
            let again = match_pattern(
                g,
                &pattern,
                label_predicate(&[("a", "Person"), ("b", "Person")], &[("c", "knows")]),
            )
            .unwrap();
            assert!(again
                .iter()
                .any(|h| h.vertex_id_set() == g.vertex_id_set()
                    && h.edge_id_set() == g.edge_id_set()));
        }
    }
}
