//! Finite directed multigraphs: validation, sinks, path counting, the
//! length-p path-power construction, and the sphere/lens graph families.
//!
//! Vertex and edge order is insertion order and fixes every matrix basis
//! downstream, so two runs over the same input produce identical output.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::linalg::IntMatrix;

/// Separator used to build path-power edge identifiers out of the underlying
/// edge identifiers, so a power edge can be decomposed back into its path.
pub const PATH_SEPARATOR: char = '.';

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// Raw graph data as it appears in the JSON interchange format:
/// `{"vertices": ["v1", ...], "edges": [{"id": "e1", "src": ..., "dst": ...}]}`.
/// Order is significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphData {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

/// A violation of the graph invariants. Violations are data, not errors:
/// `validate` reports all of them at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertex { id: String },
    DuplicateEdge { id: String },
    UnknownSource { edge: String, vertex: String },
    UnknownRange { edge: String, vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex { id } => write!(f, "duplicate vertex id {id:?}"),
            Violation::DuplicateEdge { id } => write!(f, "duplicate edge id {id:?}"),
            Violation::UnknownSource { edge, vertex } => {
                write!(f, "edge {edge:?} has unknown source vertex {vertex:?}")
            }
            Violation::UnknownRange { edge, vertex } => {
                write!(f, "edge {edge:?} has unknown range vertex {vertex:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("path power requires p >= 1, got {0}")]
    NonpositivePathPower(usize),
    #[error("sphere graph requires n >= 2, got {0}")]
    SphereRankTooSmall(usize),
    #[error("path count overflows u64")]
    PathCountOverflow,
}

/// A finite directed multigraph with ordered vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: BTreeMap<String, usize>,
    /// Outgoing edge positions per vertex, in edge insertion order.
    out_edges: Vec<Vec<usize>>,
}

impl DirectedGraph {
    /// Builds a graph from raw parts without validating; call `validate` to
    /// collect violations. Lookups only resolve the first occurrence of a
    /// duplicated identifier.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Self {
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            vertex_index.entry(v.clone()).or_insert(i);
        }
        let mut out_edges = vec![Vec::new(); vertices.len()];
        for (pos, e) in edges.iter().enumerate() {
            if let Some(&vi) = vertex_index.get(&e.src) {
                out_edges[vi].push(pos);
            }
        }
        DirectedGraph {
            vertices,
            edges,
            vertex_index,
            out_edges,
        }
    }

    pub fn from_data(data: GraphData) -> Self {
        DirectedGraph::new(data.vertices, data.edges)
    }

    pub fn to_data(&self) -> GraphData {
        GraphData {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_position(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut seen = BTreeMap::new();
        for v in &self.vertices {
            if *seen.entry(v.clone()).or_insert(0usize) == 1 {
                violations.push(Violation::DuplicateVertex { id: v.clone() });
            }
            *seen.get_mut(v).unwrap() = 1;
        }
        let mut seen_edges = BTreeMap::new();
        for e in &self.edges {
            if seen_edges.insert(e.id.clone(), ()).is_some() {
                violations.push(Violation::DuplicateEdge { id: e.id.clone() });
            }
            if !self.vertex_index.contains_key(&e.src) {
                violations.push(Violation::UnknownSource {
                    edge: e.id.clone(),
                    vertex: e.src.clone(),
                });
            }
            if !self.vertex_index.contains_key(&e.dst) {
                violations.push(Violation::UnknownRange {
                    edge: e.id.clone(),
                    vertex: e.dst.clone(),
                });
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Outgoing edges of a vertex, in insertion order. This order is the
    /// edge ordering `e_0, ..., e_{d-1}` used by every operator model.
    pub fn out_edges(&self, vertex: &str) -> Result<Vec<&Edge>, GraphError> {
        let vi = self
            .vertex_position(vertex)
            .ok_or_else(|| GraphError::UnknownVertex(vertex.to_string()))?;
        Ok(self.out_edges[vi].iter().map(|&p| &self.edges[p]).collect())
    }

    pub fn out_degree(&self, vertex: &str) -> Result<usize, GraphError> {
        Ok(self.out_edges(vertex)?.len())
    }

    pub fn is_sink(&self, vertex: &str) -> Result<bool, GraphError> {
        Ok(self.out_degree(vertex)? == 0)
    }

    /// Vertices emitting no edges, in vertex order.
    pub fn sinks(&self) -> Vec<String> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| self.out_edges[*i].is_empty())
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Complement of `sinks`, in vertex order.
    pub fn nonsinks(&self) -> Vec<String> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.out_edges[*i].is_empty())
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Adjacency matrix in vertex order; entry `(i, j)` counts edges from
    /// vertex `i` to vertex `j` (multi-edges counted with multiplicity).
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut m = IntMatrix::zeros(n, n);
        for e in &self.edges {
            if let (Some(i), Some(j)) = (self.vertex_position(&e.src), self.vertex_position(&e.dst))
            {
                let v = m.get(i, j) + 1;
                m.set(i, j, v);
            }
        }
        m
    }

    /// Number of directed edge sequences `e_1 ... e_m` from `src` to `dst`.
    /// The empty path (`m = 0`) counts once when `src == dst`.
    pub fn count_paths(&self, m: usize, src: &str, dst: &str) -> Result<u64, GraphError> {
        let si = self
            .vertex_position(src)
            .ok_or_else(|| GraphError::UnknownVertex(src.to_string()))?;
        let di = self
            .vertex_position(dst)
            .ok_or_else(|| GraphError::UnknownVertex(dst.to_string()))?;
        // Walk the edges directly, one length step at a time.
        let mut counts = vec![0u128; self.vertices.len()];
        counts[si] = 1;
        for _ in 0..m {
            let mut next = vec![0u128; self.vertices.len()];
            for (vi, outs) in self.out_edges.iter().enumerate() {
                if counts[vi] == 0 {
                    continue;
                }
                for &pos in outs {
                    if let Some(ti) = self.vertex_position(&self.edges[pos].dst) {
                        next[ti] = next[ti]
                            .checked_add(counts[vi])
                            .ok_or(GraphError::PathCountOverflow)?;
                    }
                }
            }
            counts = next;
        }
        u64::try_from(counts[di]).map_err(|_| GraphError::PathCountOverflow)
    }

    /// The graph of length-`p` directed paths: same vertices, one edge per
    /// path, with source and range those of the path. The new edge id is the
    /// dot-joined sequence of underlying edge ids, so callers can decompose
    /// a power edge back into its path.
    pub fn path_power(&self, p: usize) -> Result<DirectedGraph, GraphError> {
        if p == 0 {
            return Err(GraphError::NonpositivePathPower(p));
        }
        let mut paths: Vec<Vec<usize>> = (0..self.edges.len()).map(|i| vec![i]).collect();
        for _ in 1..p {
            let mut extended = Vec::new();
            for path in &paths {
                let last = &self.edges[*path.last().expect("paths are nonempty")];
                if let Some(vi) = self.vertex_position(&last.dst) {
                    for &next in &self.out_edges[vi] {
                        let mut longer = path.clone();
                        longer.push(next);
                        extended.push(longer);
                    }
                }
            }
            paths = extended;
        }
        let edges = paths
            .into_iter()
            .map(|path| {
                let ids: Vec<&str> = path.iter().map(|&i| self.edges[i].id.as_str()).collect();
                Edge {
                    id: ids.join(&PATH_SEPARATOR.to_string()),
                    src: self.edges[path[0]].src.clone(),
                    dst: self.edges[*path.last().unwrap()].dst.clone(),
                }
            })
            .collect();
        Ok(DirectedGraph::new(self.vertices.clone(), edges))
    }
}

/// Splits a path-power edge id back into the underlying edge ids.
pub fn decompose_path_edge(id: &str) -> Vec<&str> {
    id.split(PATH_SEPARATOR).collect()
}

/// The graph with vertices `v_1..v_n` and one edge `e_ij : v_i -> v_j` for
/// every pair `1 <= i <= j <= n`. Its algebra is the quantum (2n-1)-sphere.
pub fn sphere_graph(n: usize) -> Result<DirectedGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::SphereRankTooSmall(n));
    }
    let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            edges.push(Edge {
                id: format!("e{i}{j}"),
                src: format!("v{i}"),
                dst: format!("v{j}"),
            });
        }
    }
    Ok(DirectedGraph::new(vertices, edges))
}

/// The length-`p` path power of the sphere graph; its algebra is the quantum
/// lens space with weight `p`.
pub fn lens_graph(n: usize, p: usize) -> Result<DirectedGraph, GraphError> {
    sphere_graph(n)?.path_power(p)
}

/// Where an integer vertex function is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexDomain {
    AllVertices,
    NonSinksOnly,
}

/// An integer-valued function on vertices (an element of the dual lattice on
/// vertices, or on non-sinks only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFunction {
    pub domain: VertexDomain,
    values: BTreeMap<String, i64>,
}

impl VertexFunction {
    pub fn new(domain: VertexDomain, values: BTreeMap<String, i64>) -> Self {
        VertexFunction { domain, values }
    }

    pub fn zero(domain: VertexDomain, g: &DirectedGraph) -> Self {
        let keys: Vec<String> = match domain {
            VertexDomain::AllVertices => g.vertices().to_vec(),
            VertexDomain::NonSinksOnly => g.nonsinks(),
        };
        VertexFunction {
            domain,
            values: keys.into_iter().map(|v| (v, 0)).collect(),
        }
    }

    pub fn get(&self, vertex: &str) -> Option<i64> {
        self.values.get(vertex).copied()
    }

    pub fn set(&mut self, vertex: &str, value: i64) {
        self.values.insert(vertex.to_string(), value);
    }

    /// Vertices of the declared domain that carry no value.
    pub fn missing_on(&self, g: &DirectedGraph) -> Vec<String> {
        let required: Vec<String> = match self.domain {
            VertexDomain::AllVertices => g.vertices().to_vec(),
            VertexDomain::NonSinksOnly => g.nonsinks(),
        };
        required
            .into_iter()
            .filter(|v| !self.values.contains_key(v))
            .collect()
    }

    /// Coordinates with respect to an explicit vertex order; missing vertices
    /// contribute zero.
    pub fn to_vector(&self, order: &[String]) -> Vec<BigInt> {
        order
            .iter()
            .map(|v| BigInt::from(self.get(v).unwrap_or(0)))
            .collect()
    }

    /// Non-sinks where the one-step mean-value identity
    /// `f(v) = sum over edges e with source v of f(range(e))` fails.
    pub fn harmonic_violations(&self, g: &DirectedGraph) -> Vec<String> {
        let mut bad = Vec::new();
        for v in g.nonsinks() {
            let lhs = self.get(&v).unwrap_or(0);
            let rhs: i64 = g
                .out_edges(&v)
                .expect("nonsink exists")
                .iter()
                .map(|e| self.get(&e.dst).unwrap_or(0))
                .sum();
            if lhs != rhs {
                bad.push(v);
            }
        }
        bad
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &i64)> {
        self.values.iter()
    }
}

/// An integer-valued function on edges, optionally extended to sinks (an
/// element of the dual lattice on edges, or on edges plus sinks).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeFunction {
    edge_values: BTreeMap<String, i64>,
    sink_values: BTreeMap<String, i64>,
}

impl EdgeFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_edge(&mut self, edge: &str, value: i64) {
        self.edge_values.insert(edge.to_string(), value);
    }

    pub fn set_sink(&mut self, vertex: &str, value: i64) {
        self.sink_values.insert(vertex.to_string(), value);
    }

    pub fn edge(&self, edge: &str) -> Option<i64> {
        self.edge_values.get(edge).copied()
    }

    pub fn sink(&self, vertex: &str) -> Option<i64> {
        self.sink_values.get(vertex).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&String, &i64)> {
        self.edge_values.iter()
    }

    /// Push an edge function down to vertices by summing over the outgoing
    /// edges at each non-sink.
    pub fn sum_over_sources(&self, g: &DirectedGraph) -> VertexFunction {
        let mut values = BTreeMap::new();
        for v in g.nonsinks() {
            let total: i64 = g
                .out_edges(&v)
                .expect("nonsink exists")
                .iter()
                .map(|e| self.edge(&e.id).unwrap_or(0))
                .sum();
            values.insert(v, total);
        }
        VertexFunction::new(VertexDomain::NonSinksOnly, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple_edge(id: &str, src: &str, dst: &str) -> Edge {
        Edge {
            id: id.to_string(),
            src: src.to_string(),
            dst: dst.to_string(),
        }
    }

    #[test]
    fn single_vertex_no_edges_is_valid_sink() {
        let g = DirectedGraph::new(vec!["v".to_string()], vec![]);
        assert!(g.validate().is_empty());
        assert_eq!(g.sinks(), vec!["v".to_string()]);
        assert!(g.nonsinks().is_empty());
    }

    #[test]
    fn unknown_source_is_reported() {
        let g = DirectedGraph::new(vec!["v".to_string()], vec![simple_edge("e", "ghost", "v")]);
        let violations = g.validate();
        assert_eq!(
            violations,
            vec![Violation::UnknownSource {
                edge: "e".to_string(),
                vertex: "ghost".to_string()
            }]
        );
    }

    #[test]
    fn duplicates_are_reported() {
        let g = DirectedGraph::new(
            vec!["v".to_string(), "v".to_string()],
            vec![simple_edge("e", "v", "v"), simple_edge("e", "v", "v")],
        );
        let violations = g.validate();
        assert!(violations.contains(&Violation::DuplicateVertex {
            id: "v".to_string()
        }));
        assert!(violations.contains(&Violation::DuplicateEdge {
            id: "e".to_string()
        }));
    }

    #[test]
    fn sphere_graph_shape() {
        let g2 = sphere_graph(2).unwrap();
        assert!(g2.validate().is_empty());
        assert_eq!(g2.vertices().len(), 2);
        assert_eq!(g2.edges().len(), 3);
        let ids: Vec<&str> = g2.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, vec!["e11", "e12", "e22"]);
        assert!(g2.sinks().is_empty(), "every vertex has a loop");

        let g3 = sphere_graph(3).unwrap();
        assert_eq!(g3.edges().len(), 6);
        assert!(sphere_graph(1).is_err());
    }

    #[test]
    fn one_edge_graph_sink_partition() {
        let g = DirectedGraph::new(
            vec!["v".to_string(), "w".to_string()],
            vec![simple_edge("e", "v", "w")],
        );
        assert_eq!(g.sinks(), vec!["w".to_string()]);
        assert_eq!(g.nonsinks(), vec!["v".to_string()]);
    }

    #[test]
    fn count_paths_small_cases() {
        let g2 = sphere_graph(2).unwrap();
        assert_eq!(g2.count_paths(1, "v1", "v2").unwrap(), 1);
        assert_eq!(g2.count_paths(0, "v1", "v1").unwrap(), 1);
        assert_eq!(g2.count_paths(0, "v1", "v2").unwrap(), 0);
        // Three length-2 routes from v1 to v3: via the loop, via v2, via v3.
        let g3 = sphere_graph(3).unwrap();
        assert_eq!(g3.count_paths(2, "v1", "v3").unwrap(), 3);
        assert!(g3.count_paths(1, "v1", "nope").is_err());
    }

    #[test]
    fn path_power_of_sphere_two() {
        let g2 = sphere_graph(2).unwrap();
        let p1 = g2.path_power(1).unwrap();
        assert_eq!(p1, g2, "p = 1 reproduces the graph");

        let p2 = g2.path_power(2).unwrap();
        assert_eq!(p2.vertices(), g2.vertices());
        let mut mult = BTreeMap::new();
        for e in p2.edges() {
            *mult.entry((e.src.clone(), e.dst.clone())).or_insert(0) += 1;
        }
        assert_eq!(mult[&("v1".to_string(), "v1".to_string())], 1);
        assert_eq!(mult[&("v1".to_string(), "v2".to_string())], 2);
        assert_eq!(mult[&("v2".to_string(), "v2".to_string())], 1);
        assert!(g2.path_power(0).is_err());
    }

    #[test]
    fn path_power_edge_ids_decompose() {
        let g2 = sphere_graph(2).unwrap();
        let p2 = g2.path_power(2).unwrap();
        let ids: Vec<&str> = p2.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, vec!["e11.e11", "e11.e12", "e12.e22", "e22.e22"]);
        assert_eq!(decompose_path_edge("e11.e12"), vec!["e11", "e12"]);
    }

    #[test]
    fn path_power_stops_at_sinks() {
        let g = DirectedGraph::new(
            vec!["v".to_string(), "w".to_string()],
            vec![simple_edge("e", "v", "w")],
        );
        let p2 = g.path_power(2).unwrap();
        assert!(p2.edges().is_empty(), "paths cannot continue past a sink");
    }

    #[test]
    fn lens_graph_edge_count_matches_adjacency_power() {
        for p in 1..=6 {
            let lens = lens_graph(2, p).unwrap();
            assert_eq!(lens.edges().len(), p + 2, "1 + p + 1 edges for n = 2");
            let adj = sphere_graph(2).unwrap().adjacency_matrix().pow(p as u32);
            assert_eq!(lens.adjacency_matrix(), adj);
        }
    }

    #[test]
    fn harmonic_violation_detection() {
        let g2 = sphere_graph(2).unwrap();
        let mut eta = VertexFunction::zero(VertexDomain::AllVertices, &g2);
        eta.set("v1", 1);
        // eta(v1) = eta(v1) + eta(v2) forces eta(v2) = 0: holds here.
        assert!(eta.harmonic_violations(&g2).is_empty());
        eta.set("v2", 2);
        assert_eq!(eta.harmonic_violations(&g2), vec!["v1".to_string()]);
    }

    #[test]
    fn edge_function_pushdown() {
        let g2 = sphere_graph(2).unwrap();
        let mut f = EdgeFunction::new();
        f.set_edge("e11", 2);
        f.set_edge("e12", -1);
        f.set_edge("e22", 7);
        let vf = f.sum_over_sources(&g2);
        assert_eq!(vf.get("v1"), Some(1));
        assert_eq!(vf.get("v2"), Some(7));
    }
}
