//! Two-term integer chain complexes attached to a directed graph: the
//! vertex complex, the edge complex, the comparison maps between them, and
//! the homotopies that witness they compute the same homology.

use crate::graph::DirectedGraph;
use crate::linalg::IntMatrix;

/// Marker appended to a basis name when passing to the dual basis; applying
/// it twice returns the original name.
pub const DUAL_MARKER: char = '^';

pub fn dual_name(name: &str) -> String {
    match name.strip_suffix(DUAL_MARKER) {
        Some(stripped) => stripped.to_string(),
        None => format!("{name}{DUAL_MARKER}"),
    }
}

/// A complex concentrated in degrees 1 and 0. The boundary matrix has one
/// column per degree-1 basis element and one row per degree-0 element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTermComplex {
    pub degree1_basis: Vec<String>,
    pub degree0_basis: Vec<String>,
    pub boundary: IntMatrix,
}

impl TwoTermComplex {
    fn new(degree1_basis: Vec<String>, degree0_basis: Vec<String>, boundary: IntMatrix) -> Self {
        assert_eq!(boundary.cols(), degree1_basis.len());
        assert_eq!(boundary.rows(), degree0_basis.len());
        TwoTermComplex {
            degree1_basis,
            degree0_basis,
            boundary,
        }
    }
}

/// A degree-wise map of two-term complexes. Constructors check the chain
/// identity `boundary_target * degree1 = degree0 * boundary_source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexMap {
    pub degree1: IntMatrix,
    pub degree0: IntMatrix,
}

impl ComplexMap {
    pub fn is_chain_map(&self, source: &TwoTermComplex, target: &TwoTermComplex) -> bool {
        &target.boundary * &self.degree1 == &self.degree0 * &source.boundary
    }
}

/// A homotopy operator from the degree-0 basis of a complex to its
/// degree-1 basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homotopy {
    pub matrix: IntMatrix,
}

/// The complex on vertices: degree 1 is spanned by non-sinks, degree 0 by
/// all vertices, and the boundary of a non-sink `v` is
/// `(sum of ranges of edges leaving v) - v`.
pub fn vertex_complex(g: &DirectedGraph) -> TwoTermComplex {
    let nonsinks = g.nonsinks();
    let vertices = g.vertices().to_vec();
    let mut boundary = IntMatrix::zeros(vertices.len(), nonsinks.len());
    for (col, v) in nonsinks.iter().enumerate() {
        for e in g.out_edges(v).expect("nonsink exists") {
            if let Some(row) = g.vertex_position(&e.dst) {
                let val = boundary.get(row, col) + 1;
                boundary.set(row, col, val);
            }
        }
        let row = g.vertex_position(v).expect("nonsink exists");
        let val = boundary.get(row, col) - 1;
        boundary.set(row, col, val);
    }
    TwoTermComplex::new(nonsinks, vertices, boundary)
}

/// The complex on edges: degree 1 is spanned by edges, degree 0 by edges
/// together with sinks. The boundary of `e` is
/// `(sum of edges leaving range(e)) - e` when the range is a non-sink, and
/// `range(e) - e` when the range is a sink.
pub fn edge_complex(g: &DirectedGraph) -> TwoTermComplex {
    let edge_ids: Vec<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    let sinks = g.sinks();
    let mut degree0: Vec<String> = edge_ids.clone();
    degree0.extend(sinks.iter().cloned());
    let pos0 = |name: &str| {
        degree0
            .iter()
            .position(|x| x == name)
            .expect("basis member")
    };

    let mut boundary = IntMatrix::zeros(degree0.len(), edge_ids.len());
    for (col, e) in g.edges().iter().enumerate() {
        if g.is_sink(&e.dst).unwrap_or(false) {
            let row = pos0(&e.dst);
            let val = boundary.get(row, col) + 1;
            boundary.set(row, col, val);
        } else {
            for f in g.out_edges(&e.dst).expect("range exists") {
                let row = pos0(&f.id);
                let val = boundary.get(row, col) + 1;
                boundary.set(row, col, val);
            }
        }
        let row = pos0(&e.id);
        let val = boundary.get(row, col) - 1;
        boundary.set(row, col, val);
    }
    TwoTermComplex::new(edge_ids, degree0, boundary)
}

/// The comparison map from the vertex complex into the edge complex:
/// a non-sink goes to the sum of its outgoing edges, a sink to itself.
pub fn vertex_to_edge(g: &DirectedGraph) -> ComplexMap {
    let a = vertex_complex(g);
    let b = edge_complex(g);

    let mut degree1 = IntMatrix::zeros(b.degree1_basis.len(), a.degree1_basis.len());
    for (col, v) in a.degree1_basis.iter().enumerate() {
        for e in g.out_edges(v).expect("nonsink exists") {
            let row = b.degree1_basis.iter().position(|x| x == &e.id).unwrap();
            degree1.set(row, col, boundary_inc(&degree1, row, col));
        }
    }

    let mut degree0 = IntMatrix::zeros(b.degree0_basis.len(), a.degree0_basis.len());
    for (col, v) in a.degree0_basis.iter().enumerate() {
        if g.is_sink(v).unwrap_or(false) {
            let row = b.degree0_basis.iter().position(|x| x == v).unwrap();
            degree0.set(row, col, boundary_inc(&degree0, row, col));
        } else {
            for e in g.out_edges(v).expect("nonsink exists") {
                let row = b.degree0_basis.iter().position(|x| x == &e.id).unwrap();
                degree0.set(row, col, boundary_inc(&degree0, row, col));
            }
        }
    }

    let map = ComplexMap { degree1, degree0 };
    assert!(
        map.is_chain_map(&a, &b),
        "vertex-to-edge map must be a chain map"
    );
    map
}

/// The comparison map from the edge complex back to the vertex complex:
/// in degree 1 an edge goes to its range when that is a non-sink (zero
/// otherwise); in degree 0 an edge goes to its range and a sink to itself.
pub fn edge_to_vertex(g: &DirectedGraph) -> ComplexMap {
    let a = vertex_complex(g);
    let b = edge_complex(g);

    let mut degree1 = IntMatrix::zeros(a.degree1_basis.len(), b.degree1_basis.len());
    for (col, eid) in b.degree1_basis.iter().enumerate() {
        let e = g.edges().iter().find(|e| &e.id == eid).unwrap();
        if let Some(row) = a.degree1_basis.iter().position(|x| x == &e.dst) {
            degree1.set(row, col, boundary_inc(&degree1, row, col));
        }
    }

    let mut degree0 = IntMatrix::zeros(a.degree0_basis.len(), b.degree0_basis.len());
    for (col, name) in b.degree0_basis.iter().enumerate() {
        let target = match g.edges().iter().find(|e| &e.id == name) {
            Some(e) => e.dst.clone(),
            None => name.clone(),
        };
        let row = a.degree0_basis.iter().position(|x| x == &target).unwrap();
        degree0.set(row, col, boundary_inc(&degree0, row, col));
    }

    let map = ComplexMap { degree1, degree0 };
    assert!(
        map.is_chain_map(&b, &a),
        "edge-to-vertex map must be a chain map"
    );
    map
}

fn boundary_inc(m: &IntMatrix, row: usize, col: usize) -> num_bigint::BigInt {
    m.get(row, col) + 1
}

/// Homotopy on the edge complex (degree 0 to degree 1): an edge goes to
/// itself, a sink to zero.
pub fn edge_side_homotopy(g: &DirectedGraph) -> Homotopy {
    let b = edge_complex(g);
    let mut matrix = IntMatrix::zeros(b.degree1_basis.len(), b.degree0_basis.len());
    for (col, name) in b.degree0_basis.iter().enumerate() {
        if let Some(row) = b.degree1_basis.iter().position(|x| x == name) {
            matrix.set(row, col, 1.into());
        }
    }
    Homotopy { matrix }
}

/// Homotopy on the vertex complex (degree 0 to degree 1): a non-sink goes
/// to itself, a sink to zero.
pub fn vertex_side_homotopy(g: &DirectedGraph) -> Homotopy {
    let a = vertex_complex(g);
    let mut matrix = IntMatrix::zeros(a.degree1_basis.len(), a.degree0_basis.len());
    for (col, name) in a.degree0_basis.iter().enumerate() {
        if let Some(row) = a.degree1_basis.iter().position(|x| x == name) {
            matrix.set(row, col, 1.into());
        }
    }
    Homotopy { matrix }
}

/// The dual cochain complex, presented again as a two-term complex: the
/// boundary transposes and the basis roles swap, with names marked.
pub fn dualize(c: &TwoTermComplex) -> TwoTermComplex {
    TwoTermComplex::new(
        c.degree0_basis.iter().map(|n| dual_name(n)).collect(),
        c.degree1_basis.iter().map(|n| dual_name(n)).collect(),
        c.boundary.transpose(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sphere_graph, DirectedGraph, Edge};

    fn two_vertex_arrow() -> DirectedGraph {
        DirectedGraph::new(
            vec!["v".to_string(), "w".to_string()],
            vec![Edge {
                id: "e".to_string(),
                src: "v".to_string(),
                dst: "w".to_string(),
            }],
        )
    }

    #[test]
    fn vertex_complex_of_sphere_two() {
        let g = sphere_graph(2).unwrap();
        let a = vertex_complex(&g);
        assert_eq!(a.degree1_basis, vec!["v1", "v2"]);
        assert_eq!(a.degree0_basis, vec!["v1", "v2"]);
        // boundary(v1) = v2, boundary(v2) = 0.
        assert_eq!(a.boundary, IntMatrix::from_rows(&[&[0, 0], &[1, 0]]));
    }

    #[test]
    fn vertex_complex_of_sink_and_loop() {
        let sink = DirectedGraph::new(vec!["v".to_string()], vec![]);
        let a = vertex_complex(&sink);
        assert!(a.degree1_basis.is_empty());
        assert_eq!((a.boundary.rows(), a.boundary.cols()), (1, 0));

        let looped = DirectedGraph::new(
            vec!["v".to_string()],
            vec![Edge {
                id: "l".to_string(),
                src: "v".to_string(),
                dst: "v".to_string(),
            }],
        );
        let a = vertex_complex(&looped);
        assert!(a.boundary.is_zero(), "loop contributes v - v = 0");
    }

    #[test]
    fn edge_complex_of_sphere_two() {
        let g = sphere_graph(2).unwrap();
        let b = edge_complex(&g);
        assert_eq!(b.degree1_basis, vec!["e11", "e12", "e22"]);
        assert_eq!(b.degree0_basis, vec!["e11", "e12", "e22"], "sink-free");
        // d(e11) = e12, d(e12) = e22 - e12, d(e22) = 0.
        assert_eq!(
            b.boundary,
            IntMatrix::from_rows(&[&[0, 0, 0], &[1, -1, 0], &[0, 1, 0]])
        );
    }

    #[test]
    fn edge_complex_with_sink_range() {
        let g = two_vertex_arrow();
        let b = edge_complex(&g);
        assert_eq!(b.degree0_basis, vec!["e", "w"]);
        // d(e) = w - e.
        assert_eq!(b.boundary, IntMatrix::from_rows(&[&[-1], &[1]]));
    }

    #[test]
    fn comparison_maps_on_sphere_two() {
        let g = sphere_graph(2).unwrap();
        let s = vertex_to_edge(&g);
        // degree1: v1 -> e11 + e12, v2 -> e22.
        assert_eq!(
            s.degree1,
            IntMatrix::from_rows(&[&[1, 0], &[1, 0], &[0, 1]])
        );
        let t = edge_to_vertex(&g);
        // degree1: e11 -> v1, e12 -> v2, e22 -> v2.
        assert_eq!(t.degree1, IntMatrix::from_rows(&[&[1, 0, 0], &[0, 1, 1]]));
        // degree0 agrees on the sink-free graph.
        assert_eq!(t.degree0, IntMatrix::from_rows(&[&[1, 0, 0], &[0, 1, 1]]));
    }

    #[test]
    fn sink_cases_of_comparison_maps() {
        let g = two_vertex_arrow();
        let s = vertex_to_edge(&g);
        // degree0: v -> e, w -> w.
        assert_eq!(s.degree0, IntMatrix::from_rows(&[&[1, 0], &[0, 1]]));
        let t = edge_to_vertex(&g);
        // degree1: e -> 0 because its range is a sink.
        assert!(t.degree1.is_zero());
        // degree0: e -> w, w -> w.
        assert_eq!(t.degree0, IntMatrix::from_rows(&[&[0, 0], &[1, 1]]));
    }

    #[test]
    fn vertex_side_homotopy_is_identity_without_sinks() {
        let g = sphere_graph(2).unwrap();
        let k = vertex_side_homotopy(&g);
        assert_eq!(k.matrix, IntMatrix::identity(2));
    }

    #[test]
    fn homotopy_identities_on_examples() {
        for g in [sphere_graph(3).unwrap(), two_vertex_arrow()] {
            let a = vertex_complex(&g);
            let b = edge_complex(&g);
            let s = vertex_to_edge(&g);
            let t = edge_to_vertex(&g);
            let h = edge_side_homotopy(&g);
            let k = vertex_side_homotopy(&g);

            let id_b0 = IntMatrix::identity(b.degree0_basis.len());
            let id_b1 = IntMatrix::identity(b.degree1_basis.len());
            let id_a0 = IntMatrix::identity(a.degree0_basis.len());
            let id_a1 = IntMatrix::identity(a.degree1_basis.len());

            assert_eq!(&(&s.degree0 * &t.degree0) - &id_b0, &b.boundary * &h.matrix);
            assert_eq!(&(&s.degree1 * &t.degree1) - &id_b1, &h.matrix * &b.boundary);
            assert_eq!(&(&t.degree0 * &s.degree0) - &id_a0, &a.boundary * &k.matrix);
            assert_eq!(&(&t.degree1 * &s.degree1) - &id_a1, &k.matrix * &a.boundary);
        }
    }

    #[test]
    fn dualize_transposes_and_marks() {
        let g = sphere_graph(2).unwrap();
        let a = vertex_complex(&g);
        let dual = dualize(&a);
        assert_eq!(dual.boundary, a.boundary.transpose());
        assert_eq!(dual.degree1_basis, vec!["v1^", "v2^"]);
        let double = dualize(&dual);
        assert_eq!(double.boundary, a.boundary);
        assert_eq!(double.degree1_basis, a.degree1_basis);
    }

    #[test]
    fn dual_boundary_formula_on_sphere_two() {
        // The dual boundary sends a function f to
        // v |-> sum of f(range(e)) over edges leaving v, minus f(v).
        let g = sphere_graph(2).unwrap();
        let dual = dualize(&vertex_complex(&g));
        // f = indicator of v1: (f(v1)+f(v2)) - f(v1) = 0 at v1, -f(v2)... at v2.
        use num_bigint::BigInt;
        let f = vec![BigInt::from(1), BigInt::from(0)];
        let df = dual.boundary.apply(&f).unwrap();
        assert_eq!(df, vec![BigInt::from(0), BigInt::from(0)]);
        let f = vec![BigInt::from(0), BigInt::from(1)];
        let df = dual.boundary.apply(&f).unwrap();
        assert_eq!(df, vec![BigInt::from(1), BigInt::from(0)]);
    }
}
