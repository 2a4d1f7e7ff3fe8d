//! K-theory and K-homology of a graph algebra as presented abelian groups,
//! assembled from the vertex complex and its dual.

use crate::complexes::{dualize, vertex_complex};
use crate::graph::DirectedGraph;
use crate::linalg::{AbelianGroupPresentation, LinalgError};

/// `(K_0, K_1)`: the cokernel and kernel of the vertex boundary, with
/// generators expressed in the vertex basis.
pub fn k_theory(
    g: &DirectedGraph,
) -> Result<(AbelianGroupPresentation, AbelianGroupPresentation), LinalgError> {
    let a = vertex_complex(g);
    let k0 = AbelianGroupPresentation::cokernel(&a.boundary, &a.degree0_basis)?;
    let k1 = AbelianGroupPresentation::kernel(&a.boundary, &a.degree1_basis)?;
    Ok((k0, k1))
}

/// `(K^0, K^1)`: the kernel and cokernel of the dual boundary, with
/// generators expressed in the dual vertex basis.
pub fn k_homology(
    g: &DirectedGraph,
) -> Result<(AbelianGroupPresentation, AbelianGroupPresentation), LinalgError> {
    let dual = dualize(&vertex_complex(g));
    // For the dual two-term complex the map runs from functions on vertices
    // (degree-1 slot) to functions on non-sinks (degree-0 slot).
    let k0 = AbelianGroupPresentation::kernel(&dual.boundary, &dual.degree1_basis)?;
    let k1 = AbelianGroupPresentation::cokernel(&dual.boundary, &dual.degree0_basis)?;
    Ok((k0, k1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sphere_graph;
    use crate::graph::DirectedGraph;

    #[test]
    fn sphere_two_has_free_rank_one_everywhere() {
        let g = sphere_graph(2).unwrap();
        let (k0, k1) = k_theory(&g).unwrap();
        assert_eq!(k0.isomorphism_class(), "Z");
        assert_eq!(k1.isomorphism_class(), "Z");
        let (kh0, kh1) = k_homology(&g).unwrap();
        assert_eq!(kh0.isomorphism_class(), "Z");
        assert_eq!(kh1.isomorphism_class(), "Z");
    }

    #[test]
    fn single_sink_vertex() {
        let g = DirectedGraph::new(vec!["v".to_string()], vec![]);
        let (k0, k1) = k_theory(&g).unwrap();
        assert_eq!(k0.isomorphism_class(), "Z");
        assert_eq!(k1.isomorphism_class(), "0");
    }
}
