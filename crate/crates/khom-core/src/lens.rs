//! Quantum spheres and quantum lens spaces: the dual shift and transfer
//! operators, the lens coboundary, the generating odd module of the sphere
//! on `l^2(N^{n-1} x Z)`, its eigenspace decomposition, and the resulting
//! generators of lens-space K-homology with exact orders.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::complexes::{dualize, vertex_complex};
use crate::fredholm::{
    check_star_condition, index_k1, Affine1, BasisOperator, BasisSpace, Cell, CoordConstraint,
    CoordDomain, DefectCertificate, GradedModule, Injection, ModelError, OddModule, Projection,
    Region, SignOp,
};
use crate::graph::{decompose_path_edge, lens_graph, sphere_graph, DirectedGraph, EdgeFunction};
use crate::linalg::{AbelianGroupPresentation, IntMatrix, Order};

/// Names for the dual vertex basis, `eta1 .. etan`.
pub fn eta_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("eta{i}")).collect()
}

/// The nilpotent index shift on dual vertex functions: it sends the
/// indicator of `v_j` to the indicator of `v_{j-1}` and kills `eta1`.
pub fn shift_matrix(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |r, c| BigInt::from(u8::from(c == r + 1)))
}

/// `1 + t + ... + t^{n-1}` for the shift `t`: applied to a dual function it
/// sums the function over the ranges of the edges leaving each vertex, so it
/// is the adjacency transfer operator of the sphere graph.
pub fn transfer_matrix(n: usize) -> IntMatrix {
    let t = shift_matrix(n);
    let mut acc = IntMatrix::identity(n);
    let mut power = IntMatrix::identity(n);
    for _ in 1..n {
        power = &power * &t;
        acc = &acc + &power;
    }
    acc
}

/// The coboundary of the lens graph on dual vertex functions:
/// `transfer^p - 1`.
pub fn lens_coboundary(n: usize, p: usize) -> IntMatrix {
    &transfer_matrix(n).pow(p as u32) - &IntMatrix::identity(n)
}

/// `sum over i < p of (1 - t)^i`: the operator whose injectivity reduces
/// the lens kernel to the kernel of `t`. Its determinant is `p^n`.
pub fn geometric_sum_matrix(n: usize, p: usize) -> IntMatrix {
    let one_minus_t = &IntMatrix::identity(n) - &shift_matrix(n);
    let mut acc = IntMatrix::zeros(n, n);
    let mut power = IntMatrix::identity(n);
    for i in 0..p {
        if i > 0 {
            power = &power * &one_minus_t;
        }
        acc = &acc + &power;
    }
    acc
}

/// Restriction of the lens coboundary to functions supported off `v_1`,
/// mapped into functions supported off `v_n`: rows `1..n`, columns `2..n`
/// of the full matrix (1-based). Its determinant is `p^{n-1}` up to sign.
pub fn restricted_coboundary(n: usize, p: usize) -> IntMatrix {
    let full = lens_coboundary(n, p);
    IntMatrix::from_fn(n - 1, n - 1, |r, c| full.get(r, c + 1).clone())
}

/// `(K^0, K^1)` of the lens space: kernel and cokernel of the lens
/// coboundary, presented over the `eta` basis.
pub fn lens_k_homology(
    n: usize,
    p: usize,
) -> Result<(AbelianGroupPresentation, AbelianGroupPresentation), ModelError> {
    let matrix = lens_coboundary(n, p);
    let names = eta_names(n);
    let k0 = AbelianGroupPresentation::kernel(&matrix, &names)?;
    let k1 = AbelianGroupPresentation::cokernel(&matrix, &names)?;
    Ok((k0, k1))
}

/// The generating odd module of the quantum sphere, assembled over the
/// sphere graph.
#[derive(Debug, Clone)]
pub struct HlModule {
    pub n: usize,
    pub graph: DirectedGraph,
    pub module: OddModule,
}

fn hl_vertex_region(n: usize, i: usize, domains: &[CoordDomain]) -> Region {
    // 1-based vertex index i: coordinates k_1 .. k_{i-1} vanish, and k_i is
    // nonzero unless i = n (the cyclic last coordinate is unconstrained).
    let mut r = Region::full(None, domains);
    for idx in 0..i - 1 {
        r = r.with_coord(idx, CoordConstraint::exactly(0));
    }
    if i < n {
        r = r.with_coord(i - 1, CoordConstraint::at_least(1));
    }
    r
}

/// The Hawkins-Landi module of the quantum `(2n-1)`-sphere as an exact
/// operator model on the basis `N^{n-1} x Z`: the vertex projections split
/// the basis by the first nonvanishing coordinate, and the edge `e_lj`
/// steps coordinate `l` up by one on the subspace of `v_j`.
pub fn hl_module(n: usize) -> Result<HlModule, ModelError> {
    let graph = sphere_graph(n)?;
    let mut domains = vec![CoordDomain::NonNegative; n - 1];
    domains.push(CoordDomain::Integers);
    let space = BasisSpace::untagged(domains.clone());
    let certificate = DefectCertificate::new(2);

    let mut vertex_ops = std::collections::BTreeMap::new();
    for i in 1..=n {
        vertex_ops.insert(
            format!("v{i}"),
            Projection::single(hl_vertex_region(n, i, &domains)),
        );
    }
    // The vertex projections must tile the basis; this pins down the
    // intended reading of the subspace family.
    for b in space.window_points(2) {
        let holders = vertex_ops.values().filter(|p| p.contains(&b)).count();
        assert_eq!(
            holders, 1,
            "vertex subspaces must partition the basis at {b}"
        );
    }

    let mut edge_ops = std::collections::BTreeMap::new();
    let mut range_projections = std::collections::BTreeMap::new();
    for l in 1..=n {
        for j in l..=n {
            let mut action = vec![Affine1::identity(); n];
            action[l - 1] = Affine1::shift(1);
            let op = Injection::new(
                vec![Cell {
                    dom: hl_vertex_region(n, j, &domains),
                    cod_tag: None,
                    action,
                }],
                certificate,
            );
            let id = format!("e{l}{j}");
            range_projections.insert(id.clone(), BasisOperator::Projection(op.image_projection()));
            edge_ops.insert(id, op);
        }
    }

    Ok(HlModule {
        n,
        graph,
        module: OddModule {
            space,
            vertex_ops,
            edge_ops,
            range_projections,
            sign: SignOp::LastCoordNonNegative,
            certificate,
        },
    })
}

/// The rank-one graded module of the counit-like character supported at the
/// first vertex and its loop; its index function is `eta1`.
pub fn hl_even_character(n: usize) -> Result<(DirectedGraph, GradedModule), ModelError> {
    let graph = sphere_graph(n)?;
    let space = BasisSpace::untagged(vec![]);
    let certificate = DefectCertificate::new(1);
    let point = Region::full(None, &[]);

    let mut vertex0 = std::collections::BTreeMap::new();
    let mut vertex1 = std::collections::BTreeMap::new();
    let mut edge0 = std::collections::BTreeMap::new();
    let mut edge1 = std::collections::BTreeMap::new();
    for v in graph.vertices() {
        let p = if v == "v1" {
            Projection::single(point.clone())
        } else {
            Projection::empty()
        };
        vertex0.insert(v.clone(), p);
        vertex1.insert(v.clone(), Projection::empty());
    }
    for e in graph.edges() {
        let t = if e.id == "e11" {
            Injection::identity_on(point.clone(), certificate)
        } else {
            Injection::empty(certificate)
        };
        edge0.insert(e.id.clone(), t);
        edge1.insert(e.id.clone(), Injection::empty(certificate));
    }
    Ok((
        graph,
        GradedModule {
            space,
            vertex_ops: [vertex0, vertex1],
            edge_ops: [edge0, edge1],
            certificate,
        },
    ))
}

fn compose_path(
    hl: &HlModule,
    ids: &[&str],
    certificate: DefectCertificate,
) -> Result<Injection, ModelError> {
    let mut acc = hl
        .module
        .edge_ops
        .get(*ids.last().expect("paths are nonempty"))
        .ok_or_else(|| ModelError::GraphMismatch {
            what: format!("unknown sphere edge {}", ids.last().unwrap()),
        })?
        .clone();
    for id in ids.iter().rev().skip(1) {
        let outer = hl
            .module
            .edge_ops
            .get(*id)
            .ok_or_else(|| ModelError::GraphMismatch {
                what: format!("unknown sphere edge {id}"),
            })?;
        acc = Injection::compose(outer, &acc, certificate)?;
    }
    Ok(acc)
}

/// Structural equivariance of the sphere module under the cyclic action:
/// every edge operator shifts the coordinate sum by exactly one, so the
/// residue classes of the coordinate sum are invariant subspaces for paths.
fn assert_equivariant(hl: &HlModule) {
    for (id, op) in &hl.module.edge_ops {
        for cell in &op.cells {
            assert!(
                cell.action.iter().all(|f| f.mul == 1),
                "edge {id} must act by shifts"
            );
            let total: i64 = cell.action.iter().map(|f| f.add).sum();
            assert_eq!(total, 1, "edge {id} must shift the coordinate sum by one");
        }
    }
}

fn path_module_with_residue(
    hl: &HlModule,
    p: usize,
    residue: Option<(i64, i64)>,
) -> Result<(DirectedGraph, OddModule), ModelError> {
    assert_equivariant(hl);
    let lens = lens_graph(hl.n, p)?;
    let certificate = DefectCertificate::new(p as i64 + 2);

    let restrict = |r: &Region| match residue {
        Some(res) => r.clone().with_sum_residue(res),
        None => r.clone(),
    };
    let vertex_ops = hl
        .module
        .vertex_ops
        .iter()
        .map(|(v, p)| {
            (
                v.clone(),
                Projection {
                    regions: p.regions.iter().map(restrict).collect(),
                },
            )
        })
        .collect();

    let mut edge_ops = std::collections::BTreeMap::new();
    let mut range_projections = std::collections::BTreeMap::new();
    for e in lens.edges() {
        let ids = decompose_path_edge(&e.id);
        let composite = compose_path(hl, &ids, certificate)?;
        let restricted = Injection::new(
            composite
                .cells
                .iter()
                .map(|c| Cell {
                    dom: restrict(&c.dom),
                    cod_tag: c.cod_tag.clone(),
                    action: c.action.clone(),
                })
                .collect(),
            certificate,
        );
        range_projections.insert(
            e.id.clone(),
            BasisOperator::Projection(restricted.image_projection()),
        );
        edge_ops.insert(e.id.clone(), restricted);
    }
    Ok((
        lens,
        OddModule {
            space: hl.module.space.clone(),
            vertex_ops,
            edge_ops,
            range_projections,
            sign: hl.module.sign,
            certificate,
        },
    ))
}

/// The sphere module viewed as a module over the lens algebra via length-`p`
/// paths, without eigenspace restriction.
pub fn path_power_module(
    hl: &HlModule,
    p: usize,
) -> Result<(DirectedGraph, OddModule), ModelError> {
    if p == 0 {
        return Err(ModelError::Graph(
            crate::graph::GraphError::NonpositivePathPower(0),
        ));
    }
    path_module_with_residue(hl, p, None)
}

/// The restriction of the sphere module to the eigenspace where the
/// coordinate sum is congruent to `m` modulo `p`, as a module over the lens
/// algebra. Path operators preserve each eigenspace because every length-`p`
/// path shifts the coordinate sum by exactly `p`.
pub fn eigenspace_module(
    hl: &HlModule,
    p: usize,
    m: usize,
) -> Result<(DirectedGraph, OddModule), ModelError> {
    if p == 0 || m >= p {
        return Err(ModelError::EigenspaceOutOfRange { m, p });
    }
    path_module_with_residue(hl, p, Some((p as i64, m as i64)))
}

/// One eigenspace generator of lens K-homology.
#[derive(Debug, Clone)]
pub struct LensGenerator {
    pub m: usize,
    /// Vertex index function as coordinates over `eta1 .. etan`.
    pub index_vector: Vec<i64>,
    pub order: Order,
    /// Order of the difference from the residue-zero generator.
    pub diff_from_first_order: Order,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensChecks {
    /// Operator-model indices agree with the path-count and transfer-matrix
    /// routes.
    pub index_formula: bool,
    /// Every eigenspace module commutes with the sign involution on vertex
    /// and range projections.
    pub star_condition: bool,
    /// The eigenspace classes generate the cokernel presentation.
    pub generation: bool,
    /// Eigenspace edge indices sum to the unrestricted module's indices.
    pub eigenspace_additivity: bool,
}

#[derive(Debug)]
pub struct LensK1Report {
    pub n: usize,
    pub p: usize,
    pub k0: AbelianGroupPresentation,
    pub k1: AbelianGroupPresentation,
    pub generators: Vec<LensGenerator>,
    pub checks: LensChecks,
}

fn to_i64_vec(v: &[BigInt]) -> Vec<i64> {
    v.iter()
        .map(|x| x.to_i64().expect("index values fit in i64"))
        .collect()
}

/// Computes the eigenspace generators of lens K-homology two independent
/// ways (operator model and path counting), reduces their classes in the
/// cokernel presentation, reports exact orders, and verifies generation.
/// Any disagreement between the routes is a hard error.
pub fn lens_k1_generators(n: usize, p: usize) -> Result<LensK1Report, ModelError> {
    let sphere = sphere_graph(n)?;
    let lens = lens_graph(n, p)?;
    let dual = dualize(&vertex_complex(&lens));
    assert_eq!(
        dual.boundary,
        lens_coboundary(n, p),
        "graph coboundary must agree with the transfer-matrix coboundary"
    );

    let (k0, k1) = lens_k_homology(n, p)?;
    let hl = hl_module(n)?;
    let transfer = transfer_matrix(n);

    let mut generators = Vec::new();
    let mut star_ok = true;
    let mut vectors: Vec<Vec<BigInt>> = Vec::new();
    let mut edge_functions: Vec<EdgeFunction> = Vec::new();
    for m in 0..p {
        let (lens_graph_m, module) = eigenspace_module(&hl, p, m)?;
        let star = check_star_condition(&module, &lens_graph_m)?;
        star_ok &= star.passes();
        let data = index_k1(&module, &lens_graph_m)?;

        let operator_route = data.vertex_index.to_vector(lens.vertices());

        // Independent combinatorial route: minus the number of length-m
        // paths into the last vertex, computed by walking the sphere graph.
        let last = format!("v{n}");
        let path_route: Vec<BigInt> = sphere
            .vertices()
            .iter()
            .map(|v| -BigInt::from(sphere.count_paths(m, v, &last).expect("vertices exist")))
            .collect();
        // Matrix route: minus the transfer power applied to the last dual
        // generator.
        let mut e_last = vec![BigInt::from(0); n];
        e_last[n - 1] = BigInt::from(1);
        let matrix_route: Vec<BigInt> = transfer
            .pow(m as u32)
            .apply(&e_last)
            .expect("square matrix")
            .iter()
            .map(|x| -x)
            .collect();

        if operator_route != path_route || operator_route != matrix_route {
            return Err(ModelError::RouteMismatch {
                what: format!(
                    "index of eigenspace {m} of lens({n},{p}): operator {operator_route:?}, \
                     paths {path_route:?}, transfer {matrix_route:?}"
                ),
            });
        }

        let order = k1.element_order(&operator_route)?;
        let diff: Vec<BigInt> = if let Some(first) = vectors.first() {
            operator_route
                .iter()
                .zip(first)
                .map(|(a, b)| a - b)
                .collect()
        } else {
            vec![BigInt::from(0); n]
        };
        let diff_from_first_order = k1.element_order(&diff)?;

        generators.push(LensGenerator {
            m,
            index_vector: to_i64_vec(&operator_route),
            order,
            diff_from_first_order,
        });
        vectors.push(operator_route);
        edge_functions.push(data.edge_index);
    }

    // Generation: the classes generate the cokernel exactly when quotienting
    // by them and the coboundary together leaves nothing.
    let coboundary = lens_coboundary(n, p);
    let combined = IntMatrix::from_fn(n, p + n, |r, c| {
        if c < p {
            vectors[c][r].clone()
        } else {
            coboundary.get(r, c - p).clone()
        }
    });
    let generation = AbelianGroupPresentation::cokernel(&combined, &eta_names(n))?.is_trivial();

    // The eigenspaces partition the basis, so their edge indices must sum
    // to the unrestricted module's.
    let (_, unrestricted) = path_power_module(&hl, p)?;
    let unrestricted_data = index_k1(&unrestricted, &lens)?;
    let eigenspace_additivity = lens.edges().iter().all(|e| {
        let total: i64 = edge_functions
            .iter()
            .map(|f| f.edge(&e.id).unwrap_or(0))
            .sum();
        total == unrestricted_data.edge_index.edge(&e.id).unwrap_or(0)
    });

    Ok(LensK1Report {
        n,
        p,
        k0,
        k1,
        generators,
        checks: LensChecks {
            index_formula: true,
            star_condition: star_ok,
            generation,
            eigenspace_additivity,
        },
    })
}
