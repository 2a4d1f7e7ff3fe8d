//! Construction of the explicit odd and graded Fredholm module models over
//! a graph algebra, the index maps that read a K-homology class off a
//! model, and the exact basis-level relation checks.

use std::collections::BTreeMap;

use super::op::{
    commutator_rank, compressed_index, Affine1, BasisOperator, Cell, DefectCertificate, Injection,
    Projection, SignOp,
};
use super::space::{BasisPoint, BasisSpace, CoordConstraint, CoordDomain, Region};
use super::ModelError;
use crate::complexes::{dualize, vertex_complex};
use crate::graph::{DirectedGraph, Edge, EdgeFunction, VertexDomain, VertexFunction};
use crate::linalg::{AbelianGroupPresentation, GroupElement};

/// An odd Fredholm module model: one projection per vertex, one partial
/// injection per edge, the stored range projections, and the sign
/// involution. Range projections are stored (not recomputed) so that the
/// commutation checks test actual data.
#[derive(Debug, Clone)]
pub struct OddModule {
    pub space: BasisSpace,
    pub vertex_ops: BTreeMap<String, Projection>,
    pub edge_ops: BTreeMap<String, Injection>,
    pub range_projections: BTreeMap<String, BasisOperator>,
    pub sign: SignOp,
    pub certificate: DefectCertificate,
}

/// A graded Fredholm module model: two representations on the same space,
/// with the symmetry exchanging them. Index data lives in the finite-rank
/// differences between the halves.
#[derive(Debug, Clone)]
pub struct GradedModule {
    pub space: BasisSpace,
    pub vertex_ops: [BTreeMap<String, Projection>; 2],
    pub edge_ops: [BTreeMap<String, Injection>; 2],
    pub certificate: DefectCertificate,
}

fn column(tag: &str) -> Region {
    Region::full(Some(tag.to_string()), &[CoordDomain::Integers])
}

fn certificate_for(g: &DirectedGraph, eta: &VertexFunction) -> DefectCertificate {
    let max_eta = eta.iter().map(|(_, &v)| v.abs()).max().unwrap_or(0);
    let max_degree = g
        .vertices()
        .iter()
        .map(|v| g.out_degree(v).unwrap_or(0) as i64)
        .max()
        .unwrap_or(0);
    // Edge defects live below max|eta| * d + d; vertex projection defects
    // below max|eta| itself (relevant when every vertex is a sink).
    DefectCertificate::new(max_eta.max(max_eta * max_degree + max_degree))
}

/// Builds the odd module prescribed by an integer function on non-sinks:
/// each vertex acts by the projection onto its line, the first edge at a
/// vertex `v` acts by `n -> d(n - eta(v))`, and the remaining edges by
/// `n -> i + dn`. Its index function is `eta`.
pub fn build_k1_module(g: &DirectedGraph, eta: &VertexFunction) -> Result<OddModule, ModelError> {
    if let Some(v) = g.nonsinks().into_iter().find(|v| eta.get(v).is_none()) {
        return Err(ModelError::MissingEta { vertex: v });
    }
    let certificate = certificate_for(g, eta);
    let space = BasisSpace::tagged(g.vertices(), vec![CoordDomain::Integers]);
    let mut vertex_ops = BTreeMap::new();
    for v in g.vertices() {
        vertex_ops.insert(v.clone(), Projection::single(column(v)));
    }
    let mut edge_ops = BTreeMap::new();
    let mut range_projections = BTreeMap::new();
    for v in g.nonsinks() {
        let edges = g.out_edges(&v)?;
        let d = edges.len() as i64;
        let eta_v = eta.get(&v).expect("checked above");
        for (i, e) in edges.iter().enumerate() {
            let action = if i == 0 {
                Affine1::scale_shift(d, -d * eta_v)
            } else {
                Affine1::scale_shift(d, i as i64)
            };
            let op = Injection::new(
                vec![Cell {
                    dom: column(&e.dst),
                    cod_tag: Some(v.clone()),
                    action: vec![action],
                }],
                certificate,
            );
            range_projections.insert(
                e.id.clone(),
                BasisOperator::Projection(op.image_projection()),
            );
            edge_ops.insert(e.id.clone(), op);
        }
    }
    Ok(OddModule {
        space,
        vertex_ops,
        edge_ops,
        range_projections,
        sign: SignOp::LastCoordNonNegative,
        certificate,
    })
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b - 1).div_euclid(b)
}

/// Builds the graded module prescribed by a harmonic integer function on
/// vertices. The unperturbed half projects each line at zero and interleaves
/// edges by residue; the perturbed half projects at `eta(v)` and realigns
/// the edge injections by a tail-aligned bijection, matching the finitely
/// many leftover points in sorted order. Every generator differs from its
/// unperturbed counterpart in finite rank.
pub fn build_k0_module(
    g: &DirectedGraph,
    eta: &VertexFunction,
) -> Result<GradedModule, ModelError> {
    if let Some(v) = g.vertices().iter().find(|v| eta.get(v).is_none()) {
        return Err(ModelError::MissingEta { vertex: v.clone() });
    }
    if let Some(v) = eta.harmonic_violations(g).into_iter().next() {
        return Err(ModelError::NotHarmonic { vertex: v });
    }
    let certificate = certificate_for(g, eta);
    let space = BasisSpace::tagged(g.vertices(), vec![CoordDomain::Integers]);

    let mut vertex0 = BTreeMap::new();
    let mut vertex1 = BTreeMap::new();
    for v in g.vertices() {
        let eta_v = eta.get(v).expect("checked above");
        vertex0.insert(
            v.clone(),
            Projection::single(column(v).with_coord(0, CoordConstraint::at_least(0))),
        );
        vertex1.insert(
            v.clone(),
            Projection::single(column(v).with_coord(0, CoordConstraint::at_least(eta_v))),
        );
    }

    let mut edge0 = BTreeMap::new();
    let mut edge1 = BTreeMap::new();
    for v in g.nonsinks() {
        let edges = g.out_edges(&v)?;
        let d = edges.len() as i64;
        let eta_v = eta.get(&v).expect("checked above");

        // Unperturbed half: residue-interleaved injections off the half line.
        for (i, e) in edges.iter().enumerate() {
            edge0.insert(
                e.id.clone(),
                Injection::new(
                    vec![Cell {
                        dom: column(&e.dst).with_coord(0, CoordConstraint::at_least(0)),
                        cod_tag: Some(v.clone()),
                        action: vec![Affine1::scale_shift(d, i as i64)],
                    }],
                    certificate,
                ),
            );
        }

        // Perturbed half: align each edge with the residue tail from its
        // threshold on, then match the leftover points in sorted order.
        // The leftover counts agree exactly because eta is harmonic.
        let thresholds: Vec<i64> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let eta_r = eta.get(&e.dst).expect("checked above");
                0.max(eta_r).max(div_ceil(eta_v - i as i64, d))
            })
            .collect();
        let mut leftover_domain: Vec<(usize, i64)> = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            let eta_r = eta.get(&e.dst).expect("checked above");
            for n in eta_r..thresholds[i] {
                leftover_domain.push((i, n));
            }
        }
        let scan_top = edges
            .iter()
            .enumerate()
            .map(|(i, _)| i as i64 + thresholds[i] * d)
            .max()
            .unwrap_or(eta_v);
        let mut leftover_codomain: Vec<i64> = Vec::new();
        for m in eta_v..scan_top {
            let i = m.rem_euclid(d);
            if (m - i).div_euclid(d) < thresholds[i as usize] {
                leftover_codomain.push(m);
            }
        }
        assert_eq!(
            leftover_domain.len(),
            leftover_codomain.len(),
            "leftover matching must balance at {v}; the mean-value identity was checked"
        );

        let mut matched: BTreeMap<usize, Vec<(i64, i64)>> = BTreeMap::new();
        for (&(i, n), &m) in leftover_domain.iter().zip(&leftover_codomain) {
            matched.entry(i).or_default().push((n, m));
        }
        for (i, e) in edges.iter().enumerate() {
            let mut cells = vec![Cell {
                dom: column(&e.dst).with_coord(0, CoordConstraint::at_least(thresholds[i])),
                cod_tag: Some(v.clone()),
                action: vec![Affine1::scale_shift(d, i as i64)],
            }];
            for &(n, m) in matched.get(&i).into_iter().flatten() {
                cells.push(Cell {
                    dom: column(&e.dst).with_coord(0, CoordConstraint::exactly(n)),
                    cod_tag: Some(v.clone()),
                    action: vec![Affine1::shift(m - n)],
                });
            }
            edge1.insert(e.id.clone(), Injection::new(cells, certificate));
        }
    }

    Ok(GradedModule {
        space,
        vertex_ops: [vertex0, vertex1],
        edge_ops: [edge0, edge1],
        certificate,
    })
}

fn count_difference(
    a: &Projection,
    b: &Projection,
    certificate: DefectCertificate,
    name: &str,
) -> Result<i64, ModelError> {
    let mut count = 0i64;
    for region in &a.regions {
        for p in region.points_within(certificate.scan_bound(), None) {
            if !b.contains(&p) {
                if p.max_abs_coord() <= certificate.radius {
                    count += 1;
                } else {
                    return Err(ModelError::CertificateViolation {
                        operator: name.to_string(),
                        point: p.to_string(),
                    });
                }
            }
        }
    }
    Ok(count)
}

/// Reads the index function of a graded module off the vertex projections:
/// at each vertex the compression of the identity from the unperturbed
/// range to the perturbed range has index "points lost minus points
/// gained". The result must satisfy the mean-value identity; a failure
/// flags a broken module.
pub fn index_k0(m: &GradedModule, g: &DirectedGraph) -> Result<VertexFunction, ModelError> {
    let mut out = VertexFunction::zero(VertexDomain::AllVertices, g);
    for v in g.vertices() {
        let p0 = m.vertex_ops[0]
            .get(v)
            .ok_or_else(|| ModelError::GraphMismatch {
                what: format!("no unperturbed projection for vertex {v}"),
            })?;
        let p1 = m.vertex_ops[1]
            .get(v)
            .ok_or_else(|| ModelError::GraphMismatch {
                what: format!("no perturbed projection for vertex {v}"),
            })?;
        let lost = count_difference(p0, p1, m.certificate, &format!("rho0({v})"))?;
        let gained = count_difference(p1, p0, m.certificate, &format!("rho1({v})"))?;
        out.set(v, lost - gained);
    }
    if let Some(v) = out.harmonic_violations(g).into_iter().next() {
        return Err(ModelError::IndexNotHarmonic { vertex: v });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Vertex,
    RangeProjection,
    Edge,
}

#[derive(Debug, Clone)]
pub struct StarEntry {
    pub label: String,
    pub kind: GeneratorKind,
    pub rank: u64,
}

/// Commutator ranks of the sign involution against every vertex projection,
/// every stored range projection, and (informationally) every edge
/// operator. The check passes when all vertex and range-projection ranks
/// vanish; edge operators are allowed finite nonzero rank.
#[derive(Debug, Clone)]
pub struct StarReport {
    pub entries: Vec<StarEntry>,
}

impl StarReport {
    pub fn passes(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| !matches!(e.kind, GeneratorKind::Edge))
            .all(|e| e.rank == 0)
    }

    pub fn offenders(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| !matches!(e.kind, GeneratorKind::Edge) && e.rank != 0)
            .map(|e| e.label.clone())
            .collect()
    }

    pub fn edge_ranks(&self) -> Vec<(String, u64)> {
        self.entries
            .iter()
            .filter(|e| matches!(e.kind, GeneratorKind::Edge))
            .map(|e| (e.label.clone(), e.rank))
            .collect()
    }
}

pub fn check_star_condition(m: &OddModule, g: &DirectedGraph) -> Result<StarReport, ModelError> {
    let mut entries = Vec::new();
    for v in g.vertices() {
        let op = m
            .vertex_ops
            .get(v)
            .ok_or_else(|| ModelError::GraphMismatch {
                what: format!("no projection for vertex {v}"),
            })?;
        let rank = commutator_rank(
            &m.sign,
            &BasisOperator::Projection(op.clone()),
            &format!("rho({v})"),
        )?;
        entries.push(StarEntry {
            label: format!("rho({v})"),
            kind: GeneratorKind::Vertex,
            rank,
        });
    }
    for e in g.edges() {
        let range = m
            .range_projections
            .get(&e.id)
            .ok_or_else(|| ModelError::GraphMismatch {
                what: format!("no range projection for edge {}", e.id),
            })?;
        let label = format!("rho({id} {id}*)", id = e.id);
        let rank = commutator_rank(&m.sign, range, &label)?;
        entries.push(StarEntry {
            label,
            kind: GeneratorKind::RangeProjection,
            rank,
        });
        let op = m
            .edge_ops
            .get(&e.id)
            .ok_or_else(|| ModelError::GraphMismatch {
                what: format!("no operator for edge {}", e.id),
            })?;
        let label = format!("rho({})", e.id);
        let rank = commutator_rank(&m.sign, &BasisOperator::Injection(op.clone()), &label)?;
        entries.push(StarEntry {
            label,
            kind: GeneratorKind::Edge,
            rank,
        });
    }
    Ok(StarReport { entries })
}

/// The index data of an odd module: the edge-level index function, its
/// pushdown to vertices, and the class of the pushdown in the cokernel of
/// the dual boundary.
#[derive(Debug)]
pub struct OddIndexData {
    pub edge_index: EdgeFunction,
    pub vertex_index: VertexFunction,
    pub class: GroupElement,
    pub presentation: AbelianGroupPresentation,
}

pub fn index_k1(m: &OddModule, g: &DirectedGraph) -> Result<OddIndexData, ModelError> {
    let star = check_star_condition(m, g)?;
    if !star.passes() {
        return Err(ModelError::StarConditionViolated {
            offenders: star.offenders(),
        });
    }
    let p = m.sign.positive_projection(&m.space);
    let mut edge_index = EdgeFunction::new();
    for e in g.edges() {
        let t = m
            .edge_ops
            .get(&e.id)
            .ok_or_else(|| ModelError::GraphMismatch {
                what: format!("no operator for edge {}", e.id),
            })?;
        let dom = m
            .vertex_ops
            .get(&e.dst)
            .ok_or_else(|| ModelError::GraphMismatch {
                what: format!("no projection for vertex {}", e.dst),
            })?;
        let cod = match m.range_projections.get(&e.id) {
            Some(BasisOperator::Projection(p)) => p,
            _ => {
                return Err(ModelError::GraphMismatch {
                    what: format!("range projection for edge {} is not diagonal", e.id),
                })
            }
        };
        let idx = compressed_index(&p, t, dom, cod, &format!("rho({})", e.id))?;
        edge_index.set_edge(&e.id, idx);
    }
    let vertex_index = edge_index.sum_over_sources(g);
    let dual = dualize(&vertex_complex(g));
    let presentation = AbelianGroupPresentation::cokernel(&dual.boundary, &dual.degree0_basis)?;
    let class = presentation.reduce(&vertex_index.to_vector(&g.nonsinks()))?;
    Ok(OddIndexData {
        edge_index,
        vertex_index,
        class,
        presentation,
    })
}

/// Basis-level Cuntz-Krieger relation check for one representation, on the
/// ambient window of the given bound: vertex projections are mutually
/// orthogonal, each edge operator is a bijection from the range projection's
/// subspace onto its image, and the images of the edges at a non-sink
/// partition that vertex's subspace.
#[derive(Debug, Clone)]
pub struct CkReport {
    pub violations: Vec<String>,
}

impl CkReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_ck_relations(
    space: &BasisSpace,
    vertex_ops: &BTreeMap<String, Projection>,
    edge_ops: &BTreeMap<String, Injection>,
    g: &DirectedGraph,
    window: i64,
) -> CkReport {
    let mut violations = Vec::new();
    let points = space.window_points(window);
    let image_projections: BTreeMap<&String, Projection> = edge_ops
        .iter()
        .map(|(id, op)| (id, op.image_projection()))
        .collect();

    for b in &points {
        let holders: Vec<&String> = g
            .vertices()
            .iter()
            .filter(|v| vertex_ops.get(*v).is_some_and(|p| p.contains(b)))
            .collect();
        if holders.len() > 1 {
            violations.push(format!(
                "point {b} lies in several vertex projections: {holders:?}"
            ));
        }
        for e in g.edges() {
            let in_dom = edge_ops.get(&e.id).is_some_and(|t| t.domain_contains(b));
            let in_range_vertex = vertex_ops.get(&e.dst).is_some_and(|p| p.contains(b));
            if in_dom != in_range_vertex {
                violations.push(format!(
                    "edge {}: domain and range-vertex projection disagree at {b}",
                    e.id
                ));
            }
        }
        for v in g.nonsinks() {
            let in_vertex = vertex_ops.get(&v).is_some_and(|p| p.contains(b));
            let hits = g
                .out_edges(&v)
                .expect("nonsink exists")
                .iter()
                .filter(|e| image_projections.get(&e.id).is_some_and(|p| p.contains(b)))
                .count();
            if in_vertex && hits != 1 {
                violations.push(format!(
                    "point {b} of vertex {v} is covered by {hits} edge images"
                ));
            }
            if !in_vertex && hits > 0 {
                violations.push(format!("point {b} outside vertex {v} is hit by its edges"));
            }
        }
    }

    // Forward/inverse consistency and injectivity on the window.
    for (id, op) in edge_ops {
        let mut seen: BTreeMap<BasisPoint, BasisPoint> = BTreeMap::new();
        for b in &points {
            if let Some(y) = op.apply(b) {
                if op.invert(&y).as_ref() != Some(b) {
                    violations.push(format!("edge {id}: inverse of image of {b} differs"));
                }
                if let Some(previous) = seen.insert(y.clone(), b.clone()) {
                    violations.push(format!(
                        "edge {id}: image point {y} hit from both {previous} and {b}"
                    ));
                }
            }
        }
    }
    CkReport { violations }
}

/// Direct sum of two odd modules over the same graph: the bases are made
/// disjoint by tag prefixes and all operators act summand-wise.
pub fn odd_direct_sum(a: &OddModule, b: &OddModule) -> OddModule {
    assert_eq!(
        a.space.coord_domains, b.space.coord_domains,
        "summands must share the coordinate shape"
    );
    assert_eq!(a.sign, b.sign, "summands must share the sign involution");
    let retag_all = |tags: &[Option<String>], prefix: &str| -> Vec<Option<String>> {
        tags.iter()
            .map(|t| Some(format!("{prefix}{}", t.clone().unwrap_or_default())))
            .collect()
    };
    let mut tags = retag_all(&a.space.tags, "L:");
    tags.extend(retag_all(&b.space.tags, "R:"));
    let space = BasisSpace {
        tags,
        coord_domains: a.space.coord_domains.clone(),
    };
    let certificate = DefectCertificate {
        radius: a.certificate.radius.max(b.certificate.radius),
        guard_width: a.certificate.guard_width.max(b.certificate.guard_width),
    };
    let mut vertex_ops = BTreeMap::new();
    for (v, pa) in &a.vertex_ops {
        let pb = b.vertex_ops.get(v).expect("same graph");
        vertex_ops.insert(v.clone(), pa.retag("L:").union(&pb.retag("R:")));
    }
    let mut edge_ops = BTreeMap::new();
    let mut range_projections = BTreeMap::new();
    for (e, ta) in &a.edge_ops {
        let tb = b.edge_ops.get(e).expect("same graph");
        let mut cells = ta.retag("L:").cells;
        cells.extend(tb.retag("R:").cells);
        let op = Injection::new(cells, certificate);
        range_projections.insert(e.clone(), BasisOperator::Projection(op.image_projection()));
        edge_ops.insert(e.clone(), op);
    }
    OddModule {
        space,
        vertex_ops,
        edge_ops,
        range_projections,
        sign: a.sign,
        certificate,
    }
}

/// Direct sum of two graded modules over the same graph.
pub fn graded_direct_sum(a: &GradedModule, b: &GradedModule) -> GradedModule {
    assert_eq!(a.space.coord_domains, b.space.coord_domains);
    let retag_all = |tags: &[Option<String>], prefix: &str| -> Vec<Option<String>> {
        tags.iter()
            .map(|t| Some(format!("{prefix}{}", t.clone().unwrap_or_default())))
            .collect()
    };
    let mut tags = retag_all(&a.space.tags, "L:");
    tags.extend(retag_all(&b.space.tags, "R:"));
    let space = BasisSpace {
        tags,
        coord_domains: a.space.coord_domains.clone(),
    };
    let certificate = DefectCertificate {
        radius: a.certificate.radius.max(b.certificate.radius),
        guard_width: a.certificate.guard_width.max(b.certificate.guard_width),
    };
    let sum_vertices = |half: usize| -> BTreeMap<String, Projection> {
        a.vertex_ops[half]
            .iter()
            .map(|(v, pa)| {
                let pb = b.vertex_ops[half].get(v).expect("same graph");
                (v.clone(), pa.retag("L:").union(&pb.retag("R:")))
            })
            .collect()
    };
    let sum_edges = |half: usize| -> BTreeMap<String, Injection> {
        a.edge_ops[half]
            .iter()
            .map(|(e, ta)| {
                let tb = b.edge_ops[half].get(e).expect("same graph");
                let mut cells = ta.retag("L:").cells;
                cells.extend(tb.retag("R:").cells);
                (e.clone(), Injection::new(cells, certificate))
            })
            .collect()
    };
    GradedModule {
        space,
        vertex_ops: [sum_vertices(0), sum_vertices(1)],
        edge_ops: [sum_edges(0), sum_edges(1)],
        certificate,
    }
}

/// A deliberately broken odd module for negative testing: the stored range
/// projection of the loop edge is replaced by an operator that sends one
/// point of the subspace to its sign-flipped mirror. The commutation check
/// must fail on it with a rank-one witness.
pub fn corrupted_star_fixture() -> (DirectedGraph, OddModule) {
    let g = DirectedGraph::new(
        vec!["v".to_string()],
        vec![Edge {
            id: "e".to_string(),
            src: "v".to_string(),
            dst: "v".to_string(),
        }],
    );
    let mut eta = VertexFunction::zero(VertexDomain::NonSinksOnly, &g);
    eta.set("v", 1);
    let mut module = build_k1_module(&g, &eta).expect("one-loop module builds");

    let tampered = Injection::new(
        vec![
            Cell {
                dom: column("v").with_coord(
                    0,
                    CoordConstraint {
                        hi: Some(-2),
                        ..Default::default()
                    },
                ),
                cod_tag: Some("v".to_string()),
                action: vec![Affine1::identity()],
            },
            Cell {
                dom: column("v").with_coord(0, CoordConstraint::at_least(1)),
                cod_tag: Some("v".to_string()),
                action: vec![Affine1::identity()],
            },
            Cell {
                dom: column("v").with_coord(0, CoordConstraint::exactly(0)),
                cod_tag: Some("v".to_string()),
                action: vec![Affine1::shift(-1)],
            },
        ],
        module.certificate,
    );
    module
        .range_projections
        .insert("e".to_string(), BasisOperator::Injection(tampered));
    (g, module)
}
