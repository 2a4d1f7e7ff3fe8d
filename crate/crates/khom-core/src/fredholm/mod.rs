//! Exact symbolic Fredholm module models over a graph algebra.
//!
//! Operators are signed partial basis injections on a countable orthonormal
//! basis, so Cuntz-Krieger relations, commutator ranks, and Fredholm indices
//! are all decided by finite enumeration backed by defect certificates.

mod module;
mod op;
mod space;

pub use module::{
    build_k0_module, build_k1_module, check_ck_relations, check_star_condition,
    corrupted_star_fixture, graded_direct_sum, index_k0, index_k1, odd_direct_sum, CkReport,
    GeneratorKind, GradedModule, OddIndexData, OddModule, StarEntry, StarReport,
};
pub use op::{
    commutator_rank, compressed_index, perturbation_rank, Affine1, BasisOperator, Cell,
    DefectCertificate, Injection, Projection, SignOp, DEFAULT_GUARD_WIDTH,
};
pub use space::{
    merge_residues, BasisPoint, BasisSpace, CoordConstraint, CoordDomain, Incompatible, Region,
    Residue,
};

use crate::graph::GraphError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("certificate violation for {operator}: defect at {point} outside the claimed radius")]
    CertificateViolation { operator: String, point: String },
    #[error("coverage not provable: {what}")]
    CoverageNotProvable { what: String },
    #[error("unsupported composition: {what}")]
    UnsupportedComposition { what: String },
    #[error("vertex function is not harmonic at {vertex}")]
    NotHarmonic { vertex: String },
    #[error("no value supplied for vertex {vertex}")]
    MissingEta { vertex: String },
    #[error("computed index function fails the mean-value identity at {vertex}: broken module")]
    IndexNotHarmonic { vertex: String },
    #[error("sign involution fails to commute with projections: {offenders:?}")]
    StarConditionViolated { offenders: Vec<String> },
    #[error("eigenspace index {m} out of range for modulus {p}")]
    EigenspaceOutOfRange { m: usize, p: usize },
    #[error("independent computation routes disagree: {what}")]
    RouteMismatch { what: String },
    #[error("module does not match the graph: {what}")]
    GraphMismatch { what: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
