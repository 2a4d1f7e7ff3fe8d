//! Exact integer linear algebra: matrices, Smith normal form with unimodular
//! transform tracking, and presentations of finitely generated abelian groups.

mod group;
mod matrix;
mod smith;

pub use group::{
    format_combination, primary_decomposition, AbelianGroupPresentation, Generator, GroupElement,
    Order,
};
pub use matrix::IntMatrix;
pub use smith::{kernel_basis, smith, SmithDecomposition};

/// Errors from dimension-sensitive linear algebra entry points.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("vector does not lie in the presented subgroup")]
    NotInSubgroup,
}
