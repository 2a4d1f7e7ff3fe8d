//! Exact K-theory and K-homology for finite graph C*-algebras.
//!
//! The crate computes, over the integers and without any floating point:
//!
//! - K-theory and K-homology of the algebra of a finite directed graph, as
//!   presented abelian groups with named generators (`kgroups`);
//! - explicit Fredholm module models whose operators act on countable
//!   orthonormal bases by signed partial injections, together with exact
//!   commutator ranks and Fredholm indices (`fredholm`);
//! - the quantum sphere and quantum lens space specializations, including
//!   the eigenspace decomposition of the sphere's generating module and the
//!   resulting generators of lens-space K-homology (`lens`).

pub mod complexes;
pub mod corpus;
pub mod fredholm;
pub mod graph;
pub mod kgroups;
pub mod lens;
pub mod linalg;
pub mod report;
