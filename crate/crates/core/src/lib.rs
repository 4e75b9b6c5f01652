//! Exact-arithmetic Kostant cohomology and BGG resolutions for the Lie
//! superalgebra gl(m|n) with respect to parabolic subalgebras.
//!
//! The crate builds gl(m|n) with its supercommutator and normalized Killing
//! form, finite-dimensional weight modules with exact rational action
//! matrices, the chain complexes Λ^k n ⊗ V with the codifferential ∂*, its
//! adjoint ∂ and the quabla operator, truncated coinduced (jet) modules with
//! the twisted de Rham operator d and the splitting operators Π, L, D, and
//! finally per-degree generalized-Verma descriptors with Euler-characteristic
//! exactness verification. Every identity is checked in exact rational
//! arithmetic; there is no floating point.

pub mod algebra;
pub mod chains;
pub mod jets;
pub mod linalg;
pub mod pipeline;
pub mod quabla;
pub mod rep;
pub mod report;
pub mod resolution;
pub mod scalar;
