//! Exact matrices, subspaces, canonical forms, and the general-linear
//! factorization constructions.

pub mod canonical;
pub mod factor;
pub mod mat;
pub mod subspace;

pub use canonical::{
    cyclic_decomposition, elementary_divisor_multiplicities, invariant_factors, is_similar,
    linear_elementary_divisors, minimal_polynomial, similarity_transform, SimilarityInvariants,
};
pub use factor::*;
pub use mat::{bilinear, vec_mat, Mat, Vector};
pub use subspace::{spaces, SpaceKind, Subspace};
