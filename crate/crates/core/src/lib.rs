//! Principal component analysis built from first principles.
//!
//! The crate provides two independent routes to the principal components of
//! a data set and the dense linear algebra underneath them:
//!
//! * [`matrix`]: a row-major dense [`Matrix`] with products, transposes,
//!   orthogonality checks and orthonormal basis completion.
//! * [`eigen`]: cyclic Jacobi eigendecomposition for symmetric matrices, plus
//!   a greedy power-iteration route used as an oracle.
//! * [`svd`]: singular value decomposition assembled from the eigenvectors of
//!   `XᵀX`.
//! * [`pca`]: centering, covariance, the eigen and SVD fitting routes,
//!   projection and reconstruction.
//! * [`datagen`]: seeded synthetic sources (a spring filmed by three cameras,
//!   correlated pairs, and data sets on which PCA is known to fail).
//! * [`cli`]: the `pcakit` command line front end and its file formats.
//!
//! See the `examples/` directory for one runnable program per capability.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod datagen;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod pca;
pub mod svd;

pub use error::{Error, Result};
pub use matrix::Matrix;
