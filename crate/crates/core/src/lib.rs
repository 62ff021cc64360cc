// Index loops mirror the tensor notation; `!(a < b)` forms also reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod diff;
pub mod error;
pub mod expr;
pub mod field;
pub mod geometry;
pub mod job;
pub mod linalg;
pub mod models;
pub mod quadrature;
pub mod sasaki;
pub mod scalar;
pub mod selftest;
pub mod variational;

pub use diff::DiffBackend;
pub use error::{GeomError, Result};
pub use field::{ScalarField, VectorField};
pub use geometry::{Chart, Geometry};
pub use scalar::{Dual, Scalar};
