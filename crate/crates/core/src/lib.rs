//! Exact analysis of cubic-linear maps `F_A(x) = x + (Ax)³`.

pub mod cubic;
pub mod druzkowski;
pub mod error;
pub mod family;
pub mod json;
pub mod matrix;
pub mod probe;
pub mod properness;
pub mod report;
pub mod scalar;
pub mod subspace;
pub mod vector;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{Rational, Scalar};
pub use subspace::{SubspaceBasis, SubspaceLabel};
pub use vector::{Power, Vector};

/// Exact rational vector.
pub type QVector = Vector<Rational>;
/// Exact rational matrix.
pub type QMatrix = Matrix<Rational>;
/// Double-precision vector.
pub type FVector = Vector<f64>;
/// Double-precision matrix.
pub type FMatrix = Matrix<f64>;
