//! Exact computations for extriangulated categories with finitely many
//! indecomposables: higher positive and negative extensions, defects,
//! balance conditions and relative structures.

pub mod defects;
pub mod fincat;
pub mod funcat;
pub mod instances;
pub mod linalg;
pub mod negext;
pub mod posext;
pub mod relstruct;
pub mod scalar;

pub use num_rational::BigRational;
pub use scalar::{Fp, Scalar};

pub type Rational = BigRational;
pub type QMatrix = linalg::Matrix<Rational>;
pub type FpMatrix = linalg::Matrix<Fp>;
pub type QInstance = instances::ExtriInstance<Rational>;
pub type FpInstance = instances::ExtriInstance<Fp>;
