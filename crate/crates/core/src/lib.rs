//! Exact constructive weights for (multigraph, spanning tree) pairs, the
//! positivity structure behind the forest formula, Symanzik-polynomial
//! amplitudes, and loop vertex expansion bookkeeping for the
//! zero-dimensional quartic model.

pub mod canon;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod linalg;
pub mod mc;
pub mod phi4;
pub mod positivity;
pub mod scalar;
pub mod symanzik;
pub mod weights;

pub use num_rational::BigRational;
pub use scalar::Scalar;

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

pub type ExactWeakeningMatrix = positivity::WeakeningMatrix<Rational>;
pub type WeakeningMatrixF64 = positivity::WeakeningMatrix<f64>;
pub type WeakeningMatrixF32 = positivity::WeakeningMatrix<f32>;
pub type ExactWeakeningVector = positivity::WeakeningVector<Rational>;
pub type WeakeningVectorF64 = positivity::WeakeningVector<f64>;
pub type ExactBlockPartition = positivity::BlockPartition<Rational>;
pub type BlockPartitionF64 = positivity::BlockPartition<f64>;
