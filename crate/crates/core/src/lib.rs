//! Synthetic categorical tabular data generation and benchmarking.
//!
//! Two generators are built over the same categorical [`Schema`]: an
//! expert-structured Bayesian network fitted by counting
//! ([`bayesnet`]) and a small adversarial network trained on one-hot
//! rows ([`gan`]). The [`eval`] module scores source data and both
//! synthetic datasets with descriptive statistics, distribution
//! curves, a kNN classifier under cross-validation, and a three-way
//! comparison report.
//!
//! Numeric kernels are generic over the scalar type
//! ([`scalar::Real`], implemented for `f32` and `f64`). The type
//! aliases at the crate root fix the scalar to `f64`, which is what
//! the CLI and the test suites use.
//!
//! Everything that draws randomness takes an explicit `u64` seed and
//! is deterministic given it; see [`rng`] for the stream and
//! seed-splitting scheme.

pub mod bayesnet;
pub mod eval;
pub mod gan;
pub mod matrix;
pub mod nn;
pub mod rng;
pub mod scalar;
pub mod tabular;

pub use scalar::Real;
pub use tabular::{BinningSpec, CategoricalTable, RawTable, Schema, Variable};

/// Indicator (one-hot or raw) matrix over `f64`.
pub type IndicatorMatrix = tabular::IndicatorMatrix<f64>;
/// Conditional probability table over `f64`.
pub type Cpt = bayesnet::Cpt<f64>;
/// Bayesian network over `f64`.
pub type BayesianNetwork = bayesnet::BayesianNetwork<f64>;
/// Full-joint enumeration table over `f64`.
pub type JointTable = bayesnet::JointTable<f64>;
/// Dense matrix over `f64`.
pub type Matrix = matrix::Matrix<f64>;
/// Feed-forward network over `f64`.
pub type Mlp = nn::Mlp<f64>;
/// Parameter gradients over `f64`.
pub type Gradients = nn::Gradients<f64>;
/// Optimizer state over `f64`.
pub type OptState = nn::OptState<f64>;
/// Optimizer hyperparameters over `f64`.
pub type AdamConfig = nn::AdamConfig<f64>;
/// Trained GAN over `f64`.
pub type GanModel = gan::GanModel<f64>;
