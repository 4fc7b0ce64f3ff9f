//! Tabular adversarial generator: latent noise through a generator
//! network into categorical indicators, a discriminator scoring real
//! versus generated rows, alternating minimax updates.

mod checkpoint;
mod generate;
mod output;
mod train;

pub use checkpoint::CheckpointDoc;
pub use generate::generate;
pub use train::{train_gan, TrainingLog};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nn::Mlp;
use crate::scalar::Real;
use crate::tabular::Schema;

#[derive(Debug, Error)]
pub enum GanError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("batch size {batch} exceeds training-set size {rows}")]
    BatchTooLarge { batch: usize, rows: usize },
    #[error("training table is empty")]
    EmptyTable,
    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("checkpoint document: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Nn(#[from] crate::nn::NnError),
    #[error(transparent)]
    Tabular(#[from] crate::tabular::TabularError),
}

/// How generator outputs become categorical indicators.
///
/// `IndependentBernoulli` passes every output unit through a sigmoid
/// and samples it as an independent coin, so raw indicator blocks need
/// not sum to one. `PerVariableSoftmax` normalizes each variable block
/// and samples one category, so raw output is strict one-hot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    IndependentBernoulli,
    PerVariableSoftmax,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GanConfig {
    pub latent_dim: usize,
    pub generator_hidden: Vec<usize>,
    pub discriminator_hidden: Vec<usize>,
    pub batch_size: usize,
    pub epochs: usize,
    pub generator_lr: f64,
    pub discriminator_lr: f64,
    pub seed: u64,
    pub output_mode: OutputMode,
}

impl Default for GanConfig {
    fn default() -> Self {
        Self {
            latent_dim: 16,
            generator_hidden: vec![32, 32],
            discriminator_hidden: vec![32, 32],
            batch_size: 64,
            epochs: 300,
            generator_lr: 1e-3,
            discriminator_lr: 1e-3,
            seed: 42,
            output_mode: OutputMode::IndependentBernoulli,
        }
    }
}

impl GanConfig {
    pub fn validate(&self, training_rows: usize) -> Result<(), GanError> {
        if self.latent_dim == 0 {
            return Err(GanError::InvalidConfig("latent_dim must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(GanError::InvalidConfig("batch_size must be positive".into()));
        }
        if self.generator_hidden.iter().chain(&self.discriminator_hidden).any(|&h| h == 0) {
            return Err(GanError::InvalidConfig("hidden sizes must be positive".into()));
        }
        if !(self.generator_lr.is_finite() && self.generator_lr > 0.0)
            || !(self.discriminator_lr.is_finite() && self.discriminator_lr > 0.0)
        {
            return Err(GanError::InvalidConfig("learning rates must be positive".into()));
        }
        if training_rows == 0 {
            return Err(GanError::EmptyTable);
        }
        if self.batch_size > training_rows {
            return Err(GanError::BatchTooLarge {
                batch: self.batch_size,
                rows: training_rows,
            });
        }
        Ok(())
    }
}

/// A trained (or freshly initialized) generator/discriminator pair,
/// bound to the schema it was trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct GanModel<T = f64> {
    pub generator: Mlp<T>,
    pub discriminator: Mlp<T>,
    pub config: GanConfig,
    schema: Schema,
    column_map: Vec<(usize, usize)>,
}

impl<T: Real> GanModel<T> {
    pub(crate) fn new(
        generator: Mlp<T>,
        discriminator: Mlp<T>,
        config: GanConfig,
        schema: Schema,
        column_map: Vec<(usize, usize)>,
    ) -> Self {
        debug_assert_eq!(generator.output_dim(), column_map.len());
        debug_assert_eq!(discriminator.input_dim(), column_map.len());
        Self { generator, discriminator, config, schema, column_map }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn column_map(&self) -> &[(usize, usize)] {
        &self.column_map
    }

    /// Total indicator width the generator emits.
    pub fn indicator_width(&self) -> usize {
        self.column_map.len()
    }
}
