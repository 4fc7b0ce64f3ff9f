//! Minimal dense feed-forward networks with reverse-mode gradients, a
//! numerically stable binary cross-entropy, and an adaptive-moment
//! optimizer. Just enough substrate for the adversarial trainer; no
//! general computation graphs.

mod adam;
mod loss;
mod mlp;

pub use adam::{adam_step, AdamConfig, OptState};
pub use loss::bce_with_logits;
pub use mlp::{Activation, ForwardCache, Gradients, Layer, LayerGrad, Mlp};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("need at least 2 layer sizes, got {got}")]
    TooFewSizes { got: usize },
    #[error("layer sizes must be positive")]
    ZeroSize,
    #[error("{activations} activation tags for {layers} layers")]
    ActivationCount { activations: usize, layers: usize },
    #[error("input width {got} does not match first layer input {expected}")]
    InputWidth { got: usize, expected: usize },
    #[error("gradient shape ({rows}, {cols}) does not match output ({expected_rows}, {expected_cols})")]
    OutputGradShape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("forward cache does not belong to this network")]
    CacheMismatch,
    #[error("targets must be exactly 0 or 1")]
    TargetNotBinary,
    #[error("loss shapes differ: logits ({zr}, {zc}) vs targets ({tr}, {tc})")]
    LossShape { zr: usize, zc: usize, tr: usize, tc: usize },
    #[error("gradients are not shape-congruent with the network")]
    GradientShape,
    #[error("non-finite gradient entry in layer {layer}")]
    NonFiniteGradient { layer: usize },
}
