//! Output-mode transforms between generator logits and indicator
//! probabilities, with their backward passes.

use std::ops::Range;

use crate::matrix::Matrix;
use crate::nn::Activation;
use crate::scalar::Real;

use super::OutputMode;

/// Forward transform of generator logits into per-unit probabilities.
pub fn probs_from_logits<T: Real>(
    logits: &Matrix<T>,
    mode: OutputMode,
    blocks: &[Range<usize>],
) -> Matrix<T> {
    match mode {
        OutputMode::IndependentBernoulli => logits.map(|z| Activation::Sigmoid.apply(z)),
        OutputMode::PerVariableSoftmax => {
            let mut out = logits.clone();
            for r in 0..out.rows() {
                let row = out.row_mut(r);
                for block in blocks {
                    let slice = &mut row[block.clone()];
                    let max = slice.iter().copied().fold(T::neg_infinity(), T::max);
                    let mut sum = T::zero();
                    for x in slice.iter_mut() {
                        *x = (*x - max).exp();
                        sum = sum + *x;
                    }
                    for x in slice.iter_mut() {
                        *x = *x / sum;
                    }
                }
            }
            out
        }
    }
}

/// Chain dL/dprobs back to dL/dlogits.
pub fn logits_grad<T: Real>(
    prob_grad: &Matrix<T>,
    probs: &Matrix<T>,
    mode: OutputMode,
    blocks: &[Range<usize>],
) -> Matrix<T> {
    match mode {
        OutputMode::IndependentBernoulli => {
            prob_grad.zip_map(probs, |g, p| g * p * (T::one() - p))
        }
        OutputMode::PerVariableSoftmax => {
            let mut out = Matrix::zeros(prob_grad.rows(), prob_grad.cols());
            for r in 0..out.rows() {
                for block in blocks {
                    let g = &prob_grad.row(r)[block.clone()];
                    let p = &probs.row(r)[block.clone()];
                    let mut dot = T::zero();
                    for (&gi, &pi) in g.iter().zip(p) {
                        dot = dot + gi * pi;
                    }
                    for (offset, (&gi, &pi)) in g.iter().zip(p).enumerate() {
                        out.set(r, block.start + offset, pi * (gi - dot));
                    }
                }
            }
            out
        }
    }
}
