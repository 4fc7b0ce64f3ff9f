//! Binary cross-entropy on logits.

use crate::matrix::Matrix;
use crate::scalar::{real, Real};

use super::mlp::sigmoid;
use super::NnError;

/// Mean binary cross-entropy of logits `z` against 0/1 targets, with
/// its gradient in `z`.
///
/// Each term is computed in the overflow-safe form
/// `max(z, 0) - t*z + ln(1 + exp(-|z|))`, so the loss is finite for
/// every finite logit. The gradient is `(sigmoid(z) - t) / n` with `n`
/// the number of entries (the mean's denominator).
pub fn bce_with_logits<T: Real>(
    logits: &Matrix<T>,
    targets: &Matrix<T>,
) -> Result<(T, Matrix<T>), NnError> {
    if logits.rows() != targets.rows() || logits.cols() != targets.cols() {
        return Err(NnError::LossShape {
            zr: logits.rows(),
            zc: logits.cols(),
            tr: targets.rows(),
            tc: targets.cols(),
        });
    }
    if targets.data().iter().any(|&t| t != T::zero() && t != T::one()) {
        return Err(NnError::TargetNotBinary);
    }
    let n = real::<T>((logits.rows() * logits.cols()) as f64);
    let mut total = T::zero();
    for (&z, &t) in logits.data().iter().zip(targets.data()) {
        let term = z.max(T::zero()) - t * z + (-z.abs()).exp().ln_1p();
        total = total + term;
    }
    let grad = logits.zip_map(targets, |z, t| (sigmoid(z) - t) / n);
    Ok((total / n, grad))
}
