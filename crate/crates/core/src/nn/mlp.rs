//! Layers, initialization, forward pass and backprop.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::rng;
use crate::scalar::{real, Real};

use super::NnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Sigmoid,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply<T: Real>(self, z: T) -> T {
        match self {
            Activation::Relu => {
                if z > T::zero() {
                    z
                } else {
                    T::zero()
                }
            }
            Activation::Sigmoid => sigmoid(z),
            Activation::Identity => z,
        }
    }

    /// Derivative with respect to the pre-activation. Relu uses
    /// subgradient 0 at exactly 0.
    #[inline]
    pub fn derivative<T: Real>(self, z: T) -> T {
        match self {
            Activation::Relu => {
                if z > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Activation::Sigmoid => {
                let s = sigmoid(z);
                s * (T::one() - s)
            }
            Activation::Identity => T::one(),
        }
    }
}

/// Overflow-safe logistic function.
#[inline]
pub fn sigmoid<T: Real>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// One dense layer: `out x in` weights, `out` biases, an activation.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer<T> {
    pub weights: Matrix<T>,
    pub bias: Vec<T>,
    pub activation: Activation,
}

impl<T: Real> Layer<T> {
    pub fn input_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.weights.rows()
    }
}

/// A chain of dense layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp<T = f64> {
    layers: Vec<Layer<T>>,
}

/// Everything the backward pass needs from a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache<T> {
    /// Input that reached each layer (index 0 is the network input).
    layer_inputs: Vec<Matrix<T>>,
    /// Pre-activation of each layer.
    preacts: Vec<Matrix<T>>,
    output: Matrix<T>,
}

impl<T: Real> ForwardCache<T> {
    pub fn output(&self) -> &Matrix<T> {
        &self.output
    }
}

/// Per-layer gradients, shape-congruent with an [`Mlp`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T = f64> {
    pub layers: Vec<LayerGrad<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad<T> {
    pub weights: Matrix<T>,
    pub bias: Vec<T>,
}

impl<T: Real> Gradients<T> {
    pub fn zeros_like(mlp: &Mlp<T>) -> Self {
        Self {
            layers: mlp
                .layers
                .iter()
                .map(|l| LayerGrad {
                    weights: Matrix::zeros(l.output_dim(), l.input_dim()),
                    bias: vec![T::zero(); l.output_dim()],
                })
                .collect(),
        }
    }

    pub fn matches(&self, mlp: &Mlp<T>) -> bool {
        self.layers.len() == mlp.layers.len()
            && self.layers.iter().zip(&mlp.layers).all(|(g, l)| {
                g.weights.rows() == l.weights.rows()
                    && g.weights.cols() == l.weights.cols()
                    && g.bias.len() == l.bias.len()
            })
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.layers.len(), other.layers.len());
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.weights = a.weights.zip_map(&b.weights, |x, y| x + y);
            for (x, &y) in a.bias.iter_mut().zip(&b.bias) {
                *x = *x + y;
            }
        }
    }

    pub fn all_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.all_finite() && l.bias.iter().all(|b| b.is_finite()))
    }
}

impl<T: Real> Mlp<T> {
    /// Build a network from explicit layers (used by checkpoints and tests).
    pub fn from_layers(layers: Vec<Layer<T>>) -> Self {
        for w in layers.windows(2) {
            assert_eq!(
                w[1].input_dim(),
                w[0].output_dim(),
                "adjacent layer dimensions must chain"
            );
        }
        Self { layers }
    }

    /// Glorot-uniform initialization: weights uniform in [-s, s] with
    /// s = sqrt(6 / (in + out)), biases zero. Weights are drawn layer
    /// by layer in row-major order, so the parameters are a pure
    /// function of the seed.
    pub fn new(sizes: &[usize], activations: &[Activation], seed: u64) -> Result<Self, NnError> {
        if sizes.len() < 2 {
            return Err(NnError::TooFewSizes { got: sizes.len() });
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(NnError::ZeroSize);
        }
        if activations.len() != sizes.len() - 1 {
            return Err(NnError::ActivationCount {
                activations: activations.len(),
                layers: sizes.len() - 1,
            });
        }
        let mut stream = rng::stream(seed);
        let mut layers = Vec::with_capacity(activations.len());
        for (k, &activation) in activations.iter().enumerate() {
            let (input, output) = (sizes[k], sizes[k + 1]);
            let scale = (6.0 / (input + output) as f64).sqrt();
            let weights = Matrix::from_fn(output, input, |_, _| {
                real::<T>((2.0 * stream.gen::<f64>() - 1.0) * scale)
            });
            layers.push(Layer { weights, bias: vec![T::zero(); output], activation });
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer<T>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer<T>] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("network has layers").output_dim()
    }

    pub fn n_parameters(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.rows() * l.weights.cols() + l.bias.len())
            .sum()
    }

    /// Affine-plus-activation chain over a batch (rows are samples).
    pub fn forward(&self, x: &Matrix<T>) -> Result<(Matrix<T>, ForwardCache<T>), NnError> {
        if x.cols() != self.input_dim() {
            return Err(NnError::InputWidth { got: x.cols(), expected: self.input_dim() });
        }
        let mut layer_inputs = Vec::with_capacity(self.layers.len());
        let mut preacts = Vec::with_capacity(self.layers.len());
        let mut current = x.clone();
        for layer in &self.layers {
            let z = current.matmul_bt(&layer.weights).add_row_broadcast(&layer.bias);
            let a = z.map(|v| layer.activation.apply(v));
            layer_inputs.push(current);
            preacts.push(z);
            current = a;
        }
        let cache = ForwardCache { layer_inputs, preacts, output: current.clone() };
        Ok((current, cache))
    }

    /// Exact reverse-mode gradients of the chain. `output_grad` is
    /// dL/d(output); gradients are summed over the batch rows. Also
    /// returns dL/d(input) so callers can chain through this network.
    pub fn backprop(
        &self,
        cache: &ForwardCache<T>,
        output_grad: &Matrix<T>,
    ) -> Result<(Gradients<T>, Matrix<T>), NnError> {
        if cache.layer_inputs.len() != self.layers.len() {
            return Err(NnError::CacheMismatch);
        }
        let out = &cache.output;
        if output_grad.rows() != out.rows() || output_grad.cols() != out.cols() {
            return Err(NnError::OutputGradShape {
                rows: output_grad.rows(),
                cols: output_grad.cols(),
                expected_rows: out.rows(),
                expected_cols: out.cols(),
            });
        }
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut upstream = output_grad.clone();
        for (k, layer) in self.layers.iter().enumerate().rev() {
            let preact = &cache.preacts[k];
            if preact.rows() != upstream.rows() || preact.cols() != upstream.cols() {
                return Err(NnError::CacheMismatch);
            }
            let delta = upstream.zip_map(preact, |g, z| g * layer.activation.derivative(z));
            let weight_grad = delta.at_mul_b(&cache.layer_inputs[k]);
            let bias_grad = delta.column_sums();
            upstream = delta.matmul(&layer.weights);
            grads.push(LayerGrad { weights: weight_grad, bias: bias_grad });
        }
        grads.reverse();
        Ok((Gradients { layers: grads }, upstream))
    }

    /// Parameters as nested JSON arrays, layer-ordered (debug aid).
    pub fn params_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.layers
                .iter()
                .map(|l| {
                    serde_json::json!({
                        "weights": (0..l.weights.rows())
                            .map(|r| l.weights.row(r).iter().map(|&x| crate::scalar::to_f64(x)).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "bias": l.bias.iter().map(|&x| crate::scalar::to_f64(x)).collect::<Vec<_>>(),
                        "activation": l.activation,
                    })
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_shapes_follow_the_size_list() {
        let mlp: Mlp<f64> =
            Mlp::new(&[2, 3, 1], &[Activation::Relu, Activation::Identity], 0).unwrap();
        assert_eq!(mlp.layers().len(), 2);
        assert_eq!((mlp.layers()[0].weights.rows(), mlp.layers()[0].weights.cols()), (3, 2));
        assert_eq!(mlp.layers()[0].bias.len(), 3);
        assert_eq!((mlp.layers()[1].weights.rows(), mlp.layers()[1].weights.cols()), (1, 3));
        assert_eq!(mlp.layers()[1].bias.len(), 1);
    }

    #[test]
    fn init_biases_are_zero_and_weights_bounded() {
        let mlp: Mlp<f64> = Mlp::new(&[4, 8], &[Activation::Sigmoid], 3).unwrap();
        assert!(mlp.layers()[0].bias.iter().all(|&b| b == 0.0));
        let s = (6.0 / 12.0f64).sqrt();
        assert!(mlp.layers()[0].weights.data().iter().all(|&w| w.abs() <= s));
    }

    #[test]
    fn init_is_seed_deterministic() {
        let a: Mlp<f64> = Mlp::new(&[3, 5, 2], &[Activation::Relu, Activation::Identity], 9).unwrap();
        let b: Mlp<f64> = Mlp::new(&[3, 5, 2], &[Activation::Relu, Activation::Identity], 9).unwrap();
        assert_eq!(a, b);
        let c: Mlp<f64> = Mlp::new(&[3, 5, 2], &[Activation::Relu, Activation::Identity], 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn init_validates_arguments() {
        assert!(matches!(
            Mlp::<f64>::new(&[2], &[], 0).unwrap_err(),
            NnError::TooFewSizes { .. }
        ));
        assert!(matches!(
            Mlp::<f64>::new(&[2, 0], &[Activation::Relu], 0).unwrap_err(),
            NnError::ZeroSize
        ));
        assert!(matches!(
            Mlp::<f64>::new(&[2, 2], &[], 0).unwrap_err(),
            NnError::ActivationCount { .. }
        ));
    }

    fn identity_net(dim: usize) -> Mlp<f64> {
        let weights = Matrix::from_fn(dim, dim, |r, c| if r == c { 1.0 } else { 0.0 });
        Mlp::from_layers(vec![Layer {
            weights,
            bias: vec![0.0; dim],
            activation: Activation::Identity,
        }])
    }

    #[test]
    fn identity_network_reproduces_the_input() {
        let mlp = identity_net(3);
        let x = Matrix::from_rows(&[vec![1.0, -2.0, 0.5], vec![0.0, 4.0, -1.0]]);
        let (y, _) = mlp.forward(&x).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn sigmoid_of_zero_is_half_and_relu_clamps() {
        let mlp = Mlp::from_layers(vec![Layer {
            weights: Matrix::from_rows(&[vec![0.0]]),
            bias: vec![0.0],
            activation: Activation::Sigmoid,
        }]);
        let (y, _) = mlp.forward(&Matrix::from_rows(&[vec![123.0]])).unwrap();
        assert_eq!(y.get(0, 0), 0.5);

        assert_eq!(Activation::Relu.apply(-3.0), 0.0);
        assert_eq!(Activation::Relu.apply(2.0), 2.0);
        assert_eq!(Activation::Relu.derivative(0.0), 0.0);
    }

    #[test]
    fn forward_rejects_wrong_width() {
        let mlp = identity_net(3);
        let x = Matrix::from_rows(&[vec![1.0, 2.0]]);
        assert!(matches!(mlp.forward(&x).unwrap_err(), NnError::InputWidth { .. }));
    }

    #[test]
    fn forward_is_pure() {
        let mlp: Mlp<f64> =
            Mlp::new(&[3, 4, 2], &[Activation::Sigmoid, Activation::Identity], 5).unwrap();
        let x = Matrix::from_rows(&[vec![0.3, -0.7, 1.2]]);
        let (a, _) = mlp.forward(&x).unwrap();
        let (b, _) = mlp.forward(&x).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_output_grad_gives_zero_gradients() {
        let mlp: Mlp<f64> =
            Mlp::new(&[3, 4, 2], &[Activation::Sigmoid, Activation::Identity], 5).unwrap();
        let x = Matrix::from_rows(&[vec![0.3, -0.7, 1.2], vec![1.0, 0.0, -0.2]]);
        let (_, cache) = mlp.forward(&x).unwrap();
        let (grads, input_grad) = mlp.backprop(&cache, &Matrix::zeros(2, 2)).unwrap();
        assert_eq!(grads, Gradients::zeros_like(&mlp));
        assert_eq!(input_grad, Matrix::zeros(2, 3));
    }

    #[test]
    fn one_layer_identity_gradients_are_the_input_pattern() {
        // L = y (single output, batch of one): dL/dW = x, dL/db = 1.
        let mlp = Mlp::from_layers(vec![Layer {
            weights: Matrix::from_rows(&[vec![0.5, -0.25]]),
            bias: vec![0.1],
            activation: Activation::Identity,
        }]);
        let x = Matrix::from_rows(&[vec![3.0, -2.0]]);
        let (_, cache) = mlp.forward(&x).unwrap();
        let (grads, _) = mlp.backprop(&cache, &Matrix::from_rows(&[vec![1.0]])).unwrap();
        assert_eq!(grads.layers[0].weights, Matrix::from_rows(&[vec![3.0, -2.0]]));
        assert_eq!(grads.layers[0].bias, vec![1.0]);
    }

    #[test]
    fn backprop_validates_shapes() {
        let mlp = identity_net(2);
        let x = Matrix::from_rows(&[vec![1.0, 2.0]]);
        let (_, cache) = mlp.forward(&x).unwrap();
        assert!(matches!(
            mlp.backprop(&cache, &Matrix::zeros(1, 3)).unwrap_err(),
            NnError::OutputGradShape { .. }
        ));
        let other = identity_net(3);
        assert!(matches!(
            other.backprop(&cache, &Matrix::zeros(1, 2)).unwrap_err(),
            NnError::CacheMismatch
        ));
    }
}
