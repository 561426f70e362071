//! Multilayer perceptrons with a shared activation between affine layers.
//!
//! A network with layers `(W_1, b_1) .. (W_L, b_L)` computes
//!
//! ```text
//! F(x) = W_L a(... a(W_2 a(W_1 x + b_1) + b_2) ...) + b_L
//! ```
//!
//! so the activation follows every layer except the last. Batches are matrices
//! with one sample per column.

mod serialize;

pub use serialize::{read_model, write_model};

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::linalg::{matmul, solve_linear, transpose, Matrix};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// `out_dim x in_dim`
    pub weights: Matrix,
    /// `out_dim x 1`
    pub bias: Matrix,
}

impl Layer {
    pub fn new(weights: Matrix, bias: Matrix) -> Result<Self> {
        if bias.cols() != 1 || bias.rows() != weights.rows() {
            return Err(Error::shape("layer bias", weights.shape(), bias.shape()));
        }
        Ok(Self { weights, bias })
    }

    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layers: Vec<Layer>,
    activation: Activation,
}

/// Intermediate values of one forward pass, consumed by [`Mlp::backward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    input: Matrix,
    /// Pre-activations `z_i = W_i a_{i-1} + b_i`, one per layer.
    pre: Vec<Matrix>,
    /// Post-activations `a_i` for every hidden layer (the last layer has none).
    post: Vec<Matrix>,
}

impl ForwardCache {
    pub fn input(&self) -> &Matrix {
        &self.input
    }

    pub fn pre_activations(&self) -> &[Matrix] {
        &self.pre
    }

    pub fn depth(&self) -> usize {
        self.pre.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad {
    pub weights: Matrix,
    pub bias: Matrix,
}

/// Parameter gradients, laid out like [`Mlp::layers`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGrad>,
}

impl Gradients {
    /// Flat view in the same order as [`Mlp::parameters_mut`].
    pub fn tensors(&self) -> Vec<&Matrix> {
        self.layers
            .iter()
            .flat_map(|g| [&g.weights, &g.bias])
            .collect()
    }
}

impl Mlp {
    /// Builds a network from explicit layers, checking that adjacent layers chain.
    pub fn new(layers: Vec<Layer>, activation: Activation) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::config("a network needs at least one layer"));
        }
        for pair in layers.windows(2) {
            if pair[0].out_dim() != pair[1].in_dim() {
                return Err(Error::shape(
                    "layer chain",
                    pair[0].weights.shape(),
                    pair[1].weights.shape(),
                ));
            }
        }
        for l in &layers {
            if l.bias.cols() != 1 || l.bias.rows() != l.out_dim() {
                return Err(Error::shape(
                    "layer bias",
                    l.weights.shape(),
                    l.bias.shape(),
                ));
            }
        }
        Ok(Self { layers, activation })
    }

    /// Random network: weights i.i.d. standard normal drawn row-major layer by
    /// layer from `rng`, biases zero.
    pub fn init(layer_dims: &[usize], activation: Activation, rng: &mut Rng) -> Result<Self> {
        if layer_dims.len() < 2 {
            return Err(Error::config(format!(
                "layer_dims needs at least an input and an output size, got {layer_dims:?}"
            )));
        }
        if layer_dims.contains(&0) {
            return Err(Error::config(format!(
                "layer sizes must be positive, got {layer_dims:?}"
            )));
        }
        let layers = layer_dims
            .windows(2)
            .map(|d| Layer {
                weights: Matrix::from_fn(d[1], d[0], |_, _| rng.standard_normal()),
                bias: Matrix::zeros(d[1], 1),
            })
            .collect();
        Self::new(layers, activation)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn in_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim()
    }

    /// `[in_dim, hidden.., out_dim]`
    pub fn layer_dims(&self) -> Vec<usize> {
        std::iter::once(self.in_dim())
            .chain(self.layers.iter().map(Layer::out_dim))
            .collect()
    }

    pub fn param_shapes(&self) -> Vec<(usize, usize)> {
        self.layers
            .iter()
            .flat_map(|l| [l.weights.shape(), l.bias.shape()])
            .collect()
    }

    /// Mutable parameters as `[W_1, b_1, W_2, b_2, ..]`.
    pub fn parameters_mut(&mut self) -> Vec<&mut Matrix> {
        self.layers
            .iter_mut()
            .flat_map(|l| [&mut l.weights, &mut l.bias])
            .collect()
    }

    /// Runs the network on a batch `x` (`in_dim x batch`).
    pub fn forward(&self, x: &Matrix) -> Result<(Matrix, ForwardCache)> {
        if x.rows() != self.in_dim() {
            return Err(Error::shape(
                "forward",
                self.layers[0].weights.shape(),
                x.shape(),
            ));
        }
        let last = self.layers.len() - 1;
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut post = Vec::with_capacity(last);
        for (i, layer) in self.layers.iter().enumerate() {
            let input = if i == 0 { x } else { &post[i - 1] };
            let z = matmul(&layer.weights, input)?.add_column(&layer.bias)?;
            if i < last {
                post.push(z.map(|v| self.activation.forward(v)));
            }
            pre.push(z);
        }
        let y = pre[last].clone();
        Ok((
            y,
            ForwardCache {
                input: x.clone(),
                pre,
                post,
            },
        ))
    }

    /// Output only.
    pub fn predict(&self, x: &Matrix) -> Result<Matrix> {
        self.forward(x).map(|(y, _)| y)
    }

    /// Reverse-mode gradients of a scalar loss given `d_out = dL/dy`.
    pub fn backward(&self, cache: &ForwardCache, d_out: &Matrix) -> Result<Gradients> {
        let depth = self.layers.len();
        if cache.depth() != depth {
            return Err(Error::config(format!(
                "cache has {} layers, network has {depth}",
                cache.depth()
            )));
        }
        let out_shape = cache.pre[depth - 1].shape();
        if d_out.shape() != out_shape {
            return Err(Error::shape("backward", out_shape, d_out.shape()));
        }

        let mut grads = Vec::with_capacity(depth);
        let mut delta = d_out.clone();
        for i in (0..depth).rev() {
            let input = if i == 0 {
                &cache.input
            } else {
                &cache.post[i - 1]
            };
            grads.push(LayerGrad {
                weights: matmul(&delta, &transpose(input))?,
                bias: delta.row_sums(),
            });
            if i > 0 {
                let back = matmul(&transpose(&self.layers[i].weights), &delta)?;
                delta = back.zip_map(&cache.pre[i - 1], "backward", |g, z| {
                    g * self.activation.derivative(z)
                })?;
            }
        }
        grads.reverse();
        Ok(Gradients { layers: grads })
    }

    /// Recovers inputs `x` from outputs `y = F(x)` for a square network.
    ///
    /// Walks the layers backwards: undo the bias, solve against the weights, and
    /// (for every layer but the last, which has no activation) apply the
    /// activation inverse to reach the previous layer's output.
    pub fn invert(&self, y: &Matrix) -> Result<Matrix> {
        let n = self.in_dim();
        for l in &self.layers {
            if l.weights.rows() != n || l.weights.cols() != n {
                return Err(Error::shape("invert", (n, n), l.weights.shape()));
            }
        }
        if y.rows() != n {
            return Err(Error::shape("invert", (n, n), y.shape()));
        }
        if !self.activation.is_invertible() && self.layers.len() > 1 {
            return Err(Error::NotInvertible(self.activation.kind()));
        }

        let mut current = y.clone();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let shifted =
                current.zip_map(&broadcast(&layer.bias, current.cols()), "invert", |v, b| {
                    v - b
                })?;
            current = solve_linear(&layer.weights, &shifted)?;
            if i > 0 {
                let mut out = current.clone();
                for v in out.as_mut_slice() {
                    *v = self.activation.inverse(*v)?;
                }
                current = out;
            }
        }
        Ok(current)
    }
}

fn broadcast(col: &Matrix, cols: usize) -> Matrix {
    Matrix::from_fn(col.rows(), cols, |i, _| col[(i, 0)])
}

/// Mean squared error over every entry and its gradient `2 (pred - target) / N`.
pub fn mse_loss(pred: &Matrix, target: &Matrix) -> Result<(f64, Matrix)> {
    let diff = pred.zip_map(target, "mse_loss", |p, t| p - t)?;
    let n = diff.as_slice().len() as f64;
    let loss = diff.as_slice().iter().map(|d| d * d).sum::<f64>() / n;
    Ok((loss, diff.map(|d| 2.0 * d / n)))
}
