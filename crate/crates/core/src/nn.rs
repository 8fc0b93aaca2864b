//! Minimal dense feed-forward stack: layers, activations, losses,
//! reverse-mode gradients, and Adam.
//!
//! Everything is plain `f64` with explicit loops so training trajectories are
//! bitwise reproducible for a fixed seed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::Matrix;

pub mod checkpoint;

/// Probabilities fed to the cross entropy are clamped to [ε, 1−ε].
pub const BCE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Sigmoid,
    Tanh,
    Identity,
}

impl Activation {
    #[inline]
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Activation::Tanh => x.tanh(),
            Activation::Identity => x,
        }
    }

    /// Derivative at a point, given both the preactivation and the output.
    #[inline]
    fn derivative(self, pre: f64, out: f64) -> f64 {
        match self {
            Activation::Relu => {
                if pre > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => out * (1.0 - out),
            Activation::Tanh => 1.0 - out * out,
            Activation::Identity => 1.0,
        }
    }
}

/// One fully-connected layer: `act(W x + b)` with W of shape out×in.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    weights: Matrix,
    biases: Vec<f64>,
    activation: Activation,
}

impl DenseLayer {
    /// Glorot-uniform initialization in ±sqrt(6/(fan_in+fan_out)).
    pub fn new(input_dim: usize, output_dim: usize, activation: Activation, rng: &mut impl Rng) -> Self {
        let bound = (6.0 / (input_dim + output_dim) as f64).sqrt();
        let mut weights = Matrix::zeros(output_dim, input_dim);
        for w in weights.data_mut() {
            *w = rng.gen_range(-bound..bound);
        }
        Self {
            weights,
            biases: vec![0.0; output_dim],
            activation,
        }
    }

    pub fn from_parts(weights: Matrix, biases: Vec<f64>, activation: Activation) -> Result<Self> {
        if weights.rows() != biases.len() {
            return Err(Error::Shape(format!(
                "bias length {} does not match weight rows {}",
                biases.len(),
                weights.rows()
            )));
        }
        if !weights.data().iter().chain(&biases).all(|v| v.is_finite()) {
            return Err(Error::Numeric("layer parameters must be finite".to_string()));
        }
        Ok(Self {
            weights,
            biases,
            activation,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    /// Returns (output, preactivation), each M×out.
    fn forward(&self, x: &Matrix) -> (Matrix, Matrix) {
        let m = x.rows();
        let out_dim = self.output_dim();
        let mut pre = Matrix::zeros(m, out_dim);
        let mut out = Matrix::zeros(m, out_dim);
        for r in 0..m {
            let row = x.row(r);
            for o in 0..out_dim {
                let w = self.weights.row(o);
                let mut acc = self.biases[o];
                for (wi, xi) in w.iter().zip(row) {
                    acc += wi * xi;
                }
                pre.set(r, o, acc);
                out.set(r, o, self.activation.apply(acc));
            }
        }
        (out, pre)
    }
}

/// Gradient of one layer's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrads {
    pub d_weights: Matrix,
    pub d_biases: Vec<f64>,
}

/// Cached activations from a forward pass, consumed by [`Network::backward`].
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    /// activations[0] is the input batch; activations[i+1] the output of layer i.
    activations: Vec<Matrix>,
    preactivations: Vec<Matrix>,
}

/// Sequence of dense layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    layers: Vec<DenseLayer>,
}

impl Network {
    /// Builds a stack from layer sizes [in, h1, …, out] and one activation per layer.
    pub fn new(sizes: &[usize], activations: &[Activation], rng: &mut impl Rng) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::Shape(
                "a network needs at least an input and an output size".to_string(),
            ));
        }
        if activations.len() != sizes.len() - 1 {
            return Err(Error::Shape(format!(
                "expected {} activations for {} sizes, got {}",
                sizes.len() - 1,
                sizes.len(),
                activations.len()
            )));
        }
        if sizes.contains(&0) {
            return Err(Error::Shape("layer sizes must be positive".to_string()));
        }
        let layers = sizes
            .windows(2)
            .zip(activations)
            .map(|(w, &act)| DenseLayer::new(w[0], w[1], act, rng))
            .collect();
        Ok(Self { layers })
    }

    pub fn from_layers(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Shape("a network needs at least one layer".to_string()));
        }
        for pair in layers.windows(2) {
            if pair[0].output_dim() != pair[1].input_dim() {
                return Err(Error::Shape(format!(
                    "layer output {} does not feed layer input {}",
                    pair[0].output_dim(),
                    pair[1].input_dim()
                )));
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().output_dim()
    }

    /// Layer sizes [in, h1, …, out].
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.input_dim()];
        sizes.extend(self.layers.iter().map(DenseLayer::output_dim));
        sizes
    }

    pub fn activations(&self) -> Vec<Activation> {
        self.layers.iter().map(DenseLayer::activation).collect()
    }

    pub fn forward(&self, x: &Matrix) -> Result<Matrix> {
        self.check_input(x)?;
        let mut current = x.clone();
        for layer in &self.layers {
            current = layer.forward(&current).0;
        }
        Ok(current)
    }

    pub fn forward_cached(&self, x: &Matrix) -> Result<(Matrix, ForwardTrace)> {
        self.check_input(x)?;
        let mut activations = vec![x.clone()];
        let mut preactivations = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let (out, pre) = layer.forward(activations.last().unwrap());
            preactivations.push(pre);
            activations.push(out);
        }
        let output = activations.last().unwrap().clone();
        Ok((output, ForwardTrace { activations, preactivations }))
    }

    /// Reverse-mode sweep. `upstream` is dL/d(output), M×out; returns the
    /// input gradient (so an external loss can keep flowing into whatever fed
    /// this network) and per-layer parameter gradients.
    pub fn backward(
        &self,
        trace: &ForwardTrace,
        upstream: &Matrix,
    ) -> Result<(Matrix, Vec<LayerGrads>)> {
        let last_out = trace.activations.last().unwrap();
        if !upstream.same_shape(last_out) {
            return Err(Error::Shape(format!(
                "upstream gradient is {}x{}, output was {}x{}",
                upstream.rows(),
                upstream.cols(),
                last_out.rows(),
                last_out.cols()
            )));
        }
        let mut grads: Vec<LayerGrads> = Vec::with_capacity(self.layers.len());
        let mut delta = upstream.clone();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let pre = &trace.preactivations[i];
            let out = &trace.activations[i + 1];
            let input = &trace.activations[i];
            let m = delta.rows();
            let out_dim = layer.output_dim();
            let in_dim = layer.input_dim();

            // dL/d(pre) = upstream ⊙ act'(pre)
            let mut dpre = Matrix::zeros(m, out_dim);
            for r in 0..m {
                for o in 0..out_dim {
                    let d = delta.get(r, o) * layer.activation.derivative(pre.get(r, o), out.get(r, o));
                    dpre.set(r, o, d);
                }
            }

            let mut d_weights = Matrix::zeros(out_dim, in_dim);
            let mut d_biases = vec![0.0; out_dim];
            for r in 0..m {
                let x_row = input.row(r);
                for (o, bias) in d_biases.iter_mut().enumerate() {
                    let d = dpre.get(r, o);
                    *bias += d;
                    let w_row = d_weights.row_mut(o);
                    for (wi, xi) in w_row.iter_mut().zip(x_row) {
                        *wi += d * xi;
                    }
                }
            }

            let mut d_input = Matrix::zeros(m, in_dim);
            for r in 0..m {
                for o in 0..out_dim {
                    let d = dpre.get(r, o);
                    let w_row = layer.weights.row(o);
                    let out_row = d_input.row_mut(r);
                    for (oi, wi) in out_row.iter_mut().zip(w_row) {
                        *oi += d * wi;
                    }
                }
            }

            grads.push(LayerGrads { d_weights, d_biases });
            delta = d_input;
        }
        grads.reverse();
        Ok((delta, grads))
    }

    /// One-shot forward + backward: (output, input gradient, parameter gradients).
    pub fn forward_backward(
        &self,
        x: &Matrix,
        upstream: &Matrix,
    ) -> Result<(Matrix, Matrix, Vec<LayerGrads>)> {
        let (output, trace) = self.forward_cached(x)?;
        let (input_grad, grads) = self.backward(&trace, upstream)?;
        Ok((output, input_grad, grads))
    }

    pub fn param_len(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.data().len() + l.biases.len())
            .sum()
    }

    /// All parameters concatenated layer by layer, weights then biases.
    pub fn flatten_params(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.param_len());
        for layer in &self.layers {
            flat.extend_from_slice(layer.weights.data());
            flat.extend_from_slice(&layer.biases);
        }
        flat
    }

    pub fn set_params_from_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.param_len() {
            return Err(Error::Shape(format!(
                "flat parameter length {} does not match network size {}",
                flat.len(),
                self.param_len()
            )));
        }
        let mut offset = 0;
        for layer in &mut self.layers {
            let w_len = layer.weights.data().len();
            layer
                .weights
                .data_mut()
                .copy_from_slice(&flat[offset..offset + w_len]);
            offset += w_len;
            let b_len = layer.biases.len();
            layer.biases.copy_from_slice(&flat[offset..offset + b_len]);
            offset += b_len;
        }
        Ok(())
    }

    /// Gradients flattened in the same order as [`Network::flatten_params`].
    pub fn flatten_grads(grads: &[LayerGrads]) -> Vec<f64> {
        let mut flat = Vec::new();
        for g in grads {
            flat.extend_from_slice(g.d_weights.data());
            flat.extend_from_slice(&g.d_biases);
        }
        flat
    }

    fn check_input(&self, x: &Matrix) -> Result<()> {
        if x.cols() != self.input_dim() {
            return Err(Error::Shape(format!(
                "input has {} features, network expects {}",
                x.cols(),
                self.input_dim()
            )));
        }
        Ok(())
    }
}

/// Mean squared reconstruction error: (1/M) Σ_m ‖x_m − x̂_m‖², summed over
/// feature components and averaged over the batch only.
pub fn mse_loss(x: &Matrix, x_hat: &Matrix) -> Result<f64> {
    if !x.same_shape(x_hat) {
        return Err(Error::Shape(format!(
            "mse shapes differ: {}x{} vs {}x{}",
            x.rows(),
            x.cols(),
            x_hat.rows(),
            x_hat.cols()
        )));
    }
    if x.rows() == 0 {
        return Err(Error::Shape("mse needs at least one sample".to_string()));
    }
    let sum: f64 = x
        .data()
        .iter()
        .zip(x_hat.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / x.rows() as f64)
}

/// d(mse)/d(x̂) = (2/M)(x̂ − x), shaped like the inputs.
pub fn mse_loss_gradient(x: &Matrix, x_hat: &Matrix) -> Result<Matrix> {
    if !x.same_shape(x_hat) {
        return Err(Error::Shape("mse gradient shapes differ".to_string()));
    }
    let m = x.rows() as f64;
    let data = x
        .data()
        .iter()
        .zip(x_hat.data())
        .map(|(a, b)| 2.0 * (b - a) / m)
        .collect();
    Matrix::from_vec(x.rows(), x.cols(), data)
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(BCE_EPS, 1.0 - BCE_EPS)
}

/// Binary cross entropy −(1/M) Σ [y log p + (1−y) log(1−p)] with p clamped
/// to [ε, 1−ε], ε = 1e-12.
pub fn bce_loss(y: &[u8], p: &[f64]) -> Result<f64> {
    if y.len() != p.len() {
        return Err(Error::Shape(format!(
            "label count {} does not match probability count {}",
            y.len(),
            p.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::Shape("bce needs at least one sample".to_string()));
    }
    let mut acc = 0.0;
    for (&yi, &pi) in y.iter().zip(p) {
        if yi > 1 {
            return Err(Error::Domain(format!("label {yi} outside {{0,1}}")));
        }
        let pc = clamp_probability(pi);
        acc += if yi == 1 { pc.ln() } else { (1.0 - pc).ln() };
    }
    Ok(-acc / y.len() as f64)
}

/// d(bce)/dp per sample; zero where the clamp is active.
pub fn bce_gradient(y: &[u8], p: &[f64]) -> Result<Vec<f64>> {
    if y.len() != p.len() {
        return Err(Error::Shape("bce gradient shapes differ".to_string()));
    }
    let m = y.len() as f64;
    y.iter()
        .zip(p)
        .map(|(&yi, &pi)| {
            if yi > 1 {
                return Err(Error::Domain(format!("label {yi} outside {{0,1}}")));
            }
            if !(BCE_EPS..=1.0 - BCE_EPS).contains(&pi) {
                return Ok(0.0);
            }
            Ok(-(yi as f64 / pi - (1.0 - yi as f64) / (1.0 - pi)) / m)
        })
        .collect()
}

/// Adam optimizer state for one flat parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    step_count: u64,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(param_len: usize, learning_rate: f64) -> Self {
        Self {
            first_moment: vec![0.0; param_len],
            second_moment: vec![0.0; param_len],
            step_count: 0,
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// One bias-corrected update in place.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<()> {
        if params.len() != self.first_moment.len() || grads.len() != params.len() {
            return Err(Error::Shape(format!(
                "adam state holds {} parameters, got {} params / {} grads",
                self.first_moment.len(),
                params.len(),
                grads.len()
            )));
        }
        if grads.iter().any(|g| !g.is_finite()) {
            return Err(Error::Numeric("non-finite gradient in adam step".to_string()));
        }
        self.step_count += 1;
        let t = self.step_count as i32;
        let bc1 = 1.0 - self.beta1.powi(t);
        let bc2 = 1.0 - self.beta2.powi(t);
        for i in 0..params.len() {
            let g = grads[i];
            self.first_moment[i] = self.beta1 * self.first_moment[i] + (1.0 - self.beta1) * g;
            self.second_moment[i] = self.beta2 * self.second_moment[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.first_moment[i] / bc1;
            let v_hat = self.second_moment[i] / bc2;
            params[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
        }
        Ok(())
    }
}
