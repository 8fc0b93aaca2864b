//! Model architectures: the autoencoder, the classical benchmark classifier,
//! and the coupled compression+classification model trained under the joint
//! loss (1−λ)·L_R + λ·L_C.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::mat::Matrix;
use crate::nn::checkpoint::Checkpoint;
use crate::nn::{
    bce_gradient, bce_loss, mse_loss, mse_loss_gradient, Activation, LayerGrads, Network,
};
use crate::qgrad::{adjoint_gradient, GradientTape};
use crate::vqc::{expectation_to_probability, forward as vqc_forward, ThetaStore, VqcConfig};

/// Encoder/decoder pair with a fixed latent width ℓ.
#[derive(Debug, Clone, PartialEq)]
pub struct AutoEncoder {
    pub encoder: Network,
    pub decoder: Network,
    latent_dim: usize,
}

impl AutoEncoder {
    pub fn new(encoder: Network, decoder: Network) -> Result<Self> {
        if encoder.output_dim() != decoder.input_dim() {
            return Err(Error::Shape(format!(
                "encoder output {} does not match decoder input {}",
                encoder.output_dim(),
                decoder.input_dim()
            )));
        }
        if decoder.output_dim() != encoder.input_dim() {
            return Err(Error::Shape(format!(
                "decoder output {} does not match encoder input {}",
                decoder.output_dim(),
                encoder.input_dim()
            )));
        }
        let latent_dim = encoder.output_dim();
        Ok(Self {
            encoder,
            decoder,
            latent_dim,
        })
    }

    /// Single-layer [D→ℓ] / [ℓ→D] pair, sigmoid on both ends so latent values
    /// and reconstructions live in [0,1] like the normalized inputs.
    pub fn shallow(input_dim: usize, latent_dim: usize, rng: &mut impl Rng) -> Result<Self> {
        let encoder = Network::new(&[input_dim, latent_dim], &[Activation::Sigmoid], rng)?;
        let decoder = Network::new(&[latent_dim, input_dim], &[Activation::Sigmoid], rng)?;
        Self::new(encoder, decoder)
    }

    /// Six-layer encoder with a mirrored decoder. For 67→16 the widths are
    /// [67, 64, 44, 32, 24, 16]; other shapes interpolate geometrically over
    /// the same number of layers. ReLU everywhere except the latent and
    /// output layers, which are sigmoid.
    pub fn six_layer(input_dim: usize, latent_dim: usize, rng: &mut impl Rng) -> Result<Self> {
        let sizes = six_layer_widths(input_dim, latent_dim)?;
        let mut enc_acts = vec![Activation::Relu; sizes.len() - 1];
        *enc_acts.last_mut().unwrap() = Activation::Sigmoid;
        let encoder = Network::new(&sizes, &enc_acts, rng)?;

        let mut dec_sizes = sizes.clone();
        dec_sizes.reverse();
        let mut dec_acts = vec![Activation::Relu; dec_sizes.len() - 1];
        *dec_acts.last_mut().unwrap() = Activation::Sigmoid;
        let decoder = Network::new(&dec_sizes, &dec_acts, rng)?;
        Self::new(encoder, decoder)
    }

    pub fn latent_dim(&self) -> usize {
        self.latent_dim
    }

    pub fn input_dim(&self) -> usize {
        self.encoder.input_dim()
    }

    /// (z, x̂) for a batch.
    pub fn forward(&self, x: &Matrix) -> Result<(Matrix, Matrix)> {
        let z = self.encoder.forward(x)?;
        let x_hat = self.decoder.forward(&z)?;
        Ok((z, x_hat))
    }
}

fn six_layer_widths(input_dim: usize, latent_dim: usize) -> Result<Vec<usize>> {
    if latent_dim == 0 || input_dim <= latent_dim {
        return Err(Error::Shape(format!(
            "six-layer stack needs input > latent > 0, got {input_dim} -> {latent_dim}"
        )));
    }
    if input_dim == 67 && latent_dim == 16 {
        return Ok(vec![67, 64, 44, 32, 24, 16]);
    }
    let n_points = 6;
    let ratio = latent_dim as f64 / input_dim as f64;
    let widths = (0..n_points)
        .map(|i| {
            let t = i as f64 / (n_points - 1) as f64;
            ((input_dim as f64 * ratio.powf(t)).round() as usize).max(latent_dim)
        })
        .collect();
    Ok(widths)
}

/// (z, x̂) for a batch; thin wrapper kept as the module-level entry point.
pub fn ae_forward(model: &AutoEncoder, x: &Matrix) -> Result<(Matrix, Matrix)> {
    model.forward(x)
}

/// Reconstruction-only backward pass: MSE loss and gradients for both halves.
pub fn ae_backward(
    model: &AutoEncoder,
    x: &Matrix,
) -> Result<(f64, Vec<LayerGrads>, Vec<LayerGrads>)> {
    let (z, enc_trace) = model.encoder.forward_cached(x)?;
    let (x_hat, dec_trace) = model.decoder.forward_cached(&z)?;
    let loss = mse_loss(x, &x_hat)?;
    let d_xhat = mse_loss_gradient(x, &x_hat)?;
    let (d_z, dec_grads) = model.decoder.backward(&dec_trace, &d_xhat)?;
    let (_, enc_grads) = model.encoder.backward(&enc_trace, &d_z)?;
    Ok((loss, enc_grads, dec_grads))
}

/// Coupled model: autoencoder + classifier circuit + coupling λ ∈ (0,1).
#[derive(Debug, Clone, PartialEq)]
pub struct GqcModel {
    pub autoencoder: AutoEncoder,
    pub vqc_config: VqcConfig,
    pub theta: ThetaStore,
    pub lambda: f64,
}

impl GqcModel {
    pub fn new(
        autoencoder: AutoEncoder,
        vqc_config: VqcConfig,
        theta: ThetaStore,
        lambda: f64,
    ) -> Result<Self> {
        if autoencoder.latent_dim() != vqc_config.latent_dim() {
            return Err(Error::Shape(format!(
                "latent width {} does not match circuit input n·d = {}",
                autoencoder.latent_dim(),
                vqc_config.latent_dim()
            )));
        }
        if theta.len() != vqc_config.param_count() {
            return Err(Error::Shape(format!(
                "theta length {} does not match d·2·n·r = {}",
                theta.len(),
                vqc_config.param_count()
            )));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Config(format!(
                "lambda must lie strictly in (0,1), got {lambda}"
            )));
        }
        Ok(Self {
            autoencoder,
            vqc_config,
            theta,
            lambda,
        })
    }
}

/// The two loss terms and their convex combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GqcLossParts {
    pub total: f64,
    pub recon: f64,
    pub class: f64,
}

/// Gradients for the three parameter groups of the coupled model.
#[derive(Debug, Clone)]
pub struct GqcGradients {
    pub encoder: Vec<LayerGrads>,
    pub decoder: Vec<LayerGrads>,
    pub theta: Vec<f64>,
}

/// Classifier expectations for each row of a latent batch.
pub fn vqc_expectations(cfg: &VqcConfig, theta: &ThetaStore, z: &Matrix) -> Result<Vec<f64>> {
    if z.cols() != cfg.latent_dim() {
        return Err(Error::Shape(format!(
            "latent batch has {} columns, circuit expects {}",
            z.cols(),
            cfg.latent_dim()
        )));
    }
    (0..z.rows())
        .into_par_iter()
        .map(|r| vqc_forward(z.row(r), theta, cfg))
        .collect()
}

/// Classifier probabilities (⟨Z0⟩+1)/2 for each row of a latent batch.
pub fn vqc_probabilities(cfg: &VqcConfig, theta: &ThetaStore, z: &Matrix) -> Result<Vec<f64>> {
    Ok(vqc_expectations(cfg, theta, z)?
        .into_iter()
        .map(expectation_to_probability)
        .collect())
}

fn vqc_adjoint_batch(
    cfg: &VqcConfig,
    theta: &ThetaStore,
    z: &Matrix,
) -> Result<Vec<(f64, GradientTape)>> {
    (0..z.rows())
        .into_par_iter()
        .map(|r| adjoint_gradient(z.row(r), theta, cfg))
        .collect()
}

/// Joint loss (1−λ)·L_R + λ·L_C on a batch.
pub fn gqc_loss(model: &GqcModel, x: &Matrix, y: &[u8]) -> Result<GqcLossParts> {
    if y.len() != x.rows() {
        return Err(Error::Shape(format!(
            "label count {} does not match batch rows {}",
            y.len(),
            x.rows()
        )));
    }
    let (z, x_hat) = model.autoencoder.forward(x)?;
    let recon = mse_loss(x, &x_hat)?;
    let p = vqc_probabilities(&model.vqc_config, &model.theta, &z)?;
    let class = bce_loss(y, &p)?;
    Ok(combine(model.lambda, recon, class))
}

fn combine(lambda: f64, recon: f64, class: f64) -> GqcLossParts {
    GqcLossParts {
        total: (1.0 - lambda) * recon + lambda * class,
        recon,
        class,
    }
}

/// Full backward pass of the joint loss.
///
/// The decoder carries only the reconstruction term; the encoder input
/// gradient mixes (1−λ)·∂L_R/∂z with λ·∂L_C/∂z (the circuit tape chain-ruled
/// through the cross entropy); ϑ carries λ·∂L_C/∂ϑ.
pub fn gqc_backward(model: &GqcModel, x: &Matrix, y: &[u8]) -> Result<(GqcLossParts, GqcGradients)> {
    if y.len() != x.rows() {
        return Err(Error::Shape(format!(
            "label count {} does not match batch rows {}",
            y.len(),
            x.rows()
        )));
    }
    let lambda = model.lambda;
    let m = x.rows();
    let ell = model.autoencoder.latent_dim();

    let (z, enc_trace) = model.autoencoder.encoder.forward_cached(x)?;
    let (x_hat, dec_trace) = model.autoencoder.decoder.forward_cached(&z)?;

    // Reconstruction path.
    let recon = mse_loss(x, &x_hat)?;
    let d_xhat = mse_loss_gradient(x, &x_hat)?;
    let (dz_recon, mut dec_grads) = model.autoencoder.decoder.backward(&dec_trace, &d_xhat)?;
    for g in &mut dec_grads {
        for v in g.d_weights.data_mut() {
            *v *= 1.0 - lambda;
        }
        for v in &mut g.d_biases {
            *v *= 1.0 - lambda;
        }
    }

    // Classification path through the circuit.
    let evals = vqc_adjoint_batch(&model.vqc_config, &model.theta, &z)?;
    let p: Vec<f64> = evals
        .iter()
        .map(|(e, _)| expectation_to_probability(*e))
        .collect();
    let class = bce_loss(y, &p)?;
    let dl_dp = bce_gradient(y, &p)?;

    let mut d_theta = vec![0.0; model.theta.len()];
    let mut dz_class = Matrix::zeros(m, ell);
    for (row, ((_, tape), &dp)) in evals.iter().zip(&dl_dp).enumerate() {
        // dp/d⟨Z0⟩ = 1/2 from the affine probability map.
        let w = dp * 0.5;
        for (acc, g) in d_theta.iter_mut().zip(&tape.d_theta) {
            *acc += w * g;
        }
        for (j, g) in tape.d_z.iter().enumerate() {
            dz_class.set(row, j, w * g);
        }
    }
    for v in &mut d_theta {
        *v *= lambda;
    }

    // Encoder sees both terms through its output.
    let mut dz_total = dz_recon;
    for (t, c) in dz_total.data_mut().iter_mut().zip(dz_class.data()) {
        *t = (1.0 - lambda) * *t + lambda * c;
    }
    let (_, enc_grads) = model.autoencoder.encoder.backward(&enc_trace, &dz_total)?;

    Ok((
        combine(lambda, recon, class),
        GqcGradients {
            encoder: enc_grads,
            decoder: dec_grads,
            theta: d_theta,
        },
    ))
}

/// Benchmark network: hidden ReLU stack ending in one sigmoid output node.
pub fn classical_network(input_dim: usize, hidden: usize, rng: &mut impl Rng) -> Result<Network> {
    Network::new(
        &[input_dim, hidden, 1],
        &[Activation::Relu, Activation::Sigmoid],
        rng,
    )
}

/// Probability batch from the benchmark classifier.
pub fn classical_forward(net: &Network, x: &Matrix) -> Result<Vec<f64>> {
    if net.output_dim() != 1 {
        return Err(Error::Shape(format!(
            "classifier must end in one output node, has {}",
            net.output_dim()
        )));
    }
    let out = net.forward(x)?;
    Ok(out.data().to_vec())
}

// ---------------------------------------------------------------------------
// Checkpoint serialization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Classical,
    TwoStep,
    Gqc,
}

/// Architecture of one serialized network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub sizes: Vec<usize>,
    pub activations: Vec<Activation>,
}

impl NetworkSpec {
    fn of(net: &Network) -> Self {
        Self {
            sizes: net.sizes(),
            activations: net.activations(),
        }
    }
}

/// Checkpoint header contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub format_version: u32,
    pub kind: ModelKind,
    pub feature_count: usize,
    pub btag_included: bool,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latent_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vqc: Option<VqcConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoder: Option<NetworkSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoder: Option<NetworkSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classifier: Option<NetworkSpec>,
}

/// A trained model of any paradigm, ready for scoring.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Classical(Network),
    TwoStep {
        autoencoder: AutoEncoder,
        vqc: VqcConfig,
        theta: ThetaStore,
    },
    Gqc(GqcModel),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Classical(_) => ModelKind::Classical,
            TrainedModel::TwoStep { .. } => ModelKind::TwoStep,
            TrainedModel::Gqc(_) => ModelKind::Gqc,
        }
    }

    pub fn feature_count(&self) -> usize {
        match self {
            TrainedModel::Classical(net) => net.input_dim(),
            TrainedModel::TwoStep { autoencoder, .. } => autoencoder.input_dim(),
            TrainedModel::Gqc(model) => model.autoencoder.input_dim(),
        }
    }

    /// Signal probability per sample, in [0,1] for every paradigm.
    pub fn score(&self, x: &Matrix) -> Result<Vec<f64>> {
        match self {
            TrainedModel::Classical(net) => classical_forward(net, x),
            TrainedModel::TwoStep {
                autoencoder,
                vqc,
                theta,
            } => {
                let z = autoencoder.encoder.forward(x)?;
                vqc_probabilities(vqc, theta, &z)
            }
            TrainedModel::Gqc(model) => {
                let z = model.autoencoder.encoder.forward(x)?;
                vqc_probabilities(&model.vqc_config, &model.theta, &z)
            }
        }
    }

    /// Latent batch z = E(x); undefined for the classical paradigm.
    pub fn latents(&self, x: &Matrix) -> Result<Matrix> {
        match self {
            TrainedModel::Classical(_) => Err(Error::Domain(
                "the classical paradigm has no latent space".to_string(),
            )),
            TrainedModel::TwoStep { autoencoder, .. } => autoencoder.encoder.forward(x),
            TrainedModel::Gqc(model) => model.autoencoder.encoder.forward(x),
        }
    }
}

fn push_network(ck: &mut Checkpoint, prefix: &str, net: &Network) {
    for (i, layer) in net.layers().iter().enumerate() {
        ck.push(
            format!("{prefix}.layer{i}.weights"),
            layer.weights().data().to_vec(),
        );
        ck.push(format!("{prefix}.layer{i}.biases"), layer.biases().to_vec());
    }
}

fn network_from(ck: &Checkpoint, prefix: &str, spec: &NetworkSpec) -> Result<Network> {
    if spec.activations.len() + 1 != spec.sizes.len() {
        return Err(Error::Parse(format!(
            "inconsistent architecture for {prefix:?} in checkpoint metadata"
        )));
    }
    let mut layers = Vec::with_capacity(spec.activations.len());
    for (i, (&act, w)) in spec.activations.iter().zip(spec.sizes.windows(2)).enumerate() {
        let (in_dim, out_dim) = (w[0], w[1]);
        let weights = ck
            .get(&format!("{prefix}.layer{i}.weights"))
            .ok_or_else(|| Error::Parse(format!("missing array {prefix}.layer{i}.weights")))?;
        let biases = ck
            .get(&format!("{prefix}.layer{i}.biases"))
            .ok_or_else(|| Error::Parse(format!("missing array {prefix}.layer{i}.biases")))?;
        let weights = Matrix::from_vec(out_dim, in_dim, weights.to_vec())?;
        layers.push(crate::nn::DenseLayer::from_parts(
            weights,
            biases.to_vec(),
            act,
        )?);
    }
    Network::from_layers(layers)
}

/// Writes a model checkpoint: JSON metadata header plus named float64 arrays.
pub fn save_model(
    path: &Path,
    model: &TrainedModel,
    btag_included: bool,
    seed: u64,
) -> Result<()> {
    let mut meta = ModelMeta {
        format_version: 1,
        kind: model.kind(),
        feature_count: model.feature_count(),
        btag_included,
        seed,
        latent_dim: None,
        vqc: None,
        lambda: None,
        encoder: None,
        decoder: None,
        classifier: None,
    };
    let mut ck = Checkpoint::default();
    match model {
        TrainedModel::Classical(net) => {
            meta.classifier = Some(NetworkSpec::of(net));
            push_network(&mut ck, "classifier", net);
        }
        TrainedModel::TwoStep {
            autoencoder,
            vqc,
            theta,
        } => {
            meta.latent_dim = Some(autoencoder.latent_dim());
            meta.vqc = Some(*vqc);
            meta.encoder = Some(NetworkSpec::of(&autoencoder.encoder));
            meta.decoder = Some(NetworkSpec::of(&autoencoder.decoder));
            push_network(&mut ck, "encoder", &autoencoder.encoder);
            push_network(&mut ck, "decoder", &autoencoder.decoder);
            ck.push("vqc.theta", theta.as_flat().to_vec());
        }
        TrainedModel::Gqc(model) => {
            meta.latent_dim = Some(model.autoencoder.latent_dim());
            meta.vqc = Some(model.vqc_config);
            meta.lambda = Some(model.lambda);
            meta.encoder = Some(NetworkSpec::of(&model.autoencoder.encoder));
            meta.decoder = Some(NetworkSpec::of(&model.autoencoder.decoder));
            push_network(&mut ck, "encoder", &model.autoencoder.encoder);
            push_network(&mut ck, "decoder", &model.autoencoder.decoder);
            ck.push("vqc.theta", model.theta.as_flat().to_vec());
        }
    }
    ck.meta = serde_json::to_string(&meta)
        .map_err(|e| Error::Parse(format!("metadata serialization failed: {e}")))?;
    ck.write_to(path)
}

/// Reads a model checkpoint written by [`save_model`].
pub fn load_model(path: &Path) -> Result<(ModelMeta, TrainedModel)> {
    let ck = Checkpoint::read_from(path)?;
    let meta: ModelMeta = serde_json::from_str(&ck.meta)
        .map_err(|e| Error::Parse(format!("bad checkpoint metadata: {e}")))?;
    if meta.format_version != 1 {
        return Err(Error::Parse(format!(
            "unsupported checkpoint format version {}",
            meta.format_version
        )));
    }
    let model = match meta.kind {
        ModelKind::Classical => {
            let spec = meta
                .classifier
                .as_ref()
                .ok_or_else(|| Error::Parse("classical checkpoint lacks classifier spec".into()))?;
            TrainedModel::Classical(network_from(&ck, "classifier", spec)?)
        }
        ModelKind::TwoStep | ModelKind::Gqc => {
            let enc_spec = meta
                .encoder
                .as_ref()
                .ok_or_else(|| Error::Parse("checkpoint lacks encoder spec".into()))?;
            let dec_spec = meta
                .decoder
                .as_ref()
                .ok_or_else(|| Error::Parse("checkpoint lacks decoder spec".into()))?;
            let vqc = meta
                .vqc
                .ok_or_else(|| Error::Parse("checkpoint lacks circuit config".into()))?;
            let encoder = network_from(&ck, "encoder", enc_spec)?;
            let decoder = network_from(&ck, "decoder", dec_spec)?;
            let autoencoder = AutoEncoder::new(encoder, decoder)?;
            let theta_flat = ck
                .get("vqc.theta")
                .ok_or_else(|| Error::Parse("checkpoint lacks vqc.theta".into()))?;
            let theta = ThetaStore::from_flat(&vqc, theta_flat.to_vec())?;
            if meta.kind == ModelKind::TwoStep {
                TrainedModel::TwoStep {
                    autoencoder,
                    vqc,
                    theta,
                }
            } else {
                let lambda = meta
                    .lambda
                    .ok_or_else(|| Error::Parse("checkpoint lacks lambda".into()))?;
                TrainedModel::Gqc(GqcModel::new(autoencoder, vqc, theta, lambda)?)
            }
        }
    };
    Ok((meta, model))
}
