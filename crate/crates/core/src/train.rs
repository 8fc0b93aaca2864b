//! The three training paradigms (classical benchmark, two-step compression
//! then classification, and jointly guided compression), plus validation-based
//! model selection and the sequential grid search.
//!
//! Every run is a pure function of (config, data): shuffling uses per-epoch
//! seeds derived from the config seed, batch reductions are sequential, and
//! per-sample circuit evaluations run in a deterministic order-preserving map.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::mat::Matrix;
use crate::models::{
    ae_backward, classical_network, gqc_backward, vqc_probabilities, AutoEncoder, GqcModel,
    TrainedModel,
};
use crate::nn::{bce_gradient, bce_loss, mse_loss, AdamState, Network};
use crate::qgrad::adjoint_gradient;
use crate::vqc::{expectation_to_probability, ThetaStore, VqcConfig};

/// Hidden width of the shallow benchmark classifier [D, 16, 1].
pub const CLASSICAL_HIDDEN: usize = 16;
/// Stage-1 autoencoder defaults for the two-step paradigm.
pub const AE_DEFAULT_BATCH: usize = 128;
pub const AE_DEFAULT_LEARNING_RATE: f64 = 0.0012;
/// Tuned defaults for the joint paradigm.
pub const GQC_DEFAULT_BATCH: usize = 1024;
pub const GQC_DEFAULT_LEARNING_RATE: f64 = 1e-2;
pub const GQC_DEFAULT_REPS: usize = 2;
pub const GQC_DEFAULT_LAMBDA: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Paradigm {
    Classical,
    TwoStep,
    Gqc,
}

/// One training run's hyperparameters. Batch size and learning rate default
/// to the tuned values (1024, 1e-2); everything can be overridden.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub paradigm: Paradigm,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default)]
    pub seed: u64,
    /// Coupling of the joint loss; required (in (0,1)) iff paradigm = gqc.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Circuit shape; required for the two quantum paradigms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vqc: Option<VqcConfig>,
    /// Stage-1 autoencoder overrides for two_step (defaults 128 / 0.0012 /
    /// the main epoch count).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ae_batch_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ae_learning_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ae_epochs: Option<usize>,
}

fn default_batch_size() -> usize {
    GQC_DEFAULT_BATCH
}

fn default_learning_rate() -> f64 {
    GQC_DEFAULT_LEARNING_RATE
}

fn default_epochs() -> usize {
    30
}

impl TrainConfig {
    /// Joint-paradigm config with the tuned defaults: batch 1024, learning
    /// rate 1e-2, r = 2 (caller's circuit), λ = 0.7.
    pub fn gqc_defaults(vqc: VqcConfig, seed: u64, epochs: usize) -> Self {
        Self {
            paradigm: Paradigm::Gqc,
            batch_size: GQC_DEFAULT_BATCH,
            learning_rate: GQC_DEFAULT_LEARNING_RATE,
            epochs,
            seed,
            lambda: Some(GQC_DEFAULT_LAMBDA),
            vqc: Some(vqc),
            ae_batch_size: None,
            ae_learning_rate: None,
            ae_epochs: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be at least 1".to_string()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning_rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        match self.paradigm {
            Paradigm::Classical => {
                if self.lambda.is_some() {
                    return Err(Error::Config(
                        "lambda is only meaningful for the gqc paradigm".to_string(),
                    ));
                }
                if self.vqc.is_some() {
                    return Err(Error::Config(
                        "vqc settings are only meaningful for quantum paradigms".to_string(),
                    ));
                }
            }
            Paradigm::TwoStep => {
                if self.lambda.is_some() {
                    return Err(Error::Config(
                        "lambda is only meaningful for the gqc paradigm".to_string(),
                    ));
                }
                if self.vqc.is_none() {
                    return Err(Error::Config(
                        "two_step training needs a [train.vqc] section".to_string(),
                    ));
                }
            }
            Paradigm::Gqc => {
                let lambda = self.lambda.ok_or_else(|| {
                    Error::Config("gqc training needs lambda in (0,1)".to_string())
                })?;
                if !(lambda > 0.0 && lambda < 1.0) {
                    return Err(Error::Config(format!(
                        "lambda must lie strictly in (0,1), got {lambda}"
                    )));
                }
                if self.vqc.is_none() {
                    return Err(Error::Config(
                        "gqc training needs a [train.vqc] section".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn vqc(&self) -> Result<VqcConfig> {
        self.vqc
            .ok_or_else(|| Error::Config("missing vqc settings".to_string()))
    }
}

/// One row of the per-epoch metrics log. The recon/class parts are present
/// only for the joint paradigm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_recon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_class: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val_recon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val_class: Option<f64>,
}

/// Full per-epoch history plus the index of the selected (min validation
/// loss, earliest wins) epoch. `selected_epoch` is None iff no epochs ran.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRecord {
    pub epochs: Vec<EpochMetrics>,
    pub selected_epoch: Option<usize>,
    pub wall_time_secs: f64,
}

impl TrainRecord {
    pub fn best_val_loss(&self) -> Option<f64> {
        self.selected_epoch.map(|i| self.epochs[i].val_loss)
    }
}

/// SplitMix64: derives independent sub-seeds (per epoch, per trial) from one
/// config seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(stream.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    indices
}

fn check_finite(loss: f64, epoch: usize) -> Result<f64> {
    if loss.is_finite() {
        Ok(loss)
    } else {
        Err(Error::Training(format!(
            "non-finite loss at epoch {epoch}"
        )))
    }
}

/// Tracks the minimum validation loss; earlier epochs win ties.
struct BestTracker<T> {
    snapshot: Option<(usize, f64, T)>,
}

impl<T: Clone> BestTracker<T> {
    fn new() -> Self {
        Self { snapshot: None }
    }

    fn observe(&mut self, epoch: usize, val_loss: f64, state: &T) {
        let better = match &self.snapshot {
            None => true,
            Some((_, best, _)) => val_loss < *best,
        };
        if better {
            self.snapshot = Some((epoch, val_loss, state.clone()));
        }
    }

    fn into_parts(self) -> Option<(usize, f64, T)> {
        self.snapshot
    }
}

/// Fraction of correct hard predictions at the probability midpoint
/// (p = 0.5 predicts class 1, matching sign(0) = +1 on expectations).
pub fn hard_accuracy(probabilities: &[f64], labels: &[u8]) -> f64 {
    let correct = probabilities
        .iter()
        .zip(labels)
        .filter(|(&p, &y)| (p >= 0.5) as u8 == y)
        .count();
    correct as f64 / labels.len() as f64
}

// ---------------------------------------------------------------------------
// Classical benchmark
// ---------------------------------------------------------------------------

/// Minibatch Adam on the cross entropy; returns the checkpoint of the epoch
/// with minimum validation loss.
pub fn train_classical(
    cfg: &TrainConfig,
    train: &Dataset,
    val: &Dataset,
) -> Result<(Network, TrainRecord)> {
    cfg.validate()?;
    if cfg.paradigm != Paradigm::Classical {
        return Err(Error::Config("paradigm must be classical".to_string()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut net = classical_network(train.dim(), CLASSICAL_HIDDEN, &mut rng)?;
    let mut params = net.flatten_params();
    let mut adam = AdamState::new(params.len(), cfg.learning_rate);

    let mut record = Vec::with_capacity(cfg.epochs);
    let mut best = BestTracker::new();
    for epoch in 0..cfg.epochs {
        let order = shuffled_indices(train.len(), derive_seed(cfg.seed, epoch as u64));
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let x = train.features().select_rows(batch);
            let y: Vec<u8> = batch.iter().map(|&i| train.labels()[i]).collect();
            net.set_params_from_flat(&params)?;
            let (out, trace) = net.forward_cached(&x)?;
            let p = out.data();
            let loss = bce_loss(&y, p)?;
            epoch_loss += loss * batch.len() as f64;
            let upstream = Matrix::from_vec(x.rows(), 1, bce_gradient(&y, p)?)?;
            let (_, grads) = net.backward(&trace, &upstream)?;
            adam.step(&mut params, &Network::flatten_grads(&grads))?;
        }
        let train_loss = check_finite(epoch_loss / train.len() as f64, epoch)?;

        net.set_params_from_flat(&params)?;
        let p_val = net.forward(val.features())?;
        let val_loss = check_finite(bce_loss(val.labels(), p_val.data())?, epoch)?;
        best.observe(epoch, val_loss, &params);
        record.push(EpochMetrics {
            epoch,
            train_loss,
            val_loss,
            train_recon: None,
            train_class: None,
            val_recon: None,
            val_class: None,
        });
    }

    let selected_epoch = match best.into_parts() {
        Some((epoch, _, snapshot)) => {
            net.set_params_from_flat(&snapshot)?;
            Some(epoch)
        }
        None => {
            net.set_params_from_flat(&params)?;
            None
        }
    };
    Ok((
        net,
        TrainRecord {
            epochs: record,
            selected_epoch,
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
    ))
}

// ---------------------------------------------------------------------------
// Two-step: reconstruction first, classification second
// ---------------------------------------------------------------------------

/// Stage 1 trains the six-layer autoencoder on the reconstruction loss alone;
/// stage 2 freezes it and trains the circuit on the cross entropy over the
/// frozen latents. Each stage keeps its own min-validation checkpoint.
pub fn train_two_step(
    cfg: &TrainConfig,
    train: &Dataset,
    val: &Dataset,
) -> Result<(AutoEncoder, ThetaStore, (TrainRecord, TrainRecord))> {
    cfg.validate()?;
    if cfg.paradigm != Paradigm::TwoStep {
        return Err(Error::Config("paradigm must be two_step".to_string()));
    }
    let vqc = cfg.vqc()?;

    // Stage 1: autoencoder on MSE.
    let ae_start = Instant::now();
    let ae_batch = cfg.ae_batch_size.unwrap_or(AE_DEFAULT_BATCH);
    let ae_lr = cfg.ae_learning_rate.unwrap_or(AE_DEFAULT_LEARNING_RATE);
    let ae_epochs = cfg.ae_epochs.unwrap_or(cfg.epochs);
    if ae_batch == 0 {
        return Err(Error::Config("ae_batch_size must be at least 1".to_string()));
    }
    if !(ae_lr > 0.0 && ae_lr.is_finite()) {
        return Err(Error::Config(format!(
            "ae_learning_rate must be positive and finite, got {ae_lr}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ae = AutoEncoder::six_layer(train.dim(), vqc.latent_dim(), &mut rng)?;
    let mut enc_params = ae.encoder.flatten_params();
    let mut dec_params = ae.decoder.flatten_params();
    let enc_len = enc_params.len();
    let mut params: Vec<f64> = enc_params.drain(..).chain(dec_params.drain(..)).collect();
    let mut adam = AdamState::new(params.len(), ae_lr);

    let mut ae_record = Vec::with_capacity(ae_epochs);
    let mut ae_best = BestTracker::new();
    for epoch in 0..ae_epochs {
        let order = shuffled_indices(train.len(), derive_seed(cfg.seed, epoch as u64));
        let mut epoch_loss = 0.0;
        for batch in order.chunks(ae_batch) {
            let x = train.features().select_rows(batch);
            ae.encoder.set_params_from_flat(&params[..enc_len])?;
            ae.decoder.set_params_from_flat(&params[enc_len..])?;
            let (loss, enc_grads, dec_grads) = ae_backward(&ae, &x)?;
            epoch_loss += loss * batch.len() as f64;
            let mut grads = Network::flatten_grads(&enc_grads);
            grads.extend(Network::flatten_grads(&dec_grads));
            adam.step(&mut params, &grads)?;
        }
        let train_loss = check_finite(epoch_loss / train.len() as f64, epoch)?;

        ae.encoder.set_params_from_flat(&params[..enc_len])?;
        ae.decoder.set_params_from_flat(&params[enc_len..])?;
        let (_, x_hat) = ae.forward(val.features())?;
        let val_loss = check_finite(mse_loss(val.features(), &x_hat)?, epoch)?;
        ae_best.observe(epoch, val_loss, &params);
        ae_record.push(EpochMetrics {
            epoch,
            train_loss,
            val_loss,
            train_recon: None,
            train_class: None,
            val_recon: None,
            val_class: None,
        });
    }
    let ae_selected = match ae_best.into_parts() {
        Some((epoch, _, snapshot)) => {
            ae.encoder.set_params_from_flat(&snapshot[..enc_len])?;
            ae.decoder.set_params_from_flat(&snapshot[enc_len..])?;
            Some(epoch)
        }
        None => {
            ae.encoder.set_params_from_flat(&params[..enc_len])?;
            ae.decoder.set_params_from_flat(&params[enc_len..])?;
            None
        }
    };
    let ae_train_record = TrainRecord {
        epochs: ae_record,
        selected_epoch: ae_selected,
        wall_time_secs: ae_start.elapsed().as_secs_f64(),
    };

    // Stage 2: circuit on frozen latents.
    let vqc_start = Instant::now();
    let z_train = ae.encoder.forward(train.features())?;
    let z_val = ae.encoder.forward(val.features())?;
    let mut theta_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, u64::MAX));
    let mut theta = ThetaStore::random(&vqc, &mut theta_rng);
    let mut adam = AdamState::new(theta.len(), cfg.learning_rate);

    let mut vqc_record = Vec::with_capacity(cfg.epochs);
    let mut vqc_best = BestTracker::new();
    for epoch in 0..cfg.epochs {
        let order = shuffled_indices(train.len(), derive_seed(cfg.seed, epoch as u64));
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let z = z_train.select_rows(batch);
            let y: Vec<u8> = batch.iter().map(|&i| train.labels()[i]).collect();
            let (loss, grads) = vqc_bce_backward(&vqc, &theta, &z, &y)?;
            epoch_loss += loss * batch.len() as f64;
            adam.step(theta.as_flat_mut(), &grads)?;
        }
        let train_loss = check_finite(epoch_loss / train.len() as f64, epoch)?;

        let p_val = vqc_probabilities(&vqc, &theta, &z_val)?;
        let val_loss = check_finite(bce_loss(val.labels(), &p_val)?, epoch)?;
        vqc_best.observe(epoch, val_loss, &theta.as_flat().to_vec());
        vqc_record.push(EpochMetrics {
            epoch,
            train_loss,
            val_loss,
            train_recon: None,
            train_class: None,
            val_recon: None,
            val_class: None,
        });
    }
    let vqc_selected = match vqc_best.into_parts() {
        Some((epoch, _, snapshot)) => {
            theta.as_flat_mut().copy_from_slice(&snapshot);
            Some(epoch)
        }
        None => None,
    };
    let vqc_train_record = TrainRecord {
        epochs: vqc_record,
        selected_epoch: vqc_selected,
        wall_time_secs: vqc_start.elapsed().as_secs_f64(),
    };

    Ok((ae, theta, (ae_train_record, vqc_train_record)))
}

/// Cross entropy and dL/dϑ on one latent batch (circuit-only training).
fn vqc_bce_backward(
    vqc: &VqcConfig,
    theta: &ThetaStore,
    z: &Matrix,
    y: &[u8],
) -> Result<(f64, Vec<f64>)> {
    use rayon::prelude::*;
    let evals: Vec<(f64, crate::qgrad::GradientTape)> = (0..z.rows())
        .into_par_iter()
        .map(|r| adjoint_gradient(z.row(r), theta, vqc))
        .collect::<Result<_>>()?;
    let p: Vec<f64> = evals
        .iter()
        .map(|(e, _)| expectation_to_probability(*e))
        .collect();
    let loss = bce_loss(y, &p)?;
    let dl_dp = bce_gradient(y, &p)?;
    let mut grads = vec![0.0; theta.len()];
    for ((_, tape), &dp) in evals.iter().zip(&dl_dp) {
        let w = dp * 0.5;
        for (acc, g) in grads.iter_mut().zip(&tape.d_theta) {
            *acc += w * g;
        }
    }
    Ok((loss, grads))
}

// ---------------------------------------------------------------------------
// Joint training
// ---------------------------------------------------------------------------

/// Single loop minimizing (1−λ)·L_R + λ·L_C over (ω, ρ, ϑ) jointly; the
/// validation metric is the same combined loss.
pub fn train_gqc(cfg: &TrainConfig, train: &Dataset, val: &Dataset) -> Result<(GqcModel, TrainRecord)> {
    cfg.validate()?;
    if cfg.paradigm != Paradigm::Gqc {
        return Err(Error::Config("paradigm must be gqc".to_string()));
    }
    let vqc = cfg.vqc()?;
    let lambda = cfg.lambda.expect("validated above");
    let start = Instant::now();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ae = AutoEncoder::shallow(train.dim(), vqc.latent_dim(), &mut rng)?;
    let theta = ThetaStore::random(&vqc, &mut rng);
    let mut model = GqcModel::new(ae, vqc, theta, lambda)?;

    let enc_len = model.autoencoder.encoder.param_len();
    let dec_len = model.autoencoder.decoder.param_len();
    let mut params = model.autoencoder.encoder.flatten_params();
    params.extend(model.autoencoder.decoder.flatten_params());
    params.extend_from_slice(model.theta.as_flat());
    let mut adam = AdamState::new(params.len(), cfg.learning_rate);

    let write_back = |model: &mut GqcModel, flat: &[f64]| -> Result<()> {
        model
            .autoencoder
            .encoder
            .set_params_from_flat(&flat[..enc_len])?;
        model
            .autoencoder
            .decoder
            .set_params_from_flat(&flat[enc_len..enc_len + dec_len])?;
        model
            .theta
            .as_flat_mut()
            .copy_from_slice(&flat[enc_len + dec_len..]);
        Ok(())
    };

    let mut record = Vec::with_capacity(cfg.epochs);
    let mut best = BestTracker::new();
    for epoch in 0..cfg.epochs {
        let order = shuffled_indices(train.len(), derive_seed(cfg.seed, epoch as u64));
        let mut sums = (0.0, 0.0, 0.0);
        for batch in order.chunks(cfg.batch_size) {
            let x = train.features().select_rows(batch);
            let y: Vec<u8> = batch.iter().map(|&i| train.labels()[i]).collect();
            write_back(&mut model, &params)?;
            let (parts, grads) = gqc_backward(&model, &x, &y)?;
            let w = batch.len() as f64;
            sums.0 += parts.total * w;
            sums.1 += parts.recon * w;
            sums.2 += parts.class * w;
            let mut flat = Network::flatten_grads(&grads.encoder);
            flat.extend(Network::flatten_grads(&grads.decoder));
            flat.extend_from_slice(&grads.theta);
            adam.step(&mut params, &flat)?;
        }
        let m = train.len() as f64;
        let train_loss = check_finite(sums.0 / m, epoch)?;

        write_back(&mut model, &params)?;
        let val_parts = crate::models::gqc_loss(&model, val.features(), val.labels())?;
        let val_loss = check_finite(val_parts.total, epoch)?;
        best.observe(epoch, val_loss, &params);
        record.push(EpochMetrics {
            epoch,
            train_loss,
            val_loss,
            train_recon: Some(sums.1 / m),
            train_class: Some(sums.2 / m),
            val_recon: Some(val_parts.recon),
            val_class: Some(val_parts.class),
        });
    }

    let selected_epoch = match best.into_parts() {
        Some((epoch, _, snapshot)) => {
            write_back(&mut model, &snapshot)?;
            Some(epoch)
        }
        None => {
            write_back(&mut model, &params)?;
            None
        }
    };
    Ok((
        model,
        TrainRecord {
            epochs: record,
            selected_epoch,
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
    ))
}

// ---------------------------------------------------------------------------
// Sequential grid search
// ---------------------------------------------------------------------------

/// One hyperparameter axis with its candidate values.
#[derive(Debug, Clone, PartialEq)]
pub enum GridAxis {
    BatchSize(Vec<usize>),
    LearningRate(Vec<f64>),
    Reps(Vec<usize>),
    Lambda(Vec<f64>),
}

impl GridAxis {
    fn name(&self) -> &'static str {
        match self {
            GridAxis::BatchSize(_) => "batch_size",
            GridAxis::LearningRate(_) => "learning_rate",
            GridAxis::Reps(_) => "reps",
            GridAxis::Lambda(_) => "lambda",
        }
    }

    fn len(&self) -> usize {
        match self {
            GridAxis::BatchSize(v) => v.len(),
            GridAxis::Reps(v) => v.len(),
            GridAxis::LearningRate(v) | GridAxis::Lambda(v) => v.len(),
        }
    }

    fn candidate(&self, i: usize) -> f64 {
        match self {
            GridAxis::BatchSize(v) => v[i] as f64,
            GridAxis::Reps(v) => v[i] as f64,
            GridAxis::LearningRate(v) | GridAxis::Lambda(v) => v[i],
        }
    }

    fn apply(&self, cfg: &mut TrainConfig, i: usize) -> Result<()> {
        match self {
            GridAxis::BatchSize(v) => cfg.batch_size = v[i],
            GridAxis::LearningRate(v) => cfg.learning_rate = v[i],
            GridAxis::Reps(v) => {
                let vqc = cfg.vqc.as_mut().ok_or_else(|| {
                    Error::Config("reps axis needs a paradigm with a circuit".to_string())
                })?;
                vqc.reps = v[i];
            }
            GridAxis::Lambda(v) => {
                if cfg.paradigm != Paradigm::Gqc {
                    return Err(Error::Config(
                        "lambda axis applies only to the gqc paradigm".to_string(),
                    ));
                }
                cfg.lambda = Some(v[i]);
            }
        }
        Ok(())
    }
}

/// One trial of the sequential search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub axis: String,
    pub candidate: f64,
    pub val_accuracy: f64,
    pub selected: bool,
}

/// Optimizes one axis at a time in the given order, fixing each axis winner
/// (best validation hard-prediction accuracy, earlier candidate on ties)
/// before moving to the next. Trial count is Σ|axis|, not the product.
pub fn grid_search(
    base: &TrainConfig,
    axes: &[GridAxis],
    train: &Dataset,
    val: &Dataset,
) -> Result<(TrainConfig, Vec<TrialRecord>)> {
    base.validate()?;
    for axis in axes {
        if axis.len() == 0 {
            return Err(Error::Config(format!(
                "grid axis {:?} has no candidates",
                axis.name()
            )));
        }
    }
    let mut current = base.clone();
    let mut log = Vec::new();
    let mut trial_index = 0u64;
    for axis in axes {
        let mut best: Option<(usize, f64)> = None;
        let start = log.len();
        for i in 0..axis.len() {
            let mut cfg = current.clone();
            axis.apply(&mut cfg, i)?;
            cfg.seed = derive_seed(base.seed, trial_index);
            trial_index += 1;
            let accuracy = run_trial(&cfg, train, val)?;
            log.push(TrialRecord {
                axis: axis.name().to_string(),
                candidate: axis.candidate(i),
                val_accuracy: accuracy,
                selected: false,
            });
            if best.is_none_or(|(_, acc)| accuracy > acc) {
                best = Some((i, accuracy));
            }
        }
        let (winner, _) = best.expect("axis is non-empty");
        axis.apply(&mut current, winner)?;
        log[start + winner].selected = true;
    }
    current.seed = base.seed;
    Ok((current, log))
}

fn run_trial(cfg: &TrainConfig, train: &Dataset, val: &Dataset) -> Result<f64> {
    let model = match cfg.paradigm {
        Paradigm::Classical => TrainedModel::Classical(train_classical(cfg, train, val)?.0),
        Paradigm::TwoStep => {
            let (autoencoder, theta, _) = train_two_step(cfg, train, val)?;
            TrainedModel::TwoStep {
                autoencoder,
                vqc: cfg.vqc.expect("validated"),
                theta,
            }
        }
        Paradigm::Gqc => TrainedModel::Gqc(train_gqc(cfg, train, val)?.0),
    };
    let p = model.score(val.features())?;
    Ok(hard_accuracy(&p, val.labels()))
}
