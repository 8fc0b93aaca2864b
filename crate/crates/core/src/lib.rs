//! Guided quantum compression: a classical autoencoder coupled to a simulated
//! variational quantum classifier, trained jointly against a combined
//! reconstruction + classification loss, alongside the two-step and classical
//! baselines and the evaluation tooling to compare them.
//!
//! Module map:
//! - [`qsim`]: dense state-vector simulator (H, RY, RZ, CNOT, RZZ).
//! - [`vqc`]: data re-uploading classifier circuit and its parameter store.
//! - [`qgrad`]: adjoint-sweep gradients plus the parameter-shift cross-check.
//! - [`nn`]: dense layers, losses, Adam, and the checkpoint container.
//! - [`models`]: autoencoder, classical benchmark, and the coupled model.
//! - [`data`]: loading, normalization, splits, and the synthetic generator.
//! - [`train`]: the three training paradigms and the sequential grid search.
//! - [`eval`]: ROC/AUC, inverse FPR, KL divergences, fold statistics.
//! - [`cli`]: experiment configs and the command implementations.

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod mat;
pub mod models;
pub mod nn;
pub mod qgrad;
pub mod qsim;
pub mod train;
pub mod vqc;

pub use error::{Error, Result};
