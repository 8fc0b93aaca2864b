//! C ABI for the guided quantum compression library.
//!
//! Conventions:
//! - Handles are opaque pointers created by `gqc_*_new`/`gqc_*_load` and
//!   released by the matching `gqc_*_free`; freeing NULL is a no-op.
//! - Functions returning [`GqcStatus`] write their results through out
//!   pointers and return `GQC_STATUS_OK` (0) on success.
//! - On failure a thread-local message is set; read it with
//!   [`gqc_last_error_message`]. The pointer stays valid until the next
//!   failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use gqc_core::error::Error;
use gqc_core::eval::roc;
use gqc_core::mat::Matrix;
use gqc_core::models::{load_model, ModelMeta, TrainedModel};
use gqc_core::qgrad::adjoint_gradient;
use gqc_core::vqc::{forward, ThetaStore, VqcConfig};

/// Status codes returned by every fallible call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GqcStatus {
    Ok = 0,
    NullPointer = -1,
    InvalidArgument = -2,
    ShapeMismatch = -3,
    Io = -4,
    Utf8 = -5,
    Internal = -6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> GqcStatus {
    match err {
        Error::Shape(_) | Error::Size(_) | Error::Index(_) => GqcStatus::ShapeMismatch,
        Error::Io(_) | Error::Parse(_) | Error::Schema(_) => GqcStatus::Io,
        Error::Numeric(_) | Error::Domain(_) | Error::Config(_) => GqcStatus::InvalidArgument,
        _ => GqcStatus::Internal,
    }
}

fn fail(err: &Error) -> GqcStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Message describing the most recent failure on this thread; empty when no
/// failure has occurred.
#[no_mangle]
pub extern "C" fn gqc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gqc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Classifier circuit handle: shape plus trainable angles (initially zero).
pub struct GqcVqc {
    cfg: VqcConfig,
    theta: ThetaStore,
}

/// Creates a circuit handle with `n_qubits` qubits, `segments` input
/// segments, and `reps` ansatz repetitions. Returns NULL on invalid shapes.
#[no_mangle]
pub extern "C" fn gqc_vqc_new(n_qubits: u32, segments: u32, reps: u32) -> *mut GqcVqc {
    match VqcConfig::new(n_qubits as usize, segments as usize, reps as usize) {
        Ok(cfg) => {
            let theta = ThetaStore::zeros(&cfg);
            Box::into_raw(Box::new(GqcVqc { cfg, theta }))
        }
        Err(err) => {
            fail(&err);
            ptr::null_mut()
        }
    }
}

/// Releases a circuit handle. NULL is ignored.
///
/// # Safety
/// `vqc` must be NULL or a pointer returned by [`gqc_vqc_new`] that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn gqc_vqc_free(vqc: *mut GqcVqc) {
    if !vqc.is_null() {
        drop(Box::from_raw(vqc));
    }
}

/// Number of trainable angles (d·2·n·r); 0 for NULL.
///
/// # Safety
/// `vqc` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gqc_vqc_param_count(vqc: *const GqcVqc) -> usize {
    vqc.as_ref().map_or(0, |v| v.cfg.param_count())
}

/// Input vector length consumed by the circuit (n·d); 0 for NULL.
///
/// # Safety
/// `vqc` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gqc_vqc_input_len(vqc: *const GqcVqc) -> usize {
    vqc.as_ref().map_or(0, |v| v.cfg.latent_dim())
}

/// Replaces the trainable angles; `len` must equal the parameter count.
///
/// # Safety
/// `vqc` must be a live handle and `theta` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gqc_vqc_set_theta(
    vqc: *mut GqcVqc,
    theta: *const f64,
    len: usize,
) -> GqcStatus {
    let Some(handle) = vqc.as_mut() else {
        set_error("vqc handle is NULL");
        return GqcStatus::NullPointer;
    };
    if theta.is_null() {
        set_error("theta pointer is NULL");
        return GqcStatus::NullPointer;
    }
    let values = std::slice::from_raw_parts(theta, len).to_vec();
    match ThetaStore::from_flat(&handle.cfg, values) {
        Ok(store) => {
            handle.theta = store;
            GqcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Classifier output ⟨Z0⟩ for one input vector of length `z_len`.
///
/// # Safety
/// `vqc` must be a live handle, `z` must point to `z_len` doubles, and `out`
/// must be a valid double pointer.
#[no_mangle]
pub unsafe extern "C" fn gqc_vqc_forward(
    vqc: *const GqcVqc,
    z: *const f64,
    z_len: usize,
    out: *mut f64,
) -> GqcStatus {
    let Some(handle) = vqc.as_ref() else {
        set_error("vqc handle is NULL");
        return GqcStatus::NullPointer;
    };
    if z.is_null() || out.is_null() {
        set_error("z or out pointer is NULL");
        return GqcStatus::NullPointer;
    }
    let input = std::slice::from_raw_parts(z, z_len);
    match forward(input, &handle.theta, &handle.cfg) {
        Ok(value) => {
            *out = value;
            GqcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Value and exact gradients of the classifier output.
///
/// `d_theta` receives `gqc_vqc_param_count` entries (derivatives for each
/// trainable angle); `d_z` receives `z_len` entries (derivatives for each
/// input feature). Either output may be NULL to skip it.
///
/// # Safety
/// `vqc` must be a live handle; `z` must point to `z_len` doubles; non-NULL
/// outputs must have the capacities described above.
#[no_mangle]
pub unsafe extern "C" fn gqc_vqc_gradient(
    vqc: *const GqcVqc,
    z: *const f64,
    z_len: usize,
    out_value: *mut f64,
    d_theta: *mut f64,
    d_z: *mut f64,
) -> GqcStatus {
    let Some(handle) = vqc.as_ref() else {
        set_error("vqc handle is NULL");
        return GqcStatus::NullPointer;
    };
    if z.is_null() {
        set_error("z pointer is NULL");
        return GqcStatus::NullPointer;
    }
    let input = std::slice::from_raw_parts(z, z_len);
    match adjoint_gradient(input, &handle.theta, &handle.cfg) {
        Ok((value, tape)) => {
            if !out_value.is_null() {
                *out_value = value;
            }
            if !d_theta.is_null() {
                ptr::copy_nonoverlapping(tape.d_theta.as_ptr(), d_theta, tape.d_theta.len());
            }
            if !d_z.is_null() {
                ptr::copy_nonoverlapping(tape.d_z.as_ptr(), d_z, tape.d_z.len());
            }
            GqcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Trained model handle loaded from a checkpoint file.
pub struct GqcModel {
    meta: ModelMeta,
    model: TrainedModel,
}

/// Loads a model checkpoint written by the trainer. Returns NULL on failure.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gqc_model_load(path: *const c_char) -> *mut GqcModel {
    if path.is_null() {
        set_error("path pointer is NULL");
        return ptr::null_mut();
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8");
        return ptr::null_mut();
    };
    match load_model(Path::new(path)) {
        Ok((meta, model)) => Box::into_raw(Box::new(GqcModel { meta, model })),
        Err(err) => {
            fail(&err);
            ptr::null_mut()
        }
    }
}

/// Releases a model handle. NULL is ignored.
///
/// # Safety
/// `model` must be NULL or a pointer returned by [`gqc_model_load`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn gqc_model_free(model: *mut GqcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of input features the model was trained on; 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gqc_model_feature_count(model: *const GqcModel) -> usize {
    model.as_ref().map_or(0, |m| m.meta.feature_count)
}

/// Scores a row-major batch of `n_samples` × `n_features` (already
/// normalized to [0,1]); writes one signal probability per sample.
///
/// # Safety
/// `model` must be a live handle; `features` must point to
/// `n_samples * n_features` doubles; `out_scores` must hold `n_samples`.
#[no_mangle]
pub unsafe extern "C" fn gqc_model_score(
    model: *const GqcModel,
    features: *const f64,
    n_samples: usize,
    n_features: usize,
    out_scores: *mut f64,
) -> GqcStatus {
    let Some(handle) = model.as_ref() else {
        set_error("model handle is NULL");
        return GqcStatus::NullPointer;
    };
    if features.is_null() || out_scores.is_null() {
        set_error("features or out_scores pointer is NULL");
        return GqcStatus::NullPointer;
    }
    if n_features != handle.meta.feature_count {
        set_error(&format!(
            "batch has {n_features} features, model expects {}",
            handle.meta.feature_count
        ));
        return GqcStatus::ShapeMismatch;
    }
    let data = std::slice::from_raw_parts(features, n_samples * n_features).to_vec();
    let batch = match Matrix::from_vec(n_samples, n_features, data) {
        Ok(m) => m,
        Err(err) => return fail(&err),
    };
    match handle.model.score(&batch) {
        Ok(scores) => {
            ptr::copy_nonoverlapping(scores.as_ptr(), out_scores, n_samples);
            GqcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Area under the ROC curve for scores with binary labels.
///
/// # Safety
/// `scores` and `labels` must each point to `len` elements; `out` must be a
/// valid double pointer.
#[no_mangle]
pub unsafe extern "C" fn gqc_auc(
    scores: *const f64,
    labels: *const u8,
    len: usize,
    out: *mut f64,
) -> GqcStatus {
    if scores.is_null() || labels.is_null() || out.is_null() {
        set_error("scores, labels, or out pointer is NULL");
        return GqcStatus::NullPointer;
    }
    let scores = std::slice::from_raw_parts(scores, len);
    let labels = std::slice::from_raw_parts(labels, len);
    match roc(scores, labels) {
        Ok(curve) => {
            *out = curve.auc;
            GqcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}
