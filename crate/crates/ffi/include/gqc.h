/* C interface for the guided quantum compression library. */

#ifndef GQC_H
#define GQC_H

/* This file is generated by cbindgen from crates/ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
enum GqcStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  GQC_STATUS_OK = 0,
  GQC_STATUS_NULL_POINTER = -1,
  GQC_STATUS_INVALID_ARGUMENT = -2,
  GQC_STATUS_SHAPE_MISMATCH = -3,
  GQC_STATUS_IO = -4,
  GQC_STATUS_UTF8 = -5,
  GQC_STATUS_INTERNAL = -6,
};
#ifndef __cplusplus
typedef int32_t GqcStatus;
#endif // __cplusplus

/**
 * Trained model handle loaded from a checkpoint file.
 */
typedef struct GqcModel GqcModel;

/**
 * Classifier circuit handle: shape plus trainable angles (initially zero).
 */
typedef struct GqcVqc GqcVqc;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread; empty when no
 * failure has occurred.
 */
const char *gqc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gqc_version(void);

/**
 * Creates a circuit handle with `n_qubits` qubits, `segments` input
 * segments, and `reps` ansatz repetitions. Returns NULL on invalid shapes.
 */
struct GqcVqc *gqc_vqc_new(uint32_t n_qubits, uint32_t segments, uint32_t reps);

/**
 * Releases a circuit handle. NULL is ignored.
 *
 * # Safety
 * `vqc` must be NULL or a pointer returned by [`gqc_vqc_new`] that has not
 * been freed yet.
 */
void gqc_vqc_free(struct GqcVqc *vqc);

/**
 * Number of trainable angles (d·2·n·r); 0 for NULL.
 *
 * # Safety
 * `vqc` must be NULL or a live handle.
 */
size_t gqc_vqc_param_count(const struct GqcVqc *vqc);

/**
 * Input vector length consumed by the circuit (n·d); 0 for NULL.
 *
 * # Safety
 * `vqc` must be NULL or a live handle.
 */
size_t gqc_vqc_input_len(const struct GqcVqc *vqc);

/**
 * Replaces the trainable angles; `len` must equal the parameter count.
 *
 * # Safety
 * `vqc` must be a live handle and `theta` must point to `len` doubles.
 */
GqcStatus gqc_vqc_set_theta(struct GqcVqc *vqc, const double *theta, size_t len);

/**
 * Classifier output ⟨Z0⟩ for one input vector of length `z_len`.
 *
 * # Safety
 * `vqc` must be a live handle, `z` must point to `z_len` doubles, and `out`
 * must be a valid double pointer.
 */
GqcStatus gqc_vqc_forward(const struct GqcVqc *vqc, const double *z, size_t z_len, double *out);

/**
 * Value and exact gradients of the classifier output.
 *
 * `d_theta` receives `gqc_vqc_param_count` entries (derivatives for each
 * trainable angle); `d_z` receives `z_len` entries (derivatives for each
 * input feature). Either output may be NULL to skip it.
 *
 * # Safety
 * `vqc` must be a live handle; `z` must point to `z_len` doubles; non-NULL
 * outputs must have the capacities described above.
 */
GqcStatus gqc_vqc_gradient(const struct GqcVqc *vqc,
                           const double *z,
                           size_t z_len,
                           double *out_value,
                           double *d_theta,
                           double *d_z);

/**
 * Loads a model checkpoint written by the trainer. Returns NULL on failure.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
struct GqcModel *gqc_model_load(const char *path);

/**
 * Releases a model handle. NULL is ignored.
 *
 * # Safety
 * `model` must be NULL or a pointer returned by [`gqc_model_load`] that has
 * not been freed yet.
 */
void gqc_model_free(struct GqcModel *model);

/**
 * Number of input features the model was trained on; 0 for NULL.
 *
 * # Safety
 * `model` must be NULL or a live handle.
 */
size_t gqc_model_feature_count(const struct GqcModel *model);

/**
 * Scores a row-major batch of `n_samples` × `n_features` (already
 * normalized to [0,1]); writes one signal probability per sample.
 *
 * # Safety
 * `model` must be a live handle; `features` must point to
 * `n_samples * n_features` doubles; `out_scores` must hold `n_samples`.
 */
GqcStatus gqc_model_score(const struct GqcModel *model,
                          const double *features,
                          size_t n_samples,
                          size_t n_features,
                          double *out_scores);

/**
 * Area under the ROC curve for scores with binary labels.
 *
 * # Safety
 * `scores` and `labels` must each point to `len` elements; `out` must be a
 * valid double pointer.
 */
GqcStatus gqc_auc(const double *scores, const uint8_t *labels, size_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GQC_H */
