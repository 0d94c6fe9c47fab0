/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright 2026 the zscan authors */

/*
 * C interface to the zscan impedance-sweep classification library.
 *
 * Conventions:
 *   - Every fallible function returns a zs_status; ZS_OK is 0.
 *   - On failure, zs_last_error() returns a thread-local message that
 *     stays valid until the next zscan call on the same thread.
 *   - Strings returned through char** out-parameters are heap-allocated;
 *     release them with zs_string_free. Out-parameters are left untouched
 *     on failure.
 *   - Handles (zs_dataset, zs_selection, zs_model) are opaque; release
 *     them with their _free function. Freeing NULL is a no-op.
 *   - Option documents are JSON; unknown keys are rejected so typos fail
 *     loudly instead of silently running with defaults.
 */

#ifndef ZSCAN_H
#define ZSCAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ZSCAN_API __declspec(dllexport)
#else
#define ZSCAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zs_status {
    ZS_OK = 0,
    ZS_ERR_INVALID_ARGUMENT = 1,
    ZS_ERR_CONFIG = 2,
    ZS_ERR_IO = 3,
    ZS_ERR_PARSE = 4,
    ZS_ERR_NUMERIC = 5,
    ZS_ERR_NON_CONVERGENCE = 6,
    ZS_ERR_INTERNAL = 7
} zs_status;

typedef struct zs_dataset zs_dataset;
typedef struct zs_selection zs_selection;
typedef struct zs_model zs_model;

ZSCAN_API const char* zs_version(void);
ZSCAN_API const char* zs_last_error(void);
ZSCAN_API void zs_string_free(char* s);

/* ---- simulation ---- */

/* Default simulator configuration as a JSON document. */
ZSCAN_API char* zs_default_sim_config(void);

/* Parses, validates and echoes a configuration with defaults filled in.
 * config_json NULL or empty means the default configuration. */
ZSCAN_API zs_status zs_resolved_sim_config(const char* config_json, char** out_json);

/* Synthesizes a labeled dataset from a configuration (NULL: defaults). */
ZSCAN_API zs_status zs_simulate(const char* config_json, zs_dataset** out);

/* ---- datasets ---- */

ZSCAN_API zs_status zs_dataset_from_csv(const char* text, zs_dataset** out);
ZSCAN_API zs_status zs_dataset_read_csv(const char* path, zs_dataset** out);
ZSCAN_API zs_status zs_dataset_to_csv(const zs_dataset* ds, char** out_text);
ZSCAN_API zs_status zs_dataset_write_csv(const zs_dataset* ds, const char* path);

/* Builds a dataset from Touchstone .s1p files listed in a manifest CSV of
 * "path,label" lines (paths resolved relative to the manifest file). All
 * sweeps must share one frequency grid. */
ZSCAN_API zs_status zs_dataset_read_touchstone(const char* manifest_path,
                                               zs_dataset** out);

ZSCAN_API zs_status zs_dataset_info(const zs_dataset* ds, size_t* traces,
                                    size_t* points, size_t* classes);
ZSCAN_API zs_status zs_dataset_class_name(const zs_dataset* ds, size_t index,
                                          char** out_name);
ZSCAN_API void zs_dataset_free(zs_dataset* ds);

/* ---- frequency selection ---- */

/* options_json keys (all optional):
 *   representation  "impedance_magnitude" | "impedance_real_imag" |
 *                   "reflection_magnitude"
 *   policy          {"kind": "top_fraction"|"rel_threshold"|"both",
 *                    "top_fraction": 0.20, "rel_threshold": 0.70}
 *   max_corr        0.90
 *   clamp_ohms      1e6
 *   whole_dataset   false (default scores the seeded training split only)
 *   test_fraction   0.30
 *   seed            0
 */
ZSCAN_API zs_status zs_select(const zs_dataset* ds, const char* options_json,
                              zs_selection** out);

ZSCAN_API zs_status zs_selection_to_json(const zs_selection* sel, char** out_json);
ZSCAN_API zs_status zs_selection_from_json(const char* text, zs_selection** out);
ZSCAN_API zs_status zs_selection_counts(const zs_selection* sel, size_t* stage1,
                                        size_t* kept, size_t* columns);

/* Independent audit: recomputes the maximum |pearson| over kept column
 * pairs with a direct two-pass loop. */
ZSCAN_API zs_status zs_selection_verify(const zs_dataset* ds, const zs_selection* sel,
                                        double* max_abs_corr);
ZSCAN_API void zs_selection_free(zs_selection* sel);

/* ---- training and evaluation ---- */

/* options_json keys (all optional):
 *   model            "qda" | "svm-gauss" | "svm-quad" | "svm-cubic" |
 *                    "subspace-knn"   (default "qda")
 *   folds            5
 *   test_fraction    0.30
 *   seed             0
 *   variance_target  0.95
 *   clamp_ohms       1e6
 *   qda_lambda       1e-3
 *   svm_c 1.0, svm_tol 1e-3, svm_gamma 0 (heuristic), svm_coef 1.0
 *   knn_learners 30, knn_dim 0 (ceil(d/2)), knn_k 1
 * out_report_json (optional, may be NULL) receives the cross-validation +
 * held-out-test report document. */
ZSCAN_API zs_status zs_train(const zs_dataset* ds, const zs_selection* sel,
                             const char* options_json, zs_model** out,
                             char** out_report_json);

ZSCAN_API zs_status zs_model_to_json(const zs_model* model, char** out_json);
ZSCAN_API zs_status zs_model_from_json(const char* text, zs_model** out);

/* split: "all" (or "none"), "test", "train". Test/train replay the split
 * stored in the model, so evaluating the training file with "test"
 * reproduces the training-time held-out report. */
ZSCAN_API zs_status zs_evaluate(const zs_model* model, const zs_dataset* ds,
                                const char* split, char** out_report_json);

/* Predicted class names for every trace, as a JSON array of strings. */
ZSCAN_API zs_status zs_predict(const zs_model* model, const zs_dataset* ds,
                               char** out_labels_json);
ZSCAN_API void zs_model_free(zs_model* model);

/* ---- reporting ---- */

/* Renders report documents (train reports or bare evaluation reports) as
 * a comparison table; as_csv selects CSV over aligned text. */
ZSCAN_API zs_status zs_report_table(const char* const* report_docs, size_t count,
                                    int as_csv, char** out_text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ZSCAN_H */
