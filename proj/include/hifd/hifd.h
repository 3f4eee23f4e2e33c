/* hifd.h - C API for the high-impedance-fault detection library.
 *
 * All functions return hifd_status; HIFD_OK is 0. On failure a thread-local
 * message is available via hifd_last_error(). Objects returned through
 * double-pointer out-parameters are owned by the caller and released with the
 * matching *_free function.
 */
#ifndef HIFD_H
#define HIFD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hifd_status {
    HIFD_OK = 0,
    HIFD_ERR_INVALID_ARGUMENT = 1,
    HIFD_ERR_INSUFFICIENT_DATA = 2,
    HIFD_ERR_SHAPE_MISMATCH = 3,
    HIFD_ERR_INVALID_INPUT = 4,
    HIFD_ERR_DIVERGENCE = 5,
    HIFD_ERR_DEGENERATE_DATA = 6,
    HIFD_ERR_CONFIG = 7,
    HIFD_ERR_IO = 8,
    HIFD_ERR_VERSION = 9,
    HIFD_ERR_INTERNAL = 10
} hifd_status;

typedef struct hifd_waveform hifd_waveform;
typedef struct hifd_model hifd_model;
typedef struct hifd_detector hifd_detector;

const char* hifd_version(void);
const char* hifd_status_name(hifd_status status);

/* Message for the most recent failure on this thread; empty string if none.
 * Valid until the next hifd_* call on the same thread. */
const char* hifd_last_error(void);

/* ---- waveform recordings ------------------------------------------------ */

/* CSV with header sample_index,phase_a,phase_b,phase_c plus the .meta
 * sidecar next to it. */
hifd_status hifd_waveform_load(const char* csv_path, hifd_waveform** out);
hifd_status hifd_waveform_save(const hifd_waveform* wf, const char* csv_path);
void hifd_waveform_free(hifd_waveform* wf);

int32_t hifd_waveform_phase_count(const hifd_waveform* wf);
int64_t hifd_waveform_sample_count(const hifd_waveform* wf);
int32_t hifd_waveform_samples_per_cycle(const hifd_waveform* wf);
double hifd_waveform_sample_rate(const hifd_waveform* wf);

/* ---- synthetic corpus --------------------------------------------------- */

/* config_json: simulate config document text, or NULL for defaults.
 * seed_override >= 0 replaces the config seed. The corpus (CSV + .meta per
 * recording, plus manifest.json) is written under out_dir; the manifest path
 * is copied into manifest_path_buf when given. */
hifd_status hifd_simulate_corpus(const char* config_json, const char* out_dir,
                                 int64_t seed_override, char* manifest_path_buf,
                                 size_t manifest_path_cap);

/* ---- training ------------------------------------------------------------ */

typedef struct hifd_train_options {
    int32_t ts;
    int32_t m_vars;
    const int32_t* layer_dims; /* NULL = default 32-15-10-15-32 */
    size_t layer_count;
    double learning_rate;
    int32_t epochs;
    int32_t batch_size;
    double train_fraction;
    double cpv_target;
    double alpha;
    uint64_t seed;
    int32_t threshold;
} hifd_train_options;

/* Reference defaults: ts 320, 32 vars, layers 32-15-10-15-32, lr 0.001,
 * 100 epochs, batch 32, 80/20 split, CPV 0.95, alpha 0.99, threshold 60. */
void hifd_train_options_init(hifd_train_options* options);

typedef struct hifd_train_summary {
    double final_train_loss;
    double final_validation_loss;
    int64_t train_rows;
    int64_t validation_rows;
    int32_t n_components;
    double g;
    double h;
    double t2_limit;
    double spe_limit;
    double phi_limit;
} hifd_train_summary;

hifd_status hifd_train(const hifd_waveform* const* recordings, size_t count,
                       const hifd_train_options* options, hifd_model** out_model,
                       hifd_train_summary* out_summary /* nullable */);

/* ---- model persistence --------------------------------------------------- */

hifd_status hifd_model_load(const char* path, hifd_model** out);
hifd_status hifd_model_save(const hifd_model* model, const char* path);
void hifd_model_free(hifd_model* model);

int32_t hifd_model_samples_per_cycle(const hifd_model* model);
int32_t hifd_model_var_count(const hifd_model* model);
int32_t hifd_model_component_count(const hifd_model* model);
int32_t hifd_model_threshold(const hifd_model* model);
double hifd_model_t2_limit(const hifd_model* model);
double hifd_model_spe_limit(const hifd_model* model);
double hifd_model_phi_limit(const hifd_model* model);

/* ---- streaming detection -------------------------------------------------- */

typedef struct hifd_cycle_output {
    int64_t cycle_index;
    double phi;
    double limit;
    int32_t above_limit;
    int32_t counter;
    int32_t tripped;
    int32_t skipped; /* cycle had non-finite samples and was not scored */
} hifd_cycle_output;

/* One independent counter state per phase; threshold <= 0 uses the model's
 * stored threshold. */
hifd_status hifd_detector_new(const hifd_model* model, int32_t phase_count, int32_t threshold,
                              hifd_detector** out);

/* samples must hold exactly the model's samples-per-cycle values. A cycle
 * with non-finite samples returns HIFD_ERR_INVALID_INPUT, advances the cycle
 * index, leaves counter and trip unchanged, and sets out->skipped; the
 * detector remains usable. */
hifd_status hifd_detector_process_cycle(hifd_detector* det, int32_t phase,
                                        const double* samples, size_t count,
                                        hifd_cycle_output* out);
hifd_status hifd_detector_reset(hifd_detector* det, int32_t phase);
void hifd_detector_free(hifd_detector* det);

/* ---- whole-recording detection -------------------------------------------- */

typedef struct hifd_phase_result {
    char phase_name[16];
    int32_t tripped;
    int64_t first_trip_cycle; /* -1 if never */
    double first_trip_seconds;
    int64_t cycles_processed;
    int64_t cycles_skipped;
} hifd_phase_result;

/* threshold <= 0 uses the model default. trace_dir (nullable) receives
 * trace_phase_<p>.csv per phase and events.jsonl. */
hifd_status hifd_detect_recording(const hifd_model* model, const hifd_waveform* wf,
                                  int32_t threshold, const char* trace_dir,
                                  hifd_phase_result* results, size_t results_cap,
                                  size_t* result_count);

/* ---- corpus evaluation ----------------------------------------------------- */

typedef struct hifd_metric_value {
    int32_t defined; /* 0 = zero denominator, percent meaningless */
    double percent;
} hifd_metric_value;

typedef struct hifd_evaluation {
    int64_t tp, tn, fp, fn;
    hifd_metric_value accuracy, security, dependability, safety, sensibility;
} hifd_evaluation;

/* threshold <= 0 uses the model default; grace_seconds < 0 uses 10 s.
 * report_dir (nullable) receives report.json and report.txt. */
hifd_status hifd_evaluate_corpus(const hifd_model* model, const char* manifest_path,
                                 int32_t threshold, double grace_seconds,
                                 const char* report_dir, hifd_evaluation* out);

/* Aligned Acc/Sec/Dep/Saf/Sen table for an evaluation result. Returns the
 * number of bytes (excluding NUL) that were or would be written. */
size_t hifd_evaluation_format(const hifd_evaluation* eval, const char* row_label, char* buf,
                              size_t cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HIFD_H */
