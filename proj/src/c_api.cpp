#include "hifd/hifd.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "hifd/csv_io.hpp"
#include "hifd/detector.hpp"
#include "hifd/error.hpp"
#include "hifd/metrics.hpp"
#include "hifd/model_io.hpp"
#include "hifd/pipeline.hpp"

struct hifd_waveform {
    hifd::WaveformRecord record;
};

struct hifd_model {
    hifd::PipelineModel model;
};

struct hifd_detector {
    hifd::PipelineModel model;  // owned copy; outlives any caller-side model
    std::vector<hifd::DetectorState> states;
    int threshold = 0;
};

namespace {

thread_local std::string g_last_error;

hifd_status map_code(hifd::ErrorCode code) {
    return static_cast<hifd_status>(static_cast<int>(code));
}

template <typename F>
hifd_status wrap(F&& body) {
    g_last_error.clear();
    try {
        return body();
    } catch (const hifd::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return HIFD_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HIFD_ERR_INTERNAL;
    }
}

hifd_status require(bool condition, const char* message) {
    if (condition) return HIFD_OK;
    g_last_error = message;
    return HIFD_ERR_INVALID_ARGUMENT;
}

void copy_string(const std::string& text, char* buf, size_t cap) {
    if (buf == nullptr || cap == 0) return;
    const size_t n = text.size() < cap - 1 ? text.size() : cap - 1;
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
}

int resolve_threshold(const hifd_model* model, int32_t threshold) {
    return threshold > 0 ? threshold : model->model.config.threshold;
}

}  // namespace

extern "C" {

const char* hifd_version(void) { return "1.0.0"; }

const char* hifd_status_name(hifd_status status) {
    if (status == HIFD_OK) return "ok";
    const int code = static_cast<int>(status);
    if (code >= 1 && code <= 10) return hifd::error_code_name(static_cast<hifd::ErrorCode>(code));
    return "unknown";
}

const char* hifd_last_error(void) { return g_last_error.c_str(); }

/* ---- waveform recordings ------------------------------------------------ */

hifd_status hifd_waveform_load(const char* csv_path, hifd_waveform** out) {
    if (auto s = require(csv_path && out, "csv_path and out must be non-null")) return s;
    return wrap([&] {
        auto* wf = new hifd_waveform{hifd::load_waveform_csv(csv_path)};
        *out = wf;
        return HIFD_OK;
    });
}

hifd_status hifd_waveform_save(const hifd_waveform* wf, const char* csv_path) {
    if (auto s = require(wf && csv_path, "wf and csv_path must be non-null")) return s;
    return wrap([&] {
        hifd::save_waveform_csv(wf->record, csv_path);
        return HIFD_OK;
    });
}

void hifd_waveform_free(hifd_waveform* wf) { delete wf; }

int32_t hifd_waveform_phase_count(const hifd_waveform* wf) {
    return wf ? static_cast<int32_t>(wf->record.phases.size()) : 0;
}

int64_t hifd_waveform_sample_count(const hifd_waveform* wf) {
    return wf ? wf->record.length() : 0;
}

int32_t hifd_waveform_samples_per_cycle(const hifd_waveform* wf) {
    return wf ? wf->record.ts : 0;
}

double hifd_waveform_sample_rate(const hifd_waveform* wf) {
    return wf ? wf->record.sample_rate_hz : 0.0;
}

/* ---- synthetic corpus --------------------------------------------------- */

hifd_status hifd_simulate_corpus(const char* config_json, const char* out_dir,
                                 int64_t seed_override, char* manifest_path_buf,
                                 size_t manifest_path_cap) {
    if (auto s = require(out_dir != nullptr, "out_dir must be non-null")) return s;
    return wrap([&] {
        hifd::CorpusSpec spec = hifd::parse_corpus_spec(config_json ? config_json : "");
        if (seed_override >= 0) spec.base_seed = static_cast<std::uint64_t>(seed_override);
        const hifd::SimulateResult result = hifd::simulate_corpus(spec, out_dir);
        copy_string(result.manifest_path, manifest_path_buf, manifest_path_cap);
        return HIFD_OK;
    });
}

/* ---- training ------------------------------------------------------------ */

void hifd_train_options_init(hifd_train_options* options) {
    if (options == nullptr) return;
    const hifd::PipelineConfig defaults;
    options->ts = defaults.ts;
    options->m_vars = defaults.m_vars;
    options->layer_dims = nullptr;
    options->layer_count = 0;
    options->learning_rate = defaults.train.learning_rate;
    options->epochs = defaults.train.epochs;
    options->batch_size = defaults.train.batch_size;
    options->train_fraction = defaults.train_fraction;
    options->cpv_target = defaults.cpv_target;
    options->alpha = defaults.alpha;
    options->seed = defaults.train.seed;
    options->threshold = defaults.threshold;
}

hifd_status hifd_train(const hifd_waveform* const* recordings, size_t count,
                       const hifd_train_options* options, hifd_model** out_model,
                       hifd_train_summary* out_summary) {
    if (auto s = require(recordings && count > 0, "need at least one recording")) return s;
    if (auto s = require(out_model != nullptr, "out_model must be non-null")) return s;
    return wrap([&] {
        hifd_train_options defaults;
        hifd_train_options_init(&defaults);
        const hifd_train_options& opt = options ? *options : defaults;

        hifd::PipelineConfig config;
        config.ts = opt.ts;
        config.m_vars = opt.m_vars;
        if (opt.layer_dims != nullptr && opt.layer_count > 0) {
            config.layer_dims.assign(opt.layer_dims, opt.layer_dims + opt.layer_count);
        }
        config.train.learning_rate = opt.learning_rate;
        config.train.epochs = opt.epochs;
        config.train.batch_size = opt.batch_size;
        config.train.seed = opt.seed;
        config.train_fraction = opt.train_fraction;
        config.cpv_target = opt.cpv_target;
        config.alpha = opt.alpha;
        config.threshold = opt.threshold;

        std::vector<const hifd::WaveformRecord*> pointers;
        pointers.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            if (recordings[i] == nullptr) hifd::fail(hifd::ErrorCode::invalid_argument, "null recording");
            pointers.push_back(&recordings[i]->record);
        }

        hifd::TrainPipelineResult result = hifd::train_pipeline(
            std::span<const hifd::WaveformRecord* const>(pointers), config);

        if (out_summary != nullptr) {
            const auto& last = result.history.back();
            out_summary->final_train_loss = last.train_loss;
            out_summary->final_validation_loss = last.validation_loss;
            out_summary->train_rows = result.train_rows;
            out_summary->validation_rows = result.validation_rows;
            out_summary->n_components = result.model.monitor.n_components;
            out_summary->g = result.model.monitor.g;
            out_summary->h = result.model.monitor.h;
            out_summary->t2_limit = result.model.monitor.t2_limit;
            out_summary->spe_limit = result.model.monitor.spe_limit;
            out_summary->phi_limit = result.model.monitor.phi_limit;
        }
        *out_model = new hifd_model{std::move(result.model)};
        return HIFD_OK;
    });
}

/* ---- model persistence --------------------------------------------------- */

hifd_status hifd_model_load(const char* path, hifd_model** out) {
    if (auto s = require(path && out, "path and out must be non-null")) return s;
    return wrap([&] {
        *out = new hifd_model{hifd::load_model(path)};
        return HIFD_OK;
    });
}

hifd_status hifd_model_save(const hifd_model* model, const char* path) {
    if (auto s = require(model && path, "model and path must be non-null")) return s;
    return wrap([&] {
        hifd::save_model(model->model, path);
        return HIFD_OK;
    });
}

void hifd_model_free(hifd_model* model) { delete model; }

int32_t hifd_model_samples_per_cycle(const hifd_model* model) {
    return model ? model->model.config.ts : 0;
}

int32_t hifd_model_var_count(const hifd_model* model) {
    return model ? model->model.config.m_vars : 0;
}

int32_t hifd_model_component_count(const hifd_model* model) {
    return model ? model->model.monitor.n_components : 0;
}

int32_t hifd_model_threshold(const hifd_model* model) {
    return model ? model->model.config.threshold : 0;
}

double hifd_model_t2_limit(const hifd_model* model) {
    return model ? model->model.monitor.t2_limit : 0.0;
}

double hifd_model_spe_limit(const hifd_model* model) {
    return model ? model->model.monitor.spe_limit : 0.0;
}

double hifd_model_phi_limit(const hifd_model* model) {
    return model ? model->model.monitor.phi_limit : 0.0;
}

/* ---- streaming detection -------------------------------------------------- */

hifd_status hifd_detector_new(const hifd_model* model, int32_t phase_count, int32_t threshold,
                              hifd_detector** out) {
    if (auto s = require(model && out, "model and out must be non-null")) return s;
    if (auto s = require(phase_count >= 1, "phase_count must be >= 1")) return s;
    return wrap([&] {
        auto* det = new hifd_detector;
        det->model = model->model;
        det->threshold = resolve_threshold(model, threshold);
        det->states.resize(static_cast<size_t>(phase_count));
        for (int32_t i = 0; i < phase_count; ++i)
            det->states[static_cast<size_t>(i)].phase = std::to_string(i);
        *out = det;
        return HIFD_OK;
    });
}

hifd_status hifd_detector_process_cycle(hifd_detector* det, int32_t phase, const double* samples,
                                        size_t count, hifd_cycle_output* out) {
    if (auto s = require(det && samples, "det and samples must be non-null")) return s;
    if (auto s = require(phase >= 0 && static_cast<size_t>(phase) < det->states.size(),
                         "phase index out of range"))
        return s;
    g_last_error.clear();
    auto& state = det->states[static_cast<size_t>(phase)];
    try {
        const hifd::DetectionOutput result = hifd::process_cycle(
            state, det->model, std::span<const double>(samples, count), det->threshold);
        if (out != nullptr) {
            out->cycle_index = result.cycle_index;
            out->phi = result.phi;
            out->limit = result.limit;
            out->above_limit = result.above_limit ? 1 : 0;
            out->counter = result.counter;
            out->tripped = result.trip_issued ? 1 : 0;
            out->skipped = 0;
        }
        return HIFD_OK;
    } catch (const hifd::Error& e) {
        g_last_error = e.what();
        if (e.code() == hifd::ErrorCode::invalid_input) {
            // Skipped cycle: index advances, counter and trip hold.
            if (out != nullptr) {
                out->cycle_index = state.cycle_index;
                out->phi = std::numeric_limits<double>::quiet_NaN();
                out->limit = det->model.monitor.phi_limit;
                out->above_limit = 0;
                out->counter = state.counter;
                out->tripped = state.tripped ? 1 : 0;
                out->skipped = 1;
            }
            ++state.cycle_index;
        }
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HIFD_ERR_INTERNAL;
    }
}

hifd_status hifd_detector_reset(hifd_detector* det, int32_t phase) {
    if (auto s = require(det != nullptr, "det must be non-null")) return s;
    if (auto s = require(phase >= 0 && static_cast<size_t>(phase) < det->states.size(),
                         "phase index out of range"))
        return s;
    g_last_error.clear();
    hifd::reset(det->states[static_cast<size_t>(phase)]);
    return HIFD_OK;
}

void hifd_detector_free(hifd_detector* det) { delete det; }

/* ---- whole-recording detection -------------------------------------------- */

hifd_status hifd_detect_recording(const hifd_model* model, const hifd_waveform* wf,
                                  int32_t threshold, const char* trace_dir,
                                  hifd_phase_result* results, size_t results_cap,
                                  size_t* result_count) {
    if (auto s = require(model && wf, "model and wf must be non-null")) return s;
    return wrap([&] {
        const hifd::RecordingResult recording = hifd::detect_recording(
            model->model, wf->record, resolve_threshold(model, threshold),
            trace_dir ? trace_dir : "");
        const double seconds_per_cycle = wf->record.ts / wf->record.sample_rate_hz;
        if (result_count != nullptr) *result_count = recording.summaries.size();
        if (results != nullptr) {
            const size_t n = recording.summaries.size() < results_cap ? recording.summaries.size()
                                                                      : results_cap;
            for (size_t i = 0; i < n; ++i) {
                const auto& summary = recording.summaries[i];
                copy_string(summary.phase, results[i].phase_name, sizeof(results[i].phase_name));
                results[i].tripped = summary.tripped ? 1 : 0;
                results[i].first_trip_cycle = summary.first_trip_cycle;
                results[i].first_trip_seconds =
                    summary.tripped ? summary.first_trip_cycle * seconds_per_cycle : -1.0;
                results[i].cycles_processed = summary.cycles_processed;
                results[i].cycles_skipped = summary.cycles_skipped;
            }
        }
        return HIFD_OK;
    });
}

/* ---- corpus evaluation ----------------------------------------------------- */

hifd_status hifd_evaluate_corpus(const hifd_model* model, const char* manifest_path,
                                 int32_t threshold, double grace_seconds,
                                 const char* report_dir, hifd_evaluation* out) {
    if (auto s = require(model && manifest_path, "model and manifest_path must be non-null"))
        return s;
    return wrap([&] {
        const hifd::EvaluationResult result = hifd::evaluate_corpus(
            model->model, manifest_path, resolve_threshold(model, threshold),
            grace_seconds < 0.0 ? 10.0 : grace_seconds, report_dir ? report_dir : "");
        if (out != nullptr) {
            out->tp = result.counts.tp;
            out->tn = result.counts.tn;
            out->fp = result.counts.fp;
            out->fn = result.counts.fn;
            auto fill = [](hifd_metric_value& dst, const hifd::MetricValue& src) {
                dst.defined = src.defined() ? 1 : 0;
                dst.percent = src.defined() ? *src.percent : 0.0;
            };
            fill(out->accuracy, result.metrics.accuracy);
            fill(out->security, result.metrics.security);
            fill(out->dependability, result.metrics.dependability);
            fill(out->safety, result.metrics.safety);
            fill(out->sensibility, result.metrics.sensibility);
        }
        return HIFD_OK;
    });
}

size_t hifd_evaluation_format(const hifd_evaluation* eval, const char* row_label, char* buf,
                              size_t cap) {
    if (eval == nullptr) {
        if (buf != nullptr && cap > 0) buf[0] = '\0';
        return 0;
    }
    hifd::DetectionMetrics metrics;
    auto fill = [](hifd::MetricValue& dst, const hifd_metric_value& src) {
        if (src.defined) dst.percent = src.percent;
    };
    fill(metrics.accuracy, eval->accuracy);
    fill(metrics.security, eval->security);
    fill(metrics.dependability, eval->dependability);
    fill(metrics.safety, eval->safety);
    fill(metrics.sensibility, eval->sensibility);
    const std::string table =
        hifd::format_metrics_table(metrics, row_label ? row_label : "corpus");
    copy_string(table, buf, cap);
    return table.size();
}

} /* extern "C" */
