#include "hifd/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "hifd/autoencoder.hpp"
#include "hifd/csv_io.hpp"
#include "hifd/pca_monitor.hpp"
#include "hifd/rng.hpp"
#include "hifd/signal_prep.hpp"

namespace hifd {
namespace {

using nlohmann::json;

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& context) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) known = known || item.key() == key;
        if (!known) fail(ErrorCode::config, context + ": unknown field '" + item.key() + "'");
    }
}

template <typename T>
void get_if(const json& obj, const char* key, T& target, const std::string& context) {
    if (!obj.contains(key)) return;
    try {
        target = obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorCode::config, context + "." + key + ": wrong type");
    }
}

void parse_profile(const json& obj, LoadProfile& profile, const std::string& context) {
    expect_keys(obj,
                {"amplitude", "frequency_hz", "harmonics", "modulation_depth",
                 "modulation_period_cycles", "noise_std", "spike_rate_per_1000_cycles",
                 "spike_magnitude_min", "spike_magnitude_max", "phase_scale", "seed"},
                context);
    get_if(obj, "amplitude", profile.amplitude, context);
    get_if(obj, "frequency_hz", profile.frequency_hz, context);
    if (obj.contains("harmonics")) {
        const auto& arr = obj.at("harmonics");
        if (!arr.is_array()) fail(ErrorCode::config, context + ".harmonics: expected an array");
        profile.harmonics.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string hctx = context + ".harmonics[" + std::to_string(i) + "]";
            expect_keys(arr[i], {"order", "amplitude", "phase"}, hctx);
            Harmonic harm;
            get_if(arr[i], "order", harm.order, hctx);
            get_if(arr[i], "amplitude", harm.amplitude, hctx);
            get_if(arr[i], "phase", harm.phase, hctx);
            profile.harmonics.push_back(harm);
        }
    }
    get_if(obj, "modulation_depth", profile.modulation_depth, context);
    get_if(obj, "modulation_period_cycles", profile.modulation_period_cycles, context);
    get_if(obj, "noise_std", profile.noise_std, context);
    get_if(obj, "spike_rate_per_1000_cycles", profile.spike_rate_per_1000_cycles, context);
    get_if(obj, "spike_magnitude_min", profile.spike_magnitude_min, context);
    get_if(obj, "spike_magnitude_max", profile.spike_magnitude_max, context);
    get_if(obj, "phase_scale", profile.phase_scale, context);
    get_if(obj, "seed", profile.seed, context);
}

void parse_fault(const json& obj, HifConfig& fault, const std::string& context) {
    expect_keys(obj,
                {"start_seconds", "end_seconds", "faulted_phase", "magnitude", "asymmetry",
                 "randomness", "buildup_cycles", "dropout_probability", "seed"},
                context);
    get_if(obj, "start_seconds", fault.start_seconds, context);
    get_if(obj, "end_seconds", fault.end_seconds, context);
    get_if(obj, "faulted_phase", fault.faulted_phase, context);
    get_if(obj, "magnitude", fault.magnitude, context);
    get_if(obj, "asymmetry", fault.asymmetry, context);
    get_if(obj, "randomness", fault.randomness, context);
    get_if(obj, "buildup_cycles", fault.buildup_cycles, context);
    get_if(obj, "dropout_probability", fault.dropout_probability, context);
    get_if(obj, "seed", fault.seed, context);
}

json metric_to_json(const MetricValue& value) {
    if (!value.defined()) return nullptr;
    return *value.percent;
}

}  // namespace

Eigen::MatrixXd assemble_training_matrix(std::span<const WaveformRecord* const> recordings,
                                         int ts, int m_vars) {
    std::int64_t total_rows = 0;
    for (const WaveformRecord* record : recordings) {
        if (record == nullptr) fail(ErrorCode::invalid_argument, "null recording");
        record->validate();
        if (record->ts != ts)
            fail(ErrorCode::shape_mismatch, "recording ts does not match the pipeline ts");
        total_rows += record->cycle_count() * static_cast<std::int64_t>(record->phases.size());
    }
    if (total_rows == 0) fail(ErrorCode::insufficient_data, "no complete cycles to train on");

    Eigen::MatrixXd matrix(total_rows, m_vars);
    std::int64_t row = 0;
    for (const WaveformRecord* record : recordings) {
        for (const auto& phase : record->phases) {
            const CycleMatrix cycles = augment(phase.samples, ts, m_vars);
            matrix.middleRows(row, cycles.rows()) = cycles.data;
            row += cycles.rows();
        }
    }
    return matrix;
}

Eigen::MatrixXd assemble_training_matrix(const std::vector<WaveformRecord>& recordings, int ts,
                                         int m_vars) {
    std::vector<const WaveformRecord*> pointers;
    pointers.reserve(recordings.size());
    for (const auto& record : recordings) pointers.push_back(&record);
    return assemble_training_matrix(std::span<const WaveformRecord* const>(pointers), ts, m_vars);
}

TrainPipelineResult train_pipeline(std::span<const WaveformRecord* const> recordings,
                                   const PipelineConfig& config) {
    config.validate();
    if (recordings.empty()) fail(ErrorCode::insufficient_data, "no training recordings");

    const Eigen::MatrixXd raw = assemble_training_matrix(recordings, config.ts, config.m_vars);

    TrainPipelineResult result;
    result.model.config = config;
    result.model.input_scaler = minmax_fit(raw);
    const Eigen::MatrixXd scaled = minmax_apply(result.model.input_scaler, raw);

    auto [train_matrix, validation_matrix] =
        split(scaled, config.train_fraction, derive_seed(config.train.seed, 2));
    result.train_rows = train_matrix.rows();
    result.validation_rows = validation_matrix.rows();

    TrainResult trained = train(train_matrix, validation_matrix, config.layer_dims, config.train);
    result.model.autoencoder = std::move(trained.model);
    result.history = std::move(trained.history);

    // The monitor sees the residual population of every normal cycle, not just
    // the training split.
    const Eigen::MatrixXd residual_matrix = residuals(result.model.autoencoder, scaled);
    result.model.monitor = fit_monitor(residual_matrix, config.cpv_target, config.alpha);

    result.model.validate();
    return result;
}

TrainPipelineResult train_pipeline(const std::vector<WaveformRecord>& recordings,
                                   const PipelineConfig& config) {
    std::vector<const WaveformRecord*> pointers;
    pointers.reserve(recordings.size());
    for (const auto& record : recordings) pointers.push_back(&record);
    return train_pipeline(std::span<const WaveformRecord* const>(pointers), config);
}

RecordingResult detect_recording(const PipelineModel& model, const WaveformRecord& record,
                                 int threshold, const std::string& out_dir) {
    RecordingResult result = run_recording(record, model, threshold);
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) fail(ErrorCode::io, "cannot create " + out_dir + ": " + ec.message());
        for (std::size_t i = 0; i < result.phase_names.size(); ++i) {
            const std::string path =
                (std::filesystem::path(out_dir) / ("trace_phase_" + result.phase_names[i] + ".csv"))
                    .string();
            save_trace_csv(result.traces[i], path);
        }
        const double seconds_per_cycle = record.ts / record.sample_rate_hz;
        save_event_log(result.events, seconds_per_cycle,
                       (std::filesystem::path(out_dir) / "events.jsonl").string());
    }
    return result;
}

CorpusSpec parse_corpus_spec(const std::string& json_text) {
    CorpusSpec spec;
    bool blank = true;
    for (char c : json_text)
        blank = blank && (c == ' ' || c == '\t' || c == '\n' || c == '\r');
    if (!blank) {
        json doc;
        try {
            doc = json::parse(json_text);
        } catch (const json::exception& e) {
            fail(ErrorCode::config, std::string("corpus config: ") + e.what());
        }
        if (!doc.is_object()) fail(ErrorCode::config, "corpus config: expected a JSON object");
        expect_keys(doc,
                    {"n_load_recordings", "n_fault_recordings", "ts", "duration_seconds",
                     "base_seed", "profile", "fault"},
                    "corpus config");
        get_if(doc, "n_load_recordings", spec.n_load_recordings, "corpus config");
        get_if(doc, "n_fault_recordings", spec.n_fault_recordings, "corpus config");
        get_if(doc, "ts", spec.ts, "corpus config");
        get_if(doc, "duration_seconds", spec.duration_seconds, "corpus config");
        get_if(doc, "base_seed", spec.base_seed, "corpus config");
        if (doc.contains("profile")) parse_profile(doc.at("profile"), spec.base_profile, "profile");
        if (doc.contains("fault")) parse_fault(doc.at("fault"), spec.fault_template, "fault");
    }
    spec.validate();
    return spec;
}

SimulateResult simulate_corpus(const CorpusSpec& spec, const std::string& out_dir) {
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::io, "cannot create " + out_dir + ": " + ec.message());

    SimulateResult result;
    json rows = json::array();
    for (const auto& c : make_corpus_plan(spec)) {
        const WaveformRecord record = generate_case(c, spec);
        const std::string csv_name = c.name + ".csv";
        save_waveform_csv(record, (std::filesystem::path(out_dir) / csv_name).string());

        CorpusFileEntry entry;
        entry.csv_path = csv_name;
        entry.meta_path = meta_path_for(csv_name);
        entry.name = c.name;
        entry.is_fault = c.is_fault;
        entry.severity = c.severity;
        entry.seed = c.profile.seed;
        result.entries.push_back(entry);

        json row;
        row["name"] = c.name;
        row["csv"] = entry.csv_path;
        row["meta"] = entry.meta_path;
        row["is_fault"] = c.is_fault;
        row["severity"] = c.severity;
        row["profile_seed"] = c.profile.seed;
        if (c.is_fault) {
            row["fault_seed"] = c.fault.seed;
            row["faulted_phase"] = c.fault.faulted_phase;
        }
        rows.push_back(std::move(row));
    }

    json manifest;
    manifest["format_version"] = 1;
    manifest["generator"] = Rng::algorithm_name();
    manifest["ts"] = spec.ts;
    manifest["duration_seconds"] = spec.duration_seconds;
    manifest["base_seed"] = spec.base_seed;
    manifest["n_load_recordings"] = spec.n_load_recordings;
    manifest["n_fault_recordings"] = spec.n_fault_recordings;
    manifest["recordings"] = std::move(rows);

    result.manifest_path = (std::filesystem::path(out_dir) / "manifest.json").string();
    std::ofstream out(result.manifest_path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot open " + result.manifest_path + " for writing");
    out << manifest.dump(2) << "\n";
    out.flush();
    if (!out) fail(ErrorCode::io, "write to " + result.manifest_path + " failed");
    return result;
}

EvaluationResult evaluate_corpus(const PipelineModel& model, const std::string& manifest_path,
                                 int threshold, double grace_seconds,
                                 const std::string& out_dir) {
    json manifest;
    {
        std::ifstream in(manifest_path, std::ios::binary);
        if (!in) fail(ErrorCode::io, "cannot open " + manifest_path);
        try {
            in >> manifest;
        } catch (const json::exception& e) {
            fail(ErrorCode::invalid_input, manifest_path + ": " + e.what());
        }
    }
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    EvaluationResult result;
    json report_rows = json::array();
    try {
        if (manifest.at("format_version").get<int>() != 1)
            fail(ErrorCode::version, manifest_path + ": unsupported format_version");
        for (const auto& row : manifest.at("recordings")) {
            const std::string name = row.at("name").get<std::string>();
            const std::string csv = row.at("csv").get<std::string>();
            const WaveformRecord record = load_waveform_csv((base / csv).string());

            RecordingLabel label;
            label.name = name;
            label.is_fault = row.at("is_fault").get<bool>();
            label.ts = record.ts;
            label.sample_rate_hz = record.sample_rate_hz;
            if (label.is_fault) {
                if (!record.label)
                    fail(ErrorCode::invalid_input, name + ": fault recording lacks a label");
                label.faulted_phase = record.label->faulted_phase;
                label.fault_start_sample = record.label->fault_start_sample;
                label.fault_end_sample = record.label->fault_end_sample;
            }

            const RecordingResult detection = detect_recording(model, record, threshold, "");
            RecordingOutcome outcome;
            outcome.name = name;
            outcome.phases = detection.summaries;

            json report_row;
            report_row["name"] = name;
            report_row["is_fault"] = label.is_fault;
            if (row.contains("severity")) report_row["severity"] = row.at("severity");
            json phases = json::array();
            for (const auto& summary : detection.summaries) {
                phases.push_back({{"phase", summary.phase},
                                  {"tripped", summary.tripped},
                                  {"first_trip_cycle", summary.first_trip_cycle},
                                  {"cycles_processed", summary.cycles_processed},
                                  {"cycles_skipped", summary.cycles_skipped}});
            }
            report_row["phases"] = std::move(phases);
            report_rows.push_back(std::move(report_row));

            result.labels.push_back(std::move(label));
            result.outcomes.push_back(std::move(outcome));
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::invalid_input, manifest_path + ": " + e.what());
    }

    result.counts = score_corpus(result.labels, result.outcomes, grace_seconds);
    result.metrics = compute_metrics(result.counts);

    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) fail(ErrorCode::io, "cannot create " + out_dir + ": " + ec.message());

        json report;
        report["format_version"] = 1;
        report["threshold"] = threshold;
        report["grace_seconds"] = grace_seconds;
        report["counts"] = {{"tp", result.counts.tp},
                            {"tn", result.counts.tn},
                            {"fp", result.counts.fp},
                            {"fn", result.counts.fn}};
        report["metrics"] = {{"accuracy_percent", metric_to_json(result.metrics.accuracy)},
                             {"security_percent", metric_to_json(result.metrics.security)},
                             {"dependability_percent", metric_to_json(result.metrics.dependability)},
                             {"safety_percent", metric_to_json(result.metrics.safety)},
                             {"sensibility_percent", metric_to_json(result.metrics.sensibility)}};
        report["recordings"] = std::move(report_rows);

        const std::string json_path = (std::filesystem::path(out_dir) / "report.json").string();
        std::ofstream jout(json_path, std::ios::binary);
        if (!jout) fail(ErrorCode::io, "cannot open " + json_path + " for writing");
        jout << report.dump(2) << "\n";
        jout.flush();
        if (!jout) fail(ErrorCode::io, "write to " + json_path + " failed");

        const std::string txt_path = (std::filesystem::path(out_dir) / "report.txt").string();
        std::ofstream tout(txt_path, std::ios::binary);
        if (!tout) fail(ErrorCode::io, "cannot open " + txt_path + " for writing");
        tout << "recordings: " << result.labels.size() << "  tp " << result.counts.tp << "  tn "
             << result.counts.tn << "  fp " << result.counts.fp << "  fn " << result.counts.fn
             << "\n\n";
        tout << format_metrics_table(result.metrics, "corpus");
        tout << "\n";
        for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
            const auto& outcome = result.outcomes[i];
            tout << outcome.name << (result.labels[i].is_fault ? " (fault)" : " (load)");
            for (const auto& phase : outcome.phases) {
                tout << "  " << phase.phase << ":";
                if (phase.tripped)
                    tout << "trip@" << phase.first_trip_cycle;
                else
                    tout << "-";
            }
            tout << "\n";
        }
        tout.flush();
        if (!tout) fail(ErrorCode::io, "write to " + txt_path + " failed");
    }
    return result;
}

}  // namespace hifd
