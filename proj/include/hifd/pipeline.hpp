#pragma once

#include <span>
#include <string>
#include <vector>

#include "hifd/detector.hpp"
#include "hifd/metrics.hpp"
#include "hifd/model.hpp"
#include "hifd/synthgen.hpp"
#include "hifd/waveform.hpp"

namespace hifd {

struct TrainPipelineResult {
    PipelineModel model;
    std::vector<EpochStats> history;
    std::int64_t train_rows = 0;
    std::int64_t validation_rows = 0;
};

// Offline training: augment every phase of every recording, concatenate,
// min-max scale, seeded 80/20 split, train the autoencoder, fit the residual
// monitor on the residuals of all rows. The pointer overload avoids copying
// large recordings at the C boundary.
TrainPipelineResult train_pipeline(std::span<const WaveformRecord* const> recordings,
                                   const PipelineConfig& config);
TrainPipelineResult train_pipeline(const std::vector<WaveformRecord>& recordings,
                                   const PipelineConfig& config);

// Concatenated cycle matrix over all phases of all recordings (exposed for
// tests of the assembly arithmetic).
Eigen::MatrixXd assemble_training_matrix(std::span<const WaveformRecord* const> recordings,
                                         int ts, int m_vars);
Eigen::MatrixXd assemble_training_matrix(const std::vector<WaveformRecord>& recordings,
                                         int ts, int m_vars);

// Online detection over one recording; when out_dir is non-empty writes
// trace_phase_<p>.csv per phase plus events.jsonl there.
RecordingResult detect_recording(const PipelineModel& model, const WaveformRecord& record,
                                 int threshold, const std::string& out_dir = "");

struct CorpusFileEntry {
    std::string csv_path;   // relative to the manifest directory
    std::string meta_path;
    std::string name;
    bool is_fault = false;
    double severity = 0.0;
    std::uint64_t seed = 0;
};

struct SimulateResult {
    std::string manifest_path;
    std::vector<CorpusFileEntry> entries;
};

// Parse/validate a simulate config document (JSON text). Empty text = spec
// defaults. Throws ErrorCode::config naming the offending field.
CorpusSpec parse_corpus_spec(const std::string& json_text);

// Generate the corpus into out_dir, one CSV + .meta per recording, plus a
// manifest listing every file and seed.
SimulateResult simulate_corpus(const CorpusSpec& spec, const std::string& out_dir);

struct EvaluationResult {
    ConfusionCounts counts;
    DetectionMetrics metrics;
    std::vector<RecordingOutcome> outcomes;
    std::vector<RecordingLabel> labels;
};

// Run detection on every manifest recording, score case-level, and (when
// out_dir is non-empty) write report.json and report.txt.
EvaluationResult evaluate_corpus(const PipelineModel& model, const std::string& manifest_path,
                                 int threshold, double grace_seconds,
                                 const std::string& out_dir = "");

}  // namespace hifd
