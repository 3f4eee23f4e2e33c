#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hifd/detector.hpp"

namespace hifd {

// Case-level confusion counts: a faulted recording detected on its labeled
// phase inside the window is one TP; a load recording with any trip is one
// FP; spurious trips (healthy phase, or faulted phase outside the window)
// also count as FP.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
};

struct MetricValue {
    std::optional<double> percent;  // empty = zero denominator, not applicable

    bool defined() const { return percent.has_value(); }
};

struct DetectionMetrics {
    MetricValue accuracy;       // (TP+TN)/(TP+TN+FP+FN)
    MetricValue security;       // TN/(TN+FP)
    MetricValue dependability;  // TP/(TP+FN)
    MetricValue safety;         // TN/(TN+FN)
    MetricValue sensibility;    // TP/(TP+FP)
};

DetectionMetrics compute_metrics(const ConfusionCounts& counts);

// One-decimal display; "n/a" for undefined metrics.
std::string format_metric(const MetricValue& value);

// Aligned plain-text table, columns Acc/Sec/Dep/Saf/Sen.
std::string format_metrics_table(const DetectionMetrics& metrics, const std::string& row_label);

struct RecordingLabel {
    std::string name;
    bool is_fault = false;
    std::string faulted_phase;
    std::int64_t fault_start_sample = 0;
    std::int64_t fault_end_sample = 0;
    int ts = 0;
    double sample_rate_hz = 0.0;
};

struct RecordingOutcome {
    std::string name;
    std::vector<PhaseSummary> phases;
};

// Score one detector run per labeled recording. TP requires a first trip on
// the faulted phase within [fault start, fault end + grace].
ConfusionCounts score_corpus(const std::vector<RecordingLabel>& labels,
                             const std::vector<RecordingOutcome>& outcomes,
                             double grace_seconds = 10.0);

}  // namespace hifd
