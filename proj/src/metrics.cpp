#include "hifd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>

namespace hifd {
namespace {

MetricValue ratio(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) return {};
    return {100.0 * static_cast<double>(numerator) / static_cast<double>(denominator)};
}

}  // namespace

DetectionMetrics compute_metrics(const ConfusionCounts& c) {
    if (c.tp < 0 || c.tn < 0 || c.fp < 0 || c.fn < 0)
        fail(ErrorCode::invalid_argument, "confusion counts must be nonnegative");
    DetectionMetrics m;
    m.accuracy = ratio(c.tp + c.tn, c.total());
    m.security = ratio(c.tn, c.tn + c.fp);
    m.dependability = ratio(c.tp, c.tp + c.fn);
    m.safety = ratio(c.tn, c.tn + c.fn);
    m.sensibility = ratio(c.tp, c.tp + c.fp);
    return m;
}

std::string format_metric(const MetricValue& value) {
    if (!value.defined()) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", *value.percent);
    return buf;
}

std::string format_metrics_table(const DetectionMetrics& metrics, const std::string& row_label) {
    const std::string cells[5] = {format_metric(metrics.accuracy), format_metric(metrics.security),
                                  format_metric(metrics.dependability),
                                  format_metric(metrics.safety),
                                  format_metric(metrics.sensibility)};
    std::size_t label_width = std::max<std::size_t>(row_label.size(), 8);
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-*s %7s %7s %7s %7s %7s\n",
                  static_cast<int>(label_width), "", "Acc", "Sec", "Dep", "Saf", "Sen");
    out += line;
    std::snprintf(line, sizeof(line), "%-*s %7s %7s %7s %7s %7s\n",
                  static_cast<int>(label_width), row_label.c_str(), cells[0].c_str(),
                  cells[1].c_str(), cells[2].c_str(), cells[3].c_str(), cells[4].c_str());
    out += line;
    return out;
}

ConfusionCounts score_corpus(const std::vector<RecordingLabel>& labels,
                             const std::vector<RecordingOutcome>& outcomes,
                             double grace_seconds) {
    if (labels.size() != outcomes.size())
        fail(ErrorCode::shape_mismatch, "labels and outcomes differ in length");
    if (grace_seconds < 0.0) fail(ErrorCode::invalid_argument, "grace_seconds must be >= 0");

    std::unordered_map<std::string, const RecordingOutcome*> by_name;
    for (const auto& outcome : outcomes) by_name[outcome.name] = &outcome;

    ConfusionCounts counts;
    for (const auto& label : labels) {
        auto it = by_name.find(label.name);
        if (it == by_name.end())
            fail(ErrorCode::invalid_argument, "no outcome for recording " + label.name);
        const auto& phases = it->second->phases;
        if (label.ts <= 0 || label.sample_rate_hz <= 0.0)
            fail(ErrorCode::invalid_argument, "label for " + label.name + " lacks timing info");
        const double cycles_per_second = label.sample_rate_hz / label.ts;

        if (!label.is_fault) {
            bool any_trip = false;
            for (const auto& phase : phases) any_trip = any_trip || phase.tripped;
            if (any_trip)
                ++counts.fp;
            else
                ++counts.tn;
            continue;
        }

        const double start_cycle =
            static_cast<double>(label.fault_start_sample) / label.ts;
        const double end_cycle = static_cast<double>(label.fault_end_sample) / label.ts +
                                 grace_seconds * cycles_per_second;
        bool true_positive = false;
        for (const auto& phase : phases) {
            if (!phase.tripped) continue;
            const double trip_cycle = static_cast<double>(phase.first_trip_cycle);
            const bool on_fault = phase.phase == label.faulted_phase &&
                                  trip_cycle >= start_cycle && trip_cycle <= end_cycle;
            if (on_fault)
                true_positive = true;
            else
                ++counts.fp;  // spurious trip on a healthy phase or out of window
        }
        if (true_positive)
            ++counts.tp;
        else
            ++counts.fn;
    }
    return counts;
}

}  // namespace hifd
