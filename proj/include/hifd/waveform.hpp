#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hifd/error.hpp"

namespace hifd {

struct FaultLabel {
    std::int64_t fault_start_sample = 0;
    std::int64_t fault_end_sample = 0;  // exclusive
    std::string faulted_phase;          // "a", "b" or "c"
};

struct PhaseSeries {
    std::string name;
    std::vector<double> samples;
};

// A multi-phase raw current recording. All phases share one length and one
// samples-per-cycle setting; cycle k of phase p is samples [k*ts, (k+1)*ts).
struct WaveformRecord {
    int ts = 0;                   // samples per cycle
    double sample_rate_hz = 0.0;  // ts * fundamental frequency
    std::vector<PhaseSeries> phases;
    std::optional<FaultLabel> label;

    std::int64_t length() const {
        return phases.empty() ? 0 : static_cast<std::int64_t>(phases.front().samples.size());
    }

    std::int64_t cycle_count() const { return ts > 0 ? length() / ts : 0; }

    double seconds() const { return sample_rate_hz > 0 ? length() / sample_rate_hz : 0.0; }

    const PhaseSeries& phase(const std::string& name) const;

    void validate() const;
};

}  // namespace hifd
