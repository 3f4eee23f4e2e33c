#include "hifd/waveform.hpp"

#include <string>

namespace hifd {

const PhaseSeries& WaveformRecord::phase(const std::string& name) const {
    for (const auto& p : phases) {
        if (p.name == name) return p;
    }
    fail(ErrorCode::invalid_argument, "no phase named '" + name + "' in recording");
}

void WaveformRecord::validate() const {
    if (ts <= 0) fail(ErrorCode::invalid_argument, "ts must be positive");
    if (phases.empty()) fail(ErrorCode::invalid_argument, "recording has no phases");
    const std::size_t len = phases.front().samples.size();
    for (const auto& p : phases) {
        if (p.samples.size() != len)
            fail(ErrorCode::shape_mismatch,
                 "phase '" + p.name + "' length differs from phase '" + phases.front().name + "'");
    }
    if (label) {
        if (label->fault_start_sample < 0 || label->fault_end_sample < label->fault_start_sample ||
            label->fault_end_sample > static_cast<std::int64_t>(len))
            fail(ErrorCode::invalid_argument, "fault window outside recording");
        phase(label->faulted_phase);  // must exist
    }
}

}  // namespace hifd
