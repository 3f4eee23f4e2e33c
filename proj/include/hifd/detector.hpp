#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hifd/model.hpp"
#include "hifd/waveform.hpp"

namespace hifd {

struct DetectorState {
    std::string phase;
    std::int64_t cycle_index = 0;
    int counter = 0;
    bool tripped = false;
};

struct DetectionOutput {
    std::int64_t cycle_index = 0;
    double phi = 0.0;
    double limit = 0.0;
    bool above_limit = false;
    int counter = 0;        // after this cycle's update
    bool trip_issued = false;  // latched trip state as of this cycle
};

struct DetectionEvent {
    enum class Kind { trip, skipped_cycle };
    Kind kind;
    std::string phase;
    std::int64_t cycle_index = 0;
    std::string detail;
};

struct PhaseSummary {
    std::string phase;
    bool tripped = false;
    std::int64_t first_trip_cycle = -1;
    std::int64_t cycles_processed = 0;
    std::int64_t cycles_skipped = 0;
};

struct RecordingResult {
    std::vector<std::string> phase_names;
    std::vector<std::vector<DetectionOutput>> traces;  // one per phase
    std::vector<PhaseSummary> summaries;
    std::vector<DetectionEvent> events;
};

// Counter update shared by the detector and its tests: +1 above the limit,
// -1 floored at 0 below it, trip latches at counter >= threshold.
void counter_step(DetectorState& state, bool above_limit, int threshold);

// One cycle (exactly ts samples) through the full pipeline: gap-sample,
// min-max scale, autoencoder residual, z-score, phi against the stored limit,
// then the counter update. Throws shape_mismatch on a wrong sample count and
// invalid_input on non-finite samples, leaving the state untouched.
DetectionOutput process_cycle(DetectorState& state, const PipelineModel& model,
                              std::span<const double> cycle, int threshold);

// process_cycle that absorbs invalid_input: the cycle is skipped, the cycle
// index still advances, counter and trip are unchanged, and a skipped_cycle
// event is appended.
std::optional<DetectionOutput> process_cycle_or_skip(DetectorState& state,
                                                     const PipelineModel& model,
                                                     std::span<const double> cycle, int threshold,
                                                     std::vector<DetectionEvent>& events);

// Every phase independently with a fresh state and the shared model. Bad
// cycles are logged, never fatal.
RecordingResult run_recording(const WaveformRecord& record, const PipelineModel& model,
                              int threshold);

// Counter to 0, trip cleared, cycle index preserved.
void reset(DetectorState& state);

}  // namespace hifd
