#pragma once

#include <string>
#include <vector>

#include "hifd/detector.hpp"
#include "hifd/waveform.hpp"

namespace hifd {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& context);

// Waveform CSV, header `sample_index,phase_a,phase_b,phase_c`, one row per
// sample. The label sidecar (same base filename, .meta suffix) carries ts,
// sample rate and the fault window.
void save_waveform_csv(const WaveformRecord& record, const std::string& csv_path);
WaveformRecord load_waveform_csv(const std::string& csv_path);

std::string meta_path_for(const std::string& csv_path);

// Detection trace CSV: `cycle_index,phi,limit,above,counter,trip`.
void save_trace_csv(const std::vector<DetectionOutput>& trace, const std::string& path);

// Line-delimited JSON event records.
void save_event_log(const std::vector<DetectionEvent>& events, double seconds_per_cycle,
                    const std::string& path);

}  // namespace hifd
