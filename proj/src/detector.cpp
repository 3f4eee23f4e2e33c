#include "hifd/detector.hpp"

#include <cmath>
#include <string>

#include "hifd/autoencoder.hpp"
#include "hifd/pca_monitor.hpp"
#include "hifd/signal_prep.hpp"

namespace hifd {

void counter_step(DetectorState& state, bool above_limit, int threshold) {
    if (threshold < 1) fail(ErrorCode::invalid_argument, "trip threshold must be >= 1");
    if (above_limit) {
        ++state.counter;
    } else if (state.counter > 0) {
        --state.counter;
    }
    if (state.counter >= threshold) state.tripped = true;
}

DetectionOutput process_cycle(DetectorState& state, const PipelineModel& model,
                              std::span<const double> cycle, int threshold) {
    const auto& config = model.config;
    if (cycle.size() != static_cast<std::size_t>(config.ts))
        fail(ErrorCode::shape_mismatch,
             "cycle has " + std::to_string(cycle.size()) + " samples, expected " +
                 std::to_string(config.ts));
    for (double v : cycle)
        if (!std::isfinite(v)) fail(ErrorCode::invalid_input, "non-finite sample in cycle");

    const Eigen::VectorXd raw = sample_cycle(cycle, config.ts, config.m_vars);
    const Eigen::VectorXd scaled = minmax_apply(model.input_scaler, raw);
    const Eigen::VectorXd recon = forward(model.autoencoder, scaled).reconstruction;
    const Eigen::VectorXd residual = scaled - recon;
    const Eigen::VectorXd standardized = zscore_apply(model.monitor.residual_scaler, residual);

    DetectionOutput out;
    out.phi = phi_index(model.monitor, standardized);
    out.limit = model.monitor.phi_limit;
    out.above_limit = out.phi > out.limit;

    counter_step(state, out.above_limit, threshold);
    out.cycle_index = state.cycle_index;
    out.counter = state.counter;
    out.trip_issued = state.tripped;
    ++state.cycle_index;
    return out;
}

std::optional<DetectionOutput> process_cycle_or_skip(DetectorState& state,
                                                     const PipelineModel& model,
                                                     std::span<const double> cycle, int threshold,
                                                     std::vector<DetectionEvent>& events) {
    try {
        return process_cycle(state, model, cycle, threshold);
    } catch (const Error& err) {
        if (err.code() != ErrorCode::invalid_input) throw;
        events.push_back({DetectionEvent::Kind::skipped_cycle, state.phase, state.cycle_index,
                          err.what()});
        ++state.cycle_index;
        return std::nullopt;
    }
}

RecordingResult run_recording(const WaveformRecord& record, const PipelineModel& model,
                              int threshold) {
    record.validate();
    const auto& config = model.config;
    const std::int64_t cycles = record.cycle_count();
    if (cycles < 1) fail(ErrorCode::insufficient_data, "recording shorter than one cycle");
    if (record.ts != config.ts)
        fail(ErrorCode::shape_mismatch, "recording ts does not match model ts");

    RecordingResult result;
    for (const auto& phase : record.phases) {
        DetectorState state;
        state.phase = phase.name;
        std::vector<DetectionOutput> trace;
        trace.reserve(static_cast<std::size_t>(cycles));
        PhaseSummary summary;
        summary.phase = phase.name;

        for (std::int64_t c = 0; c < cycles; ++c) {
            const bool was_tripped = state.tripped;
            std::span<const double> cycle(phase.samples.data() + c * config.ts,
                                          static_cast<std::size_t>(config.ts));
            auto out = process_cycle_or_skip(state, model, cycle, threshold, result.events);
            if (!out) {
                ++summary.cycles_skipped;
                continue;
            }
            ++summary.cycles_processed;
            trace.push_back(*out);
            if (state.tripped && !was_tripped) {
                summary.tripped = true;
                summary.first_trip_cycle = out->cycle_index;
                result.events.push_back({DetectionEvent::Kind::trip, phase.name, out->cycle_index,
                                         "counter reached " + std::to_string(state.counter)});
            }
        }
        summary.tripped = state.tripped;
        result.phase_names.push_back(phase.name);
        result.traces.push_back(std::move(trace));
        result.summaries.push_back(summary);
    }
    return result;
}

void reset(DetectorState& state) {
    state.counter = 0;
    state.tripped = false;
}

}  // namespace hifd
