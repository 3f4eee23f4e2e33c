#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hifd/waveform.hpp"

namespace hifd {

struct Harmonic {
    int order = 0;          // >= 2
    double amplitude = 0.0; // relative to the fundamental
    double phase = 0.0;     // radians
};

// Normal-load waveform family: fundamental plus harmonics, slow amplitude
// modulation, white noise, sparse spikes, per-phase unbalance.
struct LoadProfile {
    double amplitude = 100.0;  // A
    double frequency_hz = 60.0;
    std::vector<Harmonic> harmonics;
    double modulation_depth = 0.0;  // [0, 1)
    double modulation_period_cycles = 120.0;
    double noise_std = 0.0;  // A
    double spike_rate_per_1000_cycles = 0.0;
    double spike_magnitude_min = 0.0;  // A
    double spike_magnitude_max = 0.0;
    std::array<double, 3> phase_scale{1.0, 1.0, 1.0};
    std::uint64_t seed = 0;

    void validate() const;
};

// Additive arc-like distortion window. Magnitude is a fraction of the
// carrier's fundamental amplitude.
struct HifConfig {
    double start_seconds = 100.0;
    double end_seconds = 160.0;
    std::string faulted_phase = "a";
    double magnitude = 0.06;
    double asymmetry = 0.7;        // negative half-cycle magnitude factor
    double randomness = 0.5;       // per-half-cycle magnitude scatter
    double buildup_cycles = 5.0;   // ramp from onset to full magnitude
    double dropout_probability = 0.05;  // per cycle
    std::uint64_t seed = 0;

    void validate(double recording_seconds) const;
};

WaveformRecord gen_load(const LoadProfile& profile, double duration_seconds, int ts);

// Copy of the record with the arc component added to the faulted phase inside
// [start, end); every other sample is bit-identical. Label metadata is set
// even at magnitude 0.
WaveformRecord inject_hif(const WaveformRecord& record, const HifConfig& config);

// A seeded variation of `base` (amplitude, harmonic mix, modulation, noise,
// unbalance all jittered) representing another day on the same feeder.
LoadProfile profile_variant(const LoadProfile& base, std::uint64_t seed);

LoadProfile default_load_profile();
HifConfig default_hif_config();

struct CorpusSpec {
    int n_load_recordings = 4;
    int n_fault_recordings = 12;
    int ts = 320;
    double duration_seconds = 180.0;
    std::uint64_t base_seed = 2024;
    LoadProfile base_profile = default_load_profile();
    HifConfig fault_template = default_hif_config();  // magnitude = severity grid max

    void validate() const;
};

struct CorpusCase {
    std::string name;
    bool is_fault = false;
    double severity = 0.0;  // fault magnitude, 0 for loads
    LoadProfile profile;    // fully seeded
    HifConfig fault;        // seeded; meaningful when is_fault
};

// Deterministic corpus plan: distinct load profiles plus fault cases over a
// severity grid that starts at exactly 0 (the undetectable end).
std::vector<CorpusCase> make_corpus_plan(const CorpusSpec& spec);

// Materialize one planned case.
WaveformRecord generate_case(const CorpusCase& c, const CorpusSpec& spec);

// Materialize the whole corpus in memory (tests and small configs).
std::vector<std::pair<CorpusCase, WaveformRecord>> make_corpus(const CorpusSpec& spec);

}  // namespace hifd
