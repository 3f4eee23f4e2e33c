#include "hifd/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "hifd/rng.hpp"

namespace hifd {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// a = 0, b lags by 120 degrees, c leads.
constexpr std::array<double, 3> kPhaseOffsets{0.0, -kTwoPi / 3.0, kTwoPi / 3.0};
constexpr std::array<const char*, 3> kPhaseNames{"a", "b", "c"};

int phase_index(const std::string& name) {
    for (int i = 0; i < 3; ++i)
        if (name == kPhaseNames[i]) return i;
    fail(ErrorCode::invalid_argument, "faulted_phase must be one of a, b, c");
}

}  // namespace

void LoadProfile::validate() const {
    if (!(amplitude > 0.0)) fail(ErrorCode::config, "load amplitude must be positive");
    if (!(frequency_hz > 0.0)) fail(ErrorCode::config, "frequency must be positive");
    for (const auto& harm : harmonics) {
        if (harm.order < 2) fail(ErrorCode::config, "harmonic order must be >= 2");
        if (harm.amplitude < 0.0) fail(ErrorCode::config, "harmonic amplitude must be >= 0");
    }
    if (modulation_depth < 0.0 || modulation_depth >= 1.0)
        fail(ErrorCode::config, "modulation_depth must be in [0, 1)");
    if (!(modulation_period_cycles > 0.0))
        fail(ErrorCode::config, "modulation_period_cycles must be positive");
    if (noise_std < 0.0) fail(ErrorCode::config, "noise_std must be >= 0");
    if (spike_rate_per_1000_cycles < 0.0) fail(ErrorCode::config, "spike rate must be >= 0");
    if (spike_magnitude_min < 0.0 || spike_magnitude_max < spike_magnitude_min)
        fail(ErrorCode::config, "spike magnitude range must satisfy 0 <= min <= max");
    for (double s : phase_scale)
        if (!(s > 0.0)) fail(ErrorCode::config, "phase_scale entries must be positive");
}

void HifConfig::validate(double recording_seconds) const {
    if (start_seconds < 0.0 || !(end_seconds > start_seconds))
        fail(ErrorCode::config, "fault window must satisfy 0 <= start < end");
    if (end_seconds > recording_seconds + 1e-9)
        fail(ErrorCode::config, "fault window extends past the recording");
    phase_index(faulted_phase);
    if (magnitude < 0.0) fail(ErrorCode::config, "fault magnitude must be >= 0");
    if (asymmetry < 0.0 || asymmetry > 1.0) fail(ErrorCode::config, "asymmetry must be in [0, 1]");
    if (randomness < 0.0 || randomness >= 1.0)
        fail(ErrorCode::config, "randomness must be in [0, 1)");
    if (buildup_cycles < 0.0) fail(ErrorCode::config, "buildup_cycles must be >= 0");
    if (dropout_probability < 0.0 || dropout_probability >= 1.0)
        fail(ErrorCode::config, "dropout_probability must be in [0, 1)");
}

WaveformRecord gen_load(const LoadProfile& profile, double duration_seconds, int ts) {
    profile.validate();
    if (ts < 2) fail(ErrorCode::invalid_argument, "ts must be >= 2");
    if (!(duration_seconds > 0.0)) fail(ErrorCode::invalid_argument, "duration must be positive");
    const auto n_cycles = std::llround(duration_seconds * profile.frequency_hz);
    if (n_cycles < 1) fail(ErrorCode::invalid_argument, "duration shorter than one cycle");
    const std::int64_t n_samples = n_cycles * ts;
    const double sample_rate = ts * profile.frequency_hz;
    const double omega = kTwoPi * profile.frequency_hz;
    const double mod_omega = kTwoPi * profile.frequency_hz / profile.modulation_period_cycles;

    WaveformRecord record;
    record.ts = ts;
    record.sample_rate_hz = sample_rate;

    for (int p = 0; p < 3; ++p) {
        Rng noise_rng(derive_seed(profile.seed, 10 + static_cast<std::uint64_t>(p)));
        Rng spike_rng(derive_seed(profile.seed, 20 + static_cast<std::uint64_t>(p)));
        const double offset = kPhaseOffsets[static_cast<std::size_t>(p)];
        const double peak = profile.amplitude * profile.phase_scale[static_cast<std::size_t>(p)];

        PhaseSeries series;
        series.name = kPhaseNames[static_cast<std::size_t>(p)];
        series.samples.resize(static_cast<std::size_t>(n_samples));

        for (std::int64_t i = 0; i < n_samples; ++i) {
            const double t = static_cast<double>(i) / sample_rate;
            const double angle = omega * t + offset;
            double v = std::sin(angle);
            for (const auto& harm : profile.harmonics)
                v += harm.amplitude * std::sin(harm.order * angle + harm.phase);
            v *= peak * (1.0 + profile.modulation_depth * std::sin(mod_omega * t));
            if (profile.noise_std > 0.0) v += profile.noise_std * noise_rng.normal();
            series.samples[static_cast<std::size_t>(i)] = v;
        }

        if (profile.spike_rate_per_1000_cycles > 0.0) {
            const double per_cycle = profile.spike_rate_per_1000_cycles / 1000.0;
            for (std::int64_t c = 0; c < n_cycles; ++c) {
                if (spike_rng.uniform01() >= per_cycle) continue;
                const std::int64_t pos =
                    c * ts + static_cast<std::int64_t>(spike_rng.below(static_cast<std::uint64_t>(ts)));
                const double mag =
                    spike_rng.uniform(profile.spike_magnitude_min, profile.spike_magnitude_max);
                const double sign = spike_rng.uniform01() < 0.5 ? -1.0 : 1.0;
                series.samples[static_cast<std::size_t>(pos)] += sign * mag;
            }
        }
        record.phases.push_back(std::move(series));
    }
    record.validate();
    return record;
}

WaveformRecord inject_hif(const WaveformRecord& record, const HifConfig& config) {
    record.validate();
    config.validate(record.seconds());
    if (record.sample_rate_hz <= 0.0)
        fail(ErrorCode::invalid_argument, "record needs a positive sample rate");

    WaveformRecord out = record;
    const int target = phase_index(config.faulted_phase);
    PhaseSeries* faulted = nullptr;
    for (auto& series : out.phases)
        if (series.name == kPhaseNames[static_cast<std::size_t>(target)]) faulted = &series;
    if (faulted == nullptr)
        fail(ErrorCode::invalid_argument, "record has no phase named " + config.faulted_phase);

    const double sample_rate = record.sample_rate_hz;
    const std::int64_t n = record.length();
    const std::int64_t start =
        std::clamp<std::int64_t>(std::llround(config.start_seconds * sample_rate), 0, n);
    const std::int64_t end =
        std::clamp<std::int64_t>(std::llround(config.end_seconds * sample_rate), start, n);

    out.label = FaultLabel{start, end, config.faulted_phase};
    if (config.magnitude == 0.0 || start == end) return out;

    // Arc level is tied to the carrier's own pre-fault RMS so severity is a
    // dimensionless fraction of the load current.
    std::int64_t rms_count = start >= record.ts ? start : n;
    double sum_sq = 0.0;
    for (std::int64_t i = 0; i < rms_count; ++i) {
        const double v = faulted->samples[static_cast<std::size_t>(i)];
        sum_sq += v * v;
    }
    const double rms = std::sqrt(sum_sq / static_cast<double>(rms_count));
    const double peak_level = config.magnitude * std::sqrt(2.0) * rms;

    const double frequency = sample_rate / record.ts;
    const double omega = kTwoPi * frequency;
    const double offset = kPhaseOffsets[static_cast<std::size_t>(target)];

    Rng mag_rng(derive_seed(config.seed, 0));
    Rng drop_rng(derive_seed(config.seed, 1));

    std::int64_t half_id = std::numeric_limits<std::int64_t>::min();
    std::int64_t cycle_id = std::numeric_limits<std::int64_t>::min();
    double half_factor = 1.0;
    bool cycle_active = true;

    for (std::int64_t i = start; i < end; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        const double theta = omega * t + offset;

        const std::int64_t cyc = static_cast<std::int64_t>(std::floor(theta / kTwoPi));
        if (cyc != cycle_id) {
            cycle_id = cyc;
            cycle_active = drop_rng.uniform01() >= config.dropout_probability;
        }
        const std::int64_t half = static_cast<std::int64_t>(std::floor(theta / kPi));
        if (half != half_id) {
            half_id = half;
            half_factor =
                std::max(0.0, 1.0 + config.randomness * (2.0 * mag_rng.uniform01() - 1.0));
        }
        if (!cycle_active) continue;

        const double s = std::sin(theta);
        double level = peak_level * half_factor * s * std::fabs(s);
        if (s < 0.0) level *= config.asymmetry;
        if (config.buildup_cycles > 0.0) {
            const double cycles_in = static_cast<double>(i - start) / record.ts;
            level *= std::min(1.0, cycles_in / config.buildup_cycles);
        }
        faulted->samples[static_cast<std::size_t>(i)] += level;
    }
    return out;
}

LoadProfile profile_variant(const LoadProfile& base, std::uint64_t seed) {
    base.validate();
    // Day-to-day drift of one feeder, not a different feeder: the jitter must
    // stay small enough that a monitor trained on a few variants generalizes
    // to the rest of the family.
    Rng rng(derive_seed(seed, 99));
    LoadProfile v = base;
    v.amplitude = base.amplitude * rng.uniform(0.98, 1.02);
    for (auto& harm : v.harmonics) {
        harm.amplitude *= rng.uniform(0.95, 1.05);
        harm.phase += rng.uniform(-0.02, 0.02);
    }
    v.modulation_depth = std::min(0.9, base.modulation_depth * rng.uniform(0.9, 1.1));
    v.modulation_period_cycles = base.modulation_period_cycles * rng.uniform(0.95, 1.05);
    v.noise_std = base.noise_std * rng.uniform(0.95, 1.05);
    v.spike_rate_per_1000_cycles = base.spike_rate_per_1000_cycles * rng.uniform(0.8, 1.2);
    for (auto& s : v.phase_scale) s *= rng.uniform(0.995, 1.005);
    v.seed = seed;
    return v;
}

LoadProfile default_load_profile() {
    LoadProfile p;
    p.amplitude = 100.0;
    p.frequency_hz = 60.0;
    p.harmonics = {{3, 0.08, 0.4}, {5, 0.05, 1.1}, {7, 0.02, 2.3}};
    p.modulation_depth = 0.03;
    p.modulation_period_cycles = 120.0;
    p.noise_std = 0.5;
    p.spike_rate_per_1000_cycles = 2.0;
    p.spike_magnitude_min = 5.0;
    p.spike_magnitude_max = 15.0;
    p.phase_scale = {1.0, 0.98, 1.02};
    p.seed = 1;
    return p;
}

HifConfig default_hif_config() {
    HifConfig c;
    c.start_seconds = 100.0;
    c.end_seconds = 160.0;
    c.faulted_phase = "a";
    c.magnitude = 0.06;
    c.asymmetry = 0.7;
    c.randomness = 0.5;
    c.buildup_cycles = 5.0;
    c.dropout_probability = 0.05;
    c.seed = 7;
    return c;
}

void CorpusSpec::validate() const {
    if (n_load_recordings < 1) fail(ErrorCode::config, "need at least one load recording");
    if (n_fault_recordings < 1) fail(ErrorCode::config, "need at least one fault recording");
    if (ts < 2) fail(ErrorCode::config, "ts must be >= 2");
    if (!(duration_seconds > 0.0)) fail(ErrorCode::config, "duration must be positive");
    base_profile.validate();
    fault_template.validate(duration_seconds);
}

std::vector<CorpusCase> make_corpus_plan(const CorpusSpec& spec) {
    spec.validate();
    std::vector<CorpusCase> plan;
    plan.reserve(static_cast<std::size_t>(spec.n_load_recordings + spec.n_fault_recordings));

    for (int i = 0; i < spec.n_load_recordings; ++i) {
        CorpusCase c;
        char name[32];
        std::snprintf(name, sizeof(name), "load_%02d", i);
        c.name = name;
        c.is_fault = false;
        const std::uint64_t seed = derive_seed(spec.base_seed, 1000 + static_cast<std::uint64_t>(i));
        if (i == 0) {
            c.profile = spec.base_profile;
            c.profile.seed = seed;
        } else {
            c.profile = profile_variant(spec.base_profile, seed);
        }
        plan.push_back(std::move(c));
    }

    const int base_phase = phase_index(spec.fault_template.faulted_phase);
    for (int j = 0; j < spec.n_fault_recordings; ++j) {
        CorpusCase c;
        char name[32];
        std::snprintf(name, sizeof(name), "fault_%02d", j);
        c.name = name;
        c.is_fault = true;
        // Severity grid spans [0, magnitude] with exact endpoints so the
        // corpus always contains the undetectable end of the range.
        c.severity = spec.n_fault_recordings > 1
                         ? spec.fault_template.magnitude *
                               (static_cast<double>(j) / (spec.n_fault_recordings - 1))
                         : spec.fault_template.magnitude;
        c.profile =
            profile_variant(spec.base_profile, derive_seed(spec.base_seed, 3000 + static_cast<std::uint64_t>(j)));
        c.fault = spec.fault_template;
        c.fault.magnitude = c.severity;
        c.fault.faulted_phase = kPhaseNames[static_cast<std::size_t>((base_phase + j) % 3)];
        c.fault.seed = derive_seed(spec.base_seed, 4000 + static_cast<std::uint64_t>(j));
        plan.push_back(std::move(c));
    }
    return plan;
}

WaveformRecord generate_case(const CorpusCase& c, const CorpusSpec& spec) {
    WaveformRecord record = gen_load(c.profile, spec.duration_seconds, spec.ts);
    if (c.is_fault) record = inject_hif(record, c.fault);
    return record;
}

std::vector<std::pair<CorpusCase, WaveformRecord>> make_corpus(const CorpusSpec& spec) {
    std::vector<std::pair<CorpusCase, WaveformRecord>> corpus;
    for (const auto& c : make_corpus_plan(spec)) corpus.emplace_back(c, generate_case(c, spec));
    return corpus;
}

}  // namespace hifd
