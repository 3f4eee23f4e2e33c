#pragma once
// Shared fixtures: a throwaway temp directory and a small but fully valid
// trained pipeline built on synthetic data.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hifd/model.hpp"
#include "hifd/pipeline.hpp"
#include "hifd/synthgen.hpp"

namespace testing {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::string templ =
            (std::filesystem::temp_directory_path() / ("hifd_" + tag + "_XXXXXX")).string();
        if (mkdtemp(templ.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
        path_ = templ;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const {
        return (std::filesystem::path(path_) / name).string();
    }

private:
    std::string path_;
};

inline hifd::LoadProfile tiny_profile(std::uint64_t seed = 11) {
    hifd::LoadProfile p = hifd::default_load_profile();
    p.seed = seed;
    return p;
}

inline hifd::PipelineConfig tiny_config() {
    hifd::PipelineConfig config;
    config.ts = 32;
    config.m_vars = 8;
    config.layer_dims = {8, 6, 4, 6, 8};
    config.train.epochs = 8;
    config.train.batch_size = 32;
    config.train.seed = 7;
    return config;
}

// ~2 s of 60 Hz load at 32 samples per cycle: 120 cycles per phase.
inline hifd::WaveformRecord tiny_recording(std::uint64_t seed = 11, double seconds = 2.0) {
    return hifd::gen_load(tiny_profile(seed), seconds, 32);
}

inline hifd::PipelineModel tiny_model() {
    const std::vector<hifd::WaveformRecord> recordings{tiny_recording(11), tiny_recording(12)};
    return hifd::train_pipeline(recordings, tiny_config()).model;
}

}  // namespace testing
