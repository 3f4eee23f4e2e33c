#pragma once

#include <cstdint>
#include <vector>

#include "hifd/autoencoder.hpp"
#include "hifd/pca_monitor.hpp"
#include "hifd/signal_prep.hpp"

namespace hifd {

// Everything cmd_train decides, persisted with the model for provenance and
// reproducibility.
struct PipelineConfig {
    int ts = 320;
    int m_vars = 32;
    std::vector<int> layer_dims{32, 15, 10, 15, 32};
    TrainConfig train;
    double train_fraction = 0.8;
    double cpv_target = 0.95;
    double alpha = 0.99;
    int threshold = 60;

    int gap() const { return m_vars > 0 ? ts / m_vars : 0; }
    void validate() const;
};

// The full trained detection pipeline: input scaling, autoencoder, residual
// monitor, counter threshold.
struct PipelineModel {
    PipelineConfig config;
    MinMaxScaler input_scaler;
    AutoencoderModel autoencoder;
    PcaMonitorModel monitor;

    void validate() const;
};

}  // namespace hifd
