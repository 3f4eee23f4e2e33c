#include "hifd/model.hpp"

#include <string>

namespace hifd {

void PipelineConfig::validate() const {
    if (ts < 2) fail(ErrorCode::config, "ts must be >= 2");
    if (m_vars < 2) fail(ErrorCode::config, "m_vars must be >= 2");
    if (ts % m_vars != 0)
        fail(ErrorCode::config, "ts (" + std::to_string(ts) + ") must be divisible by m_vars (" +
                                    std::to_string(m_vars) + ")");
    if (layer_dims.size() < 3) fail(ErrorCode::config, "layer_dims needs at least 3 entries");
    if (layer_dims.front() != m_vars || layer_dims.back() != m_vars)
        fail(ErrorCode::config, "layer_dims must start and end at m_vars");
    train.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        fail(ErrorCode::config, "train_fraction must be in (0, 1)");
    if (!(cpv_target > 0.0 && cpv_target <= 1.0))
        fail(ErrorCode::config, "cpv_target must be in (0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::config, "alpha must be in (0, 1)");
    if (threshold < 1) fail(ErrorCode::config, "threshold must be >= 1");
}

void PipelineModel::validate() const {
    config.validate();
    input_scaler.validate();
    autoencoder.validate();
    monitor.validate();
    if (input_scaler.size() != config.m_vars)
        fail(ErrorCode::shape_mismatch, "input scaler width does not match m_vars");
    if (autoencoder.input_dim() != config.m_vars)
        fail(ErrorCode::shape_mismatch, "autoencoder width does not match m_vars");
    if (monitor.var_count() != config.m_vars)
        fail(ErrorCode::shape_mismatch, "monitor width does not match m_vars");
    if (autoencoder.layer_dims != config.layer_dims)
        fail(ErrorCode::shape_mismatch, "autoencoder layers do not match the stored config");
}

}  // namespace hifd
