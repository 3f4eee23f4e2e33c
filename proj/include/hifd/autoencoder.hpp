#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hifd/error.hpp"

namespace hifd {

// Fully-connected undercomplete autoencoder. Every affine layer except the
// last is followed by ReLU; the output layer is linear. weights[k] maps layer
// k activations (dims[k]) to layer k+1 pre-activations (dims[k+1]).
struct AutoencoderModel {
    std::vector<int> layer_dims;
    std::vector<Eigen::MatrixXd> weights;  // dims[k+1] x dims[k]
    std::vector<Eigen::VectorXd> biases;   // dims[k+1]

    int input_dim() const { return layer_dims.front(); }
    int layer_count() const { return static_cast<int>(weights.size()); }

    // Index (into layer_dims) of the narrowest layer; its activation is the
    // bottleneck code. First narrowest wins on ties.
    int bottleneck_layer() const;

    void validate() const;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 100;
    int batch_size = 32;
    std::uint64_t seed = 42;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;

    void validate() const;
};

struct ForwardResult {
    Eigen::VectorXd reconstruction;
    Eigen::VectorXd bottleneck;
};

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

struct AdamState {
    std::vector<Eigen::MatrixXd> m_weights, v_weights;
    std::vector<Eigen::VectorXd> m_biases, v_biases;
    std::int64_t step = 0;

    static AdamState zeros_like(const AutoencoderModel& model);
};

struct EpochStats {
    double train_loss = 0.0;
    double validation_loss = 0.0;
};

struct TrainResult {
    AutoencoderModel model;
    std::vector<EpochStats> history;
};

// Deterministic seeded construction: weights uniform in
// +/- sqrt(6/(fan_in+fan_out)), biases zero.
AutoencoderModel init_autoencoder(const std::vector<int>& layer_dims, std::uint64_t seed);

ForwardResult forward(const AutoencoderModel& model, const Eigen::VectorXd& x);

// Batch reconstruction, rows are samples.
Eigen::MatrixXd reconstruct(const AutoencoderModel& model, const Eigen::MatrixXd& batch);

// Mean over all samples and all features of the squared elementwise error.
double loss(const Eigen::MatrixXd& batch, const Eigen::MatrixXd& reconstruction);

// Exact gradients of loss() for the defined forward pass; the ReLU
// subgradient at 0 is taken as 0.
Gradients backward(const AutoencoderModel& model, const Eigen::MatrixXd& batch);

void adam_step(AutoencoderModel& model, const Gradients& grads, AdamState& state,
               const TrainConfig& config);

// Seeded init, per-epoch seeded shuffle, mini-batch Adam. The last partial
// batch is used. Throws ErrorCode::divergence naming the epoch if the loss
// goes non-finite.
TrainResult train(const Eigen::MatrixXd& train_matrix, const Eigen::MatrixXd& validation_matrix,
                  const std::vector<int>& layer_dims, const TrainConfig& config);

// E = X - X~ rowwise.
Eigen::MatrixXd residuals(const AutoencoderModel& model, const Eigen::MatrixXd& matrix);

}  // namespace hifd
