#include "hifd/autoencoder.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hifd/rng.hpp"

namespace hifd {

int AutoencoderModel::bottleneck_layer() const {
    int best = 1;
    for (std::size_t k = 1; k + 1 < layer_dims.size(); ++k)
        if (layer_dims[k] < layer_dims[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
    return best;
}

void AutoencoderModel::validate() const {
    if (layer_dims.size() < 3)
        fail(ErrorCode::invalid_argument, "autoencoder needs at least one hidden layer");
    if (layer_dims.front() != layer_dims.back())
        fail(ErrorCode::invalid_argument, "input and output dimensions must match");
    for (int d : layer_dims)
        if (d <= 0) fail(ErrorCode::invalid_argument, "layer dimensions must be positive");
    for (std::size_t k = 1; k + 1 < layer_dims.size(); ++k)
        if (layer_dims[k] >= layer_dims.front())
            fail(ErrorCode::invalid_argument,
                 "hidden dimension " + std::to_string(layer_dims[k]) +
                     " is not smaller than the input dimension " + std::to_string(layer_dims.front()));
    if (weights.size() + 1 != layer_dims.size() || biases.size() != weights.size())
        fail(ErrorCode::shape_mismatch, "weight/bias count does not match layer_dims");
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k].rows() != layer_dims[k + 1] || weights[k].cols() != layer_dims[k])
            fail(ErrorCode::shape_mismatch, "weight matrix " + std::to_string(k) + " has wrong shape");
        if (biases[k].size() != layer_dims[k + 1])
            fail(ErrorCode::shape_mismatch, "bias vector " + std::to_string(k) + " has wrong length");
    }
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) fail(ErrorCode::invalid_argument, "learning_rate must be > 0");
    if (epochs < 1) fail(ErrorCode::invalid_argument, "epochs must be >= 1");
    if (batch_size < 1) fail(ErrorCode::invalid_argument, "batch_size must be >= 1");
}

AdamState AdamState::zeros_like(const AutoencoderModel& model) {
    AdamState s;
    for (const auto& w : model.weights) {
        s.m_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        s.v_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& b : model.biases) {
        s.m_biases.push_back(Eigen::VectorXd::Zero(b.size()));
        s.v_biases.push_back(Eigen::VectorXd::Zero(b.size()));
    }
    return s;
}

AutoencoderModel init_autoencoder(const std::vector<int>& layer_dims, std::uint64_t seed) {
    AutoencoderModel model;
    model.layer_dims = layer_dims;
    Rng rng(seed);
    for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
        const int fan_in = layer_dims[k];
        const int fan_out = layer_dims[k + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r)
            for (int c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-bound, bound);
        model.weights.push_back(std::move(w));
        model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    model.validate();
    return model;
}

namespace {

// Activations for every layer; activations[0] is the input batch (rows are
// samples), activations[k] the post-activation output of layer k.
std::vector<Eigen::MatrixXd> forward_pass(const AutoencoderModel& model,
                                          const Eigen::MatrixXd& batch) {
    std::vector<Eigen::MatrixXd> activations;
    activations.reserve(model.weights.size() + 1);
    activations.push_back(batch);
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
        Eigen::MatrixXd z =
            (activations.back() * model.weights[k].transpose()).rowwise() + model.biases[k].transpose();
        if (k + 1 < model.weights.size()) z = z.cwiseMax(0.0);  // ReLU, linear output layer
        activations.push_back(std::move(z));
    }
    return activations;
}

void check_finite_input(const Eigen::MatrixXd& batch) {
    if (!batch.allFinite()) fail(ErrorCode::invalid_input, "non-finite value in autoencoder input");
}

}  // namespace

ForwardResult forward(const AutoencoderModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.input_dim())
        fail(ErrorCode::shape_mismatch, "input length " + std::to_string(x.size()) +
                                            " does not match input dimension " +
                                            std::to_string(model.input_dim()));
    check_finite_input(x.transpose());
    const auto activations = forward_pass(model, x.transpose());
    ForwardResult out;
    out.reconstruction = activations.back().row(0).transpose();
    out.bottleneck = activations[static_cast<std::size_t>(model.bottleneck_layer())].row(0).transpose();
    return out;
}

Eigen::MatrixXd reconstruct(const AutoencoderModel& model, const Eigen::MatrixXd& batch) {
    if (batch.cols() != model.input_dim())
        fail(ErrorCode::shape_mismatch, "batch column count does not match input dimension");
    check_finite_input(batch);
    return forward_pass(model, batch).back();
}

double loss(const Eigen::MatrixXd& batch, const Eigen::MatrixXd& reconstruction) {
    if (batch.rows() != reconstruction.rows() || batch.cols() != reconstruction.cols())
        fail(ErrorCode::shape_mismatch, "loss operands have different shapes");
    const double n = static_cast<double>(batch.rows()) * static_cast<double>(batch.cols());
    return (batch - reconstruction).squaredNorm() / n;
}

namespace {

Gradients backprop(const AutoencoderModel& model, const Eigen::MatrixXd& batch,
                   double* batch_loss) {
    const auto activations = forward_pass(model, batch);
    const double n = static_cast<double>(batch.rows()) * static_cast<double>(batch.cols());
    if (batch_loss) *batch_loss = (activations.back() - batch).squaredNorm() / n;

    Gradients grads;
    grads.weights.resize(model.weights.size());
    grads.biases.resize(model.biases.size());

    // dL/d(output) for the mean-over-samples-and-features squared error.
    Eigen::MatrixXd delta = 2.0 / n * (activations.back() - batch);
    for (std::size_t k = model.weights.size(); k-- > 0;) {
        if (k + 1 < model.weights.size()) {
            // ReLU gate; subgradient at exactly 0 is 0.
            delta = delta.cwiseProduct(
                (activations[k + 1].array() > 0.0).cast<double>().matrix());
        }
        grads.weights[k] = delta.transpose() * activations[k];
        grads.biases[k] = delta.colwise().sum().transpose();
        if (k > 0) delta = delta * model.weights[k];
    }
    return grads;
}

}  // namespace

Gradients backward(const AutoencoderModel& model, const Eigen::MatrixXd& batch) {
    if (batch.rows() == 0) fail(ErrorCode::insufficient_data, "backward needs a non-empty batch");
    if (batch.cols() != model.input_dim())
        fail(ErrorCode::shape_mismatch, "batch column count does not match input dimension");
    check_finite_input(batch);
    return backprop(model, batch, nullptr);
}

void adam_step(AutoencoderModel& model, const Gradients& grads, AdamState& state,
               const TrainConfig& config) {
    state.step += 1;
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));

    for (std::size_t k = 0; k < model.weights.size(); ++k) {
        state.m_weights[k] = b1 * state.m_weights[k] + (1.0 - b1) * grads.weights[k];
        state.v_weights[k] = b2 * state.v_weights[k] + (1.0 - b2) * grads.weights[k].cwiseAbs2();
        const Eigen::MatrixXd m_hat = state.m_weights[k] / bc1;
        const Eigen::MatrixXd v_hat = state.v_weights[k] / bc2;
        model.weights[k] -=
            config.learning_rate *
            (m_hat.array() / (v_hat.array().sqrt() + config.adam_epsilon)).matrix();

        state.m_biases[k] = b1 * state.m_biases[k] + (1.0 - b1) * grads.biases[k];
        state.v_biases[k] = b2 * state.v_biases[k] + (1.0 - b2) * grads.biases[k].cwiseAbs2();
        const Eigen::VectorXd mb_hat = state.m_biases[k] / bc1;
        const Eigen::VectorXd vb_hat = state.v_biases[k] / bc2;
        model.biases[k] -=
            config.learning_rate *
            (mb_hat.array() / (vb_hat.array().sqrt() + config.adam_epsilon)).matrix();
    }
}

TrainResult train(const Eigen::MatrixXd& train_matrix, const Eigen::MatrixXd& validation_matrix,
                  const std::vector<int>& layer_dims, const TrainConfig& config) {
    config.validate();
    if (layer_dims.empty() || train_matrix.cols() != layer_dims.front() ||
        validation_matrix.cols() != layer_dims.front())
        fail(ErrorCode::shape_mismatch, "matrix column count does not match layer_dims[0]");
    if (train_matrix.rows() == 0) fail(ErrorCode::insufficient_data, "empty training matrix");
    check_finite_input(train_matrix);
    check_finite_input(validation_matrix);

    TrainResult result;
    result.model = init_autoencoder(layer_dims, derive_seed(config.seed, 0));
    AdamState state = AdamState::zeros_like(result.model);
    Rng shuffle_rng(derive_seed(config.seed, 1));

    const std::int64_t n = train_matrix.rows();
    std::vector<std::int64_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_sq_err = 0.0;  // accumulated squared error over the epoch
        for (std::int64_t start = 0; start < n; start += config.batch_size) {
            const std::int64_t size = std::min<std::int64_t>(config.batch_size, n - start);
            Eigen::MatrixXd batch(size, train_matrix.cols());
            for (std::int64_t i = 0; i < size; ++i)
                batch.row(i) = train_matrix.row(order[static_cast<std::size_t>(start + i)]);

            double batch_loss = 0.0;
            const Gradients grads = backprop(result.model, batch, &batch_loss);
            if (!std::isfinite(batch_loss))
                fail(ErrorCode::divergence,
                     "training diverged at epoch " + std::to_string(epoch + 1));
            epoch_sq_err += batch_loss * static_cast<double>(size) * static_cast<double>(batch.cols());
            adam_step(result.model, grads, state, config);
        }

        EpochStats stats;
        stats.train_loss = epoch_sq_err / (static_cast<double>(n) * static_cast<double>(train_matrix.cols()));
        stats.validation_loss =
            validation_matrix.rows() > 0
                ? loss(validation_matrix, reconstruct(result.model, validation_matrix))
                : 0.0;
        if (!std::isfinite(stats.validation_loss))
            fail(ErrorCode::divergence, "training diverged at epoch " + std::to_string(epoch + 1));
        result.history.push_back(stats);
    }
    return result;
}

Eigen::MatrixXd residuals(const AutoencoderModel& model, const Eigen::MatrixXd& matrix) {
    return matrix - reconstruct(model, matrix);
}

}  // namespace hifd
