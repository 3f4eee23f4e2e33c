#include "hifd/signal_prep.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hifd/rng.hpp"

namespace hifd {

void MinMaxScaler::validate() const {
    if (min.size() == 0 || min.size() != max.size())
        fail(ErrorCode::shape_mismatch, "min-max scaler vectors malformed");
    for (int j = 0; j < size(); ++j) {
        if (!(max[j] >= min[j]))
            fail(ErrorCode::invalid_argument,
                 "min-max scaler column " + std::to_string(j) + " has max < min");
    }
}

void ZScoreScaler::validate() const {
    if (mean.size() == 0 || mean.size() != std.size())
        fail(ErrorCode::shape_mismatch, "z-score scaler vectors malformed");
    for (int j = 0; j < size(); ++j) {
        if (!(std[j] >= kScaleEpsilon))
            fail(ErrorCode::invalid_argument,
                 "z-score scaler column " + std::to_string(j) + " std below floor");
    }
}

CycleMatrix augment(std::span<const double> signal, int ts, int m_vars) {
    if (ts <= 0 || m_vars <= 0 || ts % m_vars != 0)
        fail(ErrorCode::invalid_argument,
             "m_vars (" + std::to_string(m_vars) + ") must divide ts (" + std::to_string(ts) + ")");
    if (std::cmp_less(signal.size(), ts))
        fail(ErrorCode::insufficient_data, "signal shorter than one cycle");

    const int gap = ts / m_vars;
    const std::int64_t n_cycles = static_cast<std::int64_t>(signal.size()) / ts;

    CycleMatrix out;
    out.ts = ts;
    out.m_vars = m_vars;
    out.gap = gap;
    out.data.resize(n_cycles, m_vars);
    for (std::int64_t i = 0; i < n_cycles; ++i)
        for (int j = 0; j < m_vars; ++j)
            out.data(i, j) = signal[static_cast<std::size_t>(i) * ts + static_cast<std::size_t>(j) * gap];
    return out;
}

Eigen::VectorXd sample_cycle(std::span<const double> cycle, int ts, int m_vars) {
    if (std::cmp_not_equal(cycle.size(), ts))
        fail(ErrorCode::shape_mismatch, "cycle must have exactly ts samples");
    if (m_vars <= 0 || ts % m_vars != 0)
        fail(ErrorCode::invalid_argument, "m_vars must divide ts");
    const int gap = ts / m_vars;
    Eigen::VectorXd x(m_vars);
    for (int j = 0; j < m_vars; ++j) x[j] = cycle[static_cast<std::size_t>(j) * gap];
    return x;
}

MinMaxScaler minmax_fit(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() == 0 || matrix.cols() == 0)
        fail(ErrorCode::insufficient_data, "cannot fit min-max scaler on an empty matrix");
    MinMaxScaler s;
    s.min = matrix.colwise().minCoeff();
    s.max = matrix.colwise().maxCoeff();
    return s;
}

Eigen::MatrixXd minmax_apply(const MinMaxScaler& scaler, const Eigen::MatrixXd& matrix) {
    if (matrix.cols() != scaler.size())
        fail(ErrorCode::shape_mismatch, "column count does not match min-max scaler");
    Eigen::MatrixXd out(matrix.rows(), matrix.cols());
    for (int j = 0; j < scaler.size(); ++j) {
        const double range = scaler.max[j] - scaler.min[j];
        if (range < kScaleEpsilon)
            out.col(j).setZero();
        else
            out.col(j) = (matrix.col(j).array() - scaler.min[j]) / range;
    }
    return out;
}

Eigen::VectorXd minmax_apply(const MinMaxScaler& scaler, const Eigen::VectorXd& row) {
    Eigen::MatrixXd m = minmax_apply(scaler, Eigen::MatrixXd(row.transpose()));
    return m.row(0).transpose();
}

ZScoreScaler zscore_fit(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() < 2)
        fail(ErrorCode::insufficient_data, "z-score fit needs at least 2 rows");
    const auto n = static_cast<double>(matrix.rows());
    ZScoreScaler s;
    s.mean = matrix.colwise().mean();
    s.std.resize(matrix.cols());
    for (int j = 0; j < matrix.cols(); ++j) {
        const double var = (matrix.col(j).array() - s.mean[j]).square().sum() / (n - 1.0);
        s.std[j] = std::max(std::sqrt(var), kScaleEpsilon);
    }
    return s;
}

Eigen::MatrixXd zscore_apply(const ZScoreScaler& scaler, const Eigen::MatrixXd& matrix) {
    if (matrix.cols() != scaler.size())
        fail(ErrorCode::shape_mismatch, "column count does not match z-score scaler");
    Eigen::MatrixXd out(matrix.rows(), matrix.cols());
    for (int j = 0; j < scaler.size(); ++j)
        out.col(j) = (matrix.col(j).array() - scaler.mean[j]) / scaler.std[j];
    return out;
}

Eigen::VectorXd zscore_apply(const ZScoreScaler& scaler, const Eigen::VectorXd& row) {
    Eigen::MatrixXd m = zscore_apply(scaler, Eigen::MatrixXd(row.transpose()));
    return m.row(0).transpose();
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split(const Eigen::MatrixXd& matrix,
                                                  double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        fail(ErrorCode::invalid_argument, "train_fraction must be in (0, 1)");
    const std::int64_t n = matrix.rows();
    if (n < 2) fail(ErrorCode::insufficient_data, "split needs at least 2 rows");

    std::vector<std::int64_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    std::int64_t n_train = std::llround(train_fraction * static_cast<double>(n));
    n_train = std::max<std::int64_t>(1, std::min(n - 1, n_train));

    Eigen::MatrixXd train(n_train, matrix.cols());
    Eigen::MatrixXd validation(n - n_train, matrix.cols());
    for (std::int64_t i = 0; i < n_train; ++i) train.row(i) = matrix.row(order[static_cast<std::size_t>(i)]);
    for (std::int64_t i = n_train; i < n; ++i)
        validation.row(i - n_train) = matrix.row(order[static_cast<std::size_t>(i)]);
    return {std::move(train), std::move(validation)};
}

}  // namespace hifd
