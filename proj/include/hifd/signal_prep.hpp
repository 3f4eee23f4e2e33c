#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hifd/error.hpp"

namespace hifd {

// Shared floor for degenerate scale factors (constant columns).
inline constexpr double kScaleEpsilon = 1e-8;

// Cycle-sampled data matrix: one row per cycle, columns are the M in-cycle
// sampling positions spaced gap samples apart.
struct CycleMatrix {
    Eigen::MatrixXd data;  // N x M
    int ts = 0;
    int m_vars = 0;
    int gap = 0;  // ts / m_vars

    std::int64_t rows() const { return data.rows(); }
    int cols() const { return static_cast<int>(data.cols()); }
};

struct MinMaxScaler {
    Eigen::VectorXd min;
    Eigen::VectorXd max;

    int size() const { return static_cast<int>(min.size()); }
    void validate() const;
};

struct ZScoreScaler {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;  // floored at kScaleEpsilon

    int size() const { return static_cast<int>(mean.size()); }
    void validate() const;
};

// data[i][j] = signal[i*ts + j*gap], gap = ts/M. Trailing samples beyond the
// last complete cycle are dropped.
CycleMatrix augment(std::span<const double> signal, int ts, int m_vars);

// Gap-sample a single cycle (exactly ts samples) to an M-vector.
Eigen::VectorXd sample_cycle(std::span<const double> cycle, int ts, int m_vars);

MinMaxScaler minmax_fit(const Eigen::MatrixXd& matrix);

// (x - min) / (max - min) per column; a column whose training range is below
// kScaleEpsilon maps every input to 0. No clamping: out-of-range online
// values are fault evidence and pass through.
Eigen::MatrixXd minmax_apply(const MinMaxScaler& scaler, const Eigen::MatrixXd& matrix);
Eigen::VectorXd minmax_apply(const MinMaxScaler& scaler, const Eigen::VectorXd& row);

// Column mean and sample standard deviation (divisor N-1), std floored at
// kScaleEpsilon. Requires at least 2 rows.
ZScoreScaler zscore_fit(const Eigen::MatrixXd& matrix);
Eigen::MatrixXd zscore_apply(const ZScoreScaler& scaler, const Eigen::MatrixXd& matrix);
Eigen::VectorXd zscore_apply(const ZScoreScaler& scaler, const Eigen::VectorXd& row);

// Row-wise split after a seeded shuffle. Train size rounds to nearest and is
// clamped so both parts are non-empty.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split(const Eigen::MatrixXd& matrix,
                                                  double train_fraction,
                                                  std::uint64_t seed);

}  // namespace hifd
