#pragma once

#include <Eigen/Dense>

#include "hifd/signal_prep.hpp"

namespace hifd {

// PCA monitoring model over standardized autoencoder residuals. Holds the
// residual standardization, the leading-eigenvector loadings, the full
// descending eigenvalue spectrum, and the chi-square control limits for the
// T2, SPE and combined indices.
struct PcaMonitorModel {
    ZScoreScaler residual_scaler;
    Eigen::MatrixXd loadings;     // M x l, orthonormal columns
    Eigen::VectorXd eigenvalues;  // length M, descending, nonnegative
    int n_components = 0;         // l, 1 <= l < M
    double g = 0.0;               // sum(lambda_i^2, i>l) / sum(lambda_i, i>l)
    double h = 0.0;               // sum(lambda_i, i>l)^2 / sum(lambda_i^2, i>l)
    double alpha = 0.0;
    double t2_limit = 0.0;
    double spe_limit = 0.0;
    double phi_limit = 0.0;

    int var_count() const { return static_cast<int>(eigenvalues.size()); }
    void validate() const;
};

// Cumulative percent variance of the leading l eigenvalues.
double cpv(const Eigen::VectorXd& eigenvalues, int l);

// Standardize raw residuals, eigendecompose their sample covariance
// (divisor N-1), pick l by CPV capped to keep a non-empty residual subspace,
// and derive the three chi-square limits at confidence alpha.
PcaMonitorModel fit_monitor(const Eigen::MatrixXd& residual_matrix, double cpv_target,
                            double alpha);

// Indices take an already-standardized residual vector of length M.
double t2_index(const PcaMonitorModel& model, const Eigen::VectorXd& e);
double spe_index(const PcaMonitorModel& model, const Eigen::VectorXd& e);
double phi_index(const PcaMonitorModel& model, const Eigen::VectorXd& e);

}  // namespace hifd
