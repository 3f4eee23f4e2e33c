#include "hifd/pca_monitor.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "hifd/chi2.hpp"

namespace hifd {

void PcaMonitorModel::validate() const {
    residual_scaler.validate();
    const int m = var_count();
    if (m < 2) fail(ErrorCode::invalid_argument, "monitor needs at least 2 variables");
    if (residual_scaler.size() != m)
        fail(ErrorCode::shape_mismatch, "residual scaler length does not match eigenvalue count");
    if (n_components < 1 || n_components >= m)
        fail(ErrorCode::invalid_argument, "n_components must satisfy 1 <= l < M");
    if (loadings.rows() != m || loadings.cols() != n_components)
        fail(ErrorCode::shape_mismatch, "loadings must be M x l");

    const Eigen::MatrixXd gram = loadings.transpose() * loadings;
    const double ortho_err =
        (gram - Eigen::MatrixXd::Identity(n_components, n_components)).cwiseAbs().maxCoeff();
    if (ortho_err > 1e-10)
        fail(ErrorCode::invalid_argument, "loading columns are not orthonormal");

    double tail_sum = 0.0;
    for (int i = 0; i < m; ++i) {
        if (eigenvalues[i] < 0.0)
            fail(ErrorCode::invalid_argument, "negative eigenvalue in monitor model");
        if (i > 0 && eigenvalues[i] > eigenvalues[i - 1] + 1e-12)
            fail(ErrorCode::invalid_argument, "eigenvalues are not sorted descending");
        if (i >= n_components) tail_sum += eigenvalues[i];
        if (i < n_components && eigenvalues[i] <= 0.0)
            fail(ErrorCode::degenerate_data, "zero eigenvalue among leading components");
    }
    if (!(tail_sum > 0.0)) fail(ErrorCode::degenerate_data, "empty residual subspace");
    if (!(g > 0.0) || !(h > 0.0)) fail(ErrorCode::invalid_argument, "g and h must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::invalid_argument, "alpha must be in (0,1)");
    if (!(t2_limit > 0.0 && spe_limit > 0.0 && phi_limit > 0.0))
        fail(ErrorCode::invalid_argument, "control limits must be positive");
}

double cpv(const Eigen::VectorXd& eigenvalues, int l) {
    const int m = static_cast<int>(eigenvalues.size());
    if (l < 1 || l > m) fail(ErrorCode::invalid_argument, "cpv requires 1 <= l <= M");
    double total = 0.0, leading = 0.0;
    for (int i = 0; i < m; ++i) {
        if (eigenvalues[i] < 0.0) fail(ErrorCode::invalid_argument, "cpv requires nonnegative eigenvalues");
        total += eigenvalues[i];
        if (i < l) leading += eigenvalues[i];
    }
    if (!(total > 0.0)) fail(ErrorCode::degenerate_data, "all eigenvalues are zero");
    return leading / total;
}

PcaMonitorModel fit_monitor(const Eigen::MatrixXd& residual_matrix, double cpv_target,
                            double alpha) {
    const int m = static_cast<int>(residual_matrix.cols());
    const auto n = residual_matrix.rows();
    if (m < 2) fail(ErrorCode::invalid_argument, "monitor fit needs at least 2 variables");
    if (n < m + 1)
        fail(ErrorCode::insufficient_data,
             "monitor fit needs at least M+1 rows, got " + std::to_string(n));
    if (!(cpv_target > 0.0 && cpv_target <= 1.0))
        fail(ErrorCode::invalid_argument, "cpv_target must be in (0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::invalid_argument, "alpha must be in (0, 1)");

    PcaMonitorModel model;
    model.residual_scaler = zscore_fit(residual_matrix);
    const Eigen::MatrixXd standardized = zscore_apply(model.residual_scaler, residual_matrix);
    const Eigen::MatrixXd covariance =
        standardized.transpose() * standardized / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
    if (solver.info() != Eigen::Success)
        fail(ErrorCode::degenerate_data, "covariance eigendecomposition failed");

    // Eigen returns ascending order; flip to descending.
    Eigen::VectorXd lambda(m);
    Eigen::MatrixXd vectors(m, m);
    for (int i = 0; i < m; ++i) {
        lambda[i] = solver.eigenvalues()[m - 1 - i];
        vectors.col(i) = solver.eigenvectors().col(m - 1 - i);
    }

    // Deterministic sign: largest-magnitude component of each vector positive.
    for (int i = 0; i < m; ++i) {
        int arg = 0;
        for (int r = 1; r < m; ++r)
            if (std::fabs(vectors(r, i)) > std::fabs(vectors(arg, i))) arg = r;
        if (vectors(arg, i) < 0.0) vectors.col(i) = -vectors.col(i);
    }

    const double clamp = lambda[0] > 0.0 ? 1e-12 * lambda[0] : 0.0;
    int nonzero = 0;
    for (int i = 0; i < m; ++i) {
        if (lambda[i] < clamp) lambda[i] = 0.0;
        if (lambda[i] > 0.0) ++nonzero;
    }
    if (nonzero < 2)
        fail(ErrorCode::degenerate_data,
             "residual covariance has fewer than 2 nonzero eigenvalues");

    int l = 1;
    while (l < m && cpv(lambda, l) < cpv_target) ++l;
    l = std::min(l, m - 1);
    auto tail_sum = [&](int k) {
        double s = 0.0;
        for (int i = k; i < m; ++i) s += lambda[i];
        return s;
    };
    while (l > 1 && !(tail_sum(l) > 0.0)) --l;
    if (!(tail_sum(l) > 0.0))
        fail(ErrorCode::degenerate_data, "CPV target leaves an empty residual subspace");

    double sum_tail = 0.0, sum_tail_sq = 0.0;
    for (int i = l; i < m; ++i) {
        sum_tail += lambda[i];
        sum_tail_sq += lambda[i] * lambda[i];
    }
    model.eigenvalues = lambda;
    model.loadings = vectors.leftCols(l);
    model.n_components = l;
    model.g = sum_tail_sq / sum_tail;
    model.h = sum_tail * sum_tail / sum_tail_sq;
    model.alpha = alpha;
    model.t2_limit = chi2_quantile(static_cast<double>(l), alpha);
    model.spe_limit = model.g * chi2_quantile(model.h, alpha);
    model.phi_limit = chi2_quantile(static_cast<double>(l) + model.h, alpha);
    model.validate();
    return model;
}

double t2_index(const PcaMonitorModel& model, const Eigen::VectorXd& e) {
    if (e.size() != model.var_count())
        fail(ErrorCode::shape_mismatch, "residual vector length does not match model");
    const Eigen::VectorXd scores = model.loadings.transpose() * e;
    double t2 = 0.0;
    for (int i = 0; i < model.n_components; ++i) t2 += scores[i] * scores[i] / model.eigenvalues[i];
    return t2;
}

double spe_index(const PcaMonitorModel& model, const Eigen::VectorXd& e) {
    if (e.size() != model.var_count())
        fail(ErrorCode::shape_mismatch, "residual vector length does not match model");
    const Eigen::VectorXd projected = model.loadings * (model.loadings.transpose() * e);
    return (e - projected).squaredNorm();
}

double phi_index(const PcaMonitorModel& model, const Eigen::VectorXd& e) {
    return t2_index(model, e) + spe_index(model, e) / model.g;
}

}  // namespace hifd
