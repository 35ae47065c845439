#include "epci/models.hpp"

#include <cmath>
#include <sstream>

#include "epci/error.hpp"

namespace epci {

namespace {

constexpr double kRankThreshold = 1e-10;

void require_all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* what) {
    if (!m.allFinite()) fail(ErrorKind::validation, std::string(what) + " contains non-finite values");
}

}  // namespace

double FitSummary::standard_error(std::size_t j) const {
    return sigma_hat.at(j) / std::sqrt(static_cast<double>(n));
}

void validate(const FitSummary& fit) {
    if (fit.d < 1 || fit.n <= fit.d) {
        std::ostringstream msg;
        msg << "need n > d >= 1, got n=" << fit.n << ", d=" << fit.d;
        fail(ErrorKind::insufficient_data, msg.str());
    }
    // Summaries built from published statistics may carry fewer than d coefficients.
    if (fit.theta_hat.empty() || fit.theta_hat.size() > fit.d || fit.sigma_hat.size() != fit.theta_hat.size())
        fail(ErrorKind::validation, "theta_hat and sigma_hat must have matching lengths in [1, d]");
    for (std::size_t j = 0; j < fit.theta_hat.size(); ++j) {
        if (!std::isfinite(fit.theta_hat[j]) || !std::isfinite(fit.sigma_hat[j]) || fit.sigma_hat[j] < 0.0)
            fail(ErrorKind::validation, "coefficient estimates must be finite with sigma_hat >= 0");
    }
    if (!(fit.nu_hat_sq >= 0.0) || !std::isfinite(fit.nu_hat_sq))
        fail(ErrorKind::validation, "nu_hat_sq must be finite and non-negative");
}

FitSummary fit_sample_mean(const Dataset& data) {
    if (data.covariates && data.covariates->cols() > 0)
        fail(ErrorKind::validation, "sample mean takes an outcome column only");
    const std::size_t n = data.size();
    if (n < 2) fail(ErrorKind::insufficient_data, "sample mean needs at least 2 observations");
    require_all_finite(data.outcome, "outcome");

    const double mean = data.outcome.mean();
    const double ss = (data.outcome.array() - mean).square().sum();
    const double var = ss / static_cast<double>(n - 1);

    FitSummary fit;
    fit.theta_hat = {mean};
    fit.sigma_hat = {std::sqrt(var)};
    fit.nu_hat_sq = var;
    fit.n = n;
    fit.d = 1;
    return fit;
}

FitSummary fit_sample_mean(const std::vector<double>& outcome) {
    Dataset data;
    data.outcome = Eigen::Map<const Eigen::VectorXd>(outcome.data(), static_cast<Eigen::Index>(outcome.size()));
    return fit_sample_mean(data);
}

FitSummary fit_linear_regression(const Dataset& data) {
    const Eigen::Index n = data.outcome.size();
    const Eigen::Index k = data.covariates ? data.covariates->cols() : 0;
    const Eigen::Index d = k + 1;
    if (data.covariates && data.covariates->rows() != n) {
        std::ostringstream msg;
        msg << "covariates have " << data.covariates->rows() << " rows, outcome has " << n;
        fail(ErrorKind::validation, msg.str());
    }
    if (n <= d) {
        std::ostringstream msg;
        msg << "regression needs n > d, got n=" << n << ", d=" << d;
        fail(ErrorKind::insufficient_data, msg.str());
    }
    require_all_finite(data.outcome, "outcome");

    Eigen::MatrixXd design(n, d);
    design.col(0).setOnes();
    if (k > 0) {
        require_all_finite(*data.covariates, "covariates");
        design.rightCols(k) = *data.covariates;
    }
    Eigen::VectorXd response = data.outcome;

    if (data.weight_matrix) {
        const Eigen::MatrixXd& v = *data.weight_matrix;
        if (v.rows() != n || v.cols() != n) fail(ErrorKind::weight_matrix, "weight matrix must be n x n");
        if (!v.allFinite()) fail(ErrorKind::weight_matrix, "weight matrix contains non-finite values");
        const double scale = v.cwiseAbs().maxCoeff();
        if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            fail(ErrorKind::weight_matrix, "weight matrix is not symmetric");
        Eigen::LLT<Eigen::MatrixXd> llt(v);
        if (llt.info() != Eigen::Success) fail(ErrorKind::weight_matrix, "weight matrix is not positive definite");
        // Whiten: L^{-1} X, L^{-1} y with V = L L^T.
        llt.matrixL().solveInPlace(design);
        llt.matrixL().solveInPlace(response);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < d) {
        std::ostringstream msg;
        msg << "design matrix has rank " << qr.rank() << " < " << d;
        fail(ErrorKind::singular_design, msg.str());
    }
    const Eigen::VectorXd theta = qr.solve(response);
    const Eigen::VectorXd residual = response - design * theta;
    const double nu2 = residual.squaredNorm() / static_cast<double>(n - d);

    // (X^T V^{-1} X)^{-1} = P R^{-1} R^{-T} P^T
    const auto r = qr.matrixR().topLeftCorner(d, d).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv = r.solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    const Eigen::MatrixXd cov = perm * cov_perm * perm.transpose();

    FitSummary fit;
    fit.n = static_cast<std::size_t>(n);
    fit.d = static_cast<std::size_t>(d);
    fit.nu_hat_sq = nu2;
    fit.theta_hat.assign(theta.data(), theta.data() + d);
    fit.sigma_hat.resize(fit.d);
    for (Eigen::Index j = 0; j < d; ++j)
        fit.sigma_hat[static_cast<std::size_t>(j)] = std::sqrt(static_cast<double>(n) * nu2 * cov(j, j));
    return fit;
}

FitSummary summary_from_stats(double theta_hat, double sigma_hat, std::size_t n, std::size_t d) {
    if (!std::isfinite(theta_hat)) fail(ErrorKind::validation, "theta_hat must be finite");
    if (sigma_hat == 0.0) fail(ErrorKind::degenerate_fit, "sigma_hat is zero");
    if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat))
        fail(ErrorKind::validation, "sigma_hat must be positive and finite");
    FitSummary fit;
    fit.theta_hat = {theta_hat};
    fit.sigma_hat = {sigma_hat};
    fit.nu_hat_sq = sigma_hat * sigma_hat;
    fit.n = n;
    fit.d = d;
    validate(fit);
    return fit;
}

}  // namespace epci
