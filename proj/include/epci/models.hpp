#pragma once

// Estimators that are linear in a normal outcome vector (sample mean, OLS/GLS
// regression), reduced to the sufficient statistics used for exceedance
// inference.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace epci {

struct Dataset {
    Eigen::VectorXd outcome;
    // n x (d - 1) covariates; an intercept column is always prepended.
    std::optional<Eigen::MatrixXd> covariates;
    // n x n symmetric positive definite V; identity when absent.
    std::optional<Eigen::MatrixXd> weight_matrix;

    std::size_t size() const noexcept { return static_cast<std::size_t>(outcome.size()); }
};

// sigma_hat is stored on the sqrt(Sigma_jj) scale: the standard error of
// theta_hat[j] is sigma_hat[j] / sqrt(n).
struct FitSummary {
    std::vector<double> theta_hat;
    std::vector<double> sigma_hat;
    double nu_hat_sq = 0.0;
    std::size_t n = 0;
    std::size_t d = 0;

    std::size_t degrees_of_freedom() const noexcept { return n - d; }
    double standard_error(std::size_t j) const;
};

FitSummary fit_sample_mean(const Dataset& data);
FitSummary fit_sample_mean(const std::vector<double>& outcome);

// Generalized least squares with design [1, covariates]. nu_hat_sq is the
// V^{-1}-weighted residual sum of squares over n - d (plain RSS when V = I).
FitSummary fit_linear_regression(const Dataset& data);

// Single-coefficient summary from published statistics.
FitSummary summary_from_stats(double theta_hat, double sigma_hat, std::size_t n, std::size_t d = 1);

// Throws ErrorKind::validation on violated FitSummary invariants.
void validate(const FitSummary& fit);

}  // namespace epci
