#pragma once

// Monte Carlo coverage of the exceedance-probability confidence intervals.
//
// For each sample size n and replicate k a dataset is drawn, fitted, and the
// two-sided interval at every cutoff c is checked against the true
// exceedance probability (m = n). Every replicate draws from its own stream
// seeded by stream_seed(master_seed, scenario, n, k), and hits are summed as
// integers, so results do not depend on thread count or scheduling.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace epci {

enum class Scenario { sample_mean, linear_regression };

std::string_view to_string(Scenario scenario) noexcept;
std::optional<Scenario> parse_scenario(std::string_view text) noexcept;

struct MeanTruth {
    double theta = 0.0;
    double sigma_sq = 1.0;
};

struct RegressionTruth {
    double intercept = 1.0;
    double slope = 2.0;
    double nu_sq = 25.0;
    double x_lo = 0.0;  // covariate ~ uniform(x_lo, x_hi)
    double x_hi = 10.0;
};

struct CoverageConfig {
    Scenario scenario = Scenario::sample_mean;
    std::vector<std::size_t> sample_sizes;
    std::vector<double> cutoffs;
    std::size_t replications = 10000;
    double alpha = 0.05;
    MeanTruth mean;
    RegressionTruth regression;
    std::uint64_t master_seed = 1;
};

struct CoverageCell {
    std::size_t n = 0;
    double cutoff = 0.0;
    std::size_t hits = 0;
    std::size_t replications = 0;
    double coverage = 0.0;
    double mc_se = 0.0;  // sqrt(P(1 - P) / K)
    double true_exceedance = 0.0;
};

struct CoverageResult {
    Scenario scenario = Scenario::sample_mean;
    double alpha = 0.05;
    std::size_t replications = 0;
    // Row-major: sample_sizes outer, cutoffs inner.
    std::vector<CoverageCell> cells;
    // Regression only: realized (X^T X)^{-1}_{2,2} for each sample size.
    std::vector<double> design_inverse_slope;
};

// Default grids: n in {20, 40, 60, 80, 100}, K = 10,000, alpha = 0.05,
// mean cutoffs -0.5..0.5 (11), regression cutoffs 1.0..3.0 (21).
CoverageConfig default_coverage_config(Scenario scenario);

// theta + sigma * z, z from NormalStream(seed).
std::vector<double> generate_normal_sample(std::uint64_t seed, std::size_t n, double theta, double sigma);

// Covariate column for the regression scenario, drawn once per (master_seed, n).
Eigen::VectorXd fixed_covariate(std::uint64_t master_seed, std::size_t n, const RegressionTruth& truth);

// Parallel over replicates.
CoverageResult run_mean_coverage(const CoverageConfig& config);
CoverageResult run_regression_coverage(const CoverageConfig& config);
CoverageResult run_coverage(const CoverageConfig& config);

// Single-threaded reference implementations; must match the parallel ones exactly.
namespace serial {
CoverageResult run_mean_coverage(const CoverageConfig& config);
CoverageResult run_regression_coverage(const CoverageConfig& config);
}  // namespace serial

}  // namespace epci
