#include "epci/simulation.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

#include "epci/error.hpp"
#include "epci/exceedance.hpp"
#include "epci/models.hpp"
#include "epci/rng.hpp"

namespace epci {

namespace {

constexpr std::uint64_t kDesignStream = 0xd5e1;

using ReplicateFit = std::function<FitSummary(std::size_t n, std::size_t replicate)>;

struct SizePlan {
    std::size_t n = 0;
    std::size_t coefficient = 0;
    std::vector<double> truth;  // per cutoff
    ReplicateFit fit;
};

void check_config(const CoverageConfig& config, Scenario expected) {
    if (config.scenario != expected) fail(ErrorKind::validation, "coverage config has the wrong scenario");
    if (config.replications < 1) fail(ErrorKind::validation, "replications must be at least 1");
    if (config.cutoffs.empty()) fail(ErrorKind::validation, "cutoff grid is empty");
    if (config.sample_sizes.empty()) fail(ErrorKind::validation, "sample size grid is empty");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) fail(ErrorKind::domain, "alpha must lie in (0, 1)");
    const std::size_t d = expected == Scenario::sample_mean ? 1 : 2;
    for (std::size_t n : config.sample_sizes) {
        if (n < d + 1) {
            std::ostringstream msg;
            msg << "sample size " << n << " too small for " << to_string(expected);
            fail(ErrorKind::insufficient_data, msg.str());
        }
    }
    for (double c : config.cutoffs)
        if (!std::isfinite(c)) fail(ErrorKind::validation, "cutoffs must be finite");
}

// Adds 1 to hits[i] for every cutoff whose interval covers the truth.
void score_replicate(const SizePlan& plan, const CoverageConfig& config, std::size_t replicate,
                     std::vector<std::size_t>& hits) {
    const FitSummary fit = plan.fit(plan.n, replicate);
    ExceedanceQuery query;
    query.rep_size = plan.n;
    query.alpha = config.alpha;
    query.side = Side::two_sided;
    query.coefficient = plan.coefficient;
    for (std::size_t i = 0; i < config.cutoffs.size(); ++i) {
        query.cutoff = config.cutoffs[i];
        const IntervalEstimate ci = ep_confidence_interval(fit, query);
        if (ci.lower <= plan.truth[i] && plan.truth[i] <= ci.upper) ++hits[i];
    }
}

[[noreturn]] void rethrow_with_replicate(std::exception_ptr error, const SizePlan& plan, std::size_t replicate) {
    try {
        std::rethrow_exception(error);
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << "replicate " << replicate << " (n=" << plan.n << "): " << e.what();
        throw Error(e.kind(), msg.str());
    }
}

std::vector<std::size_t> count_hits_serial(const SizePlan& plan, const CoverageConfig& config) {
    std::vector<std::size_t> hits(config.cutoffs.size(), 0);
    for (std::size_t k = 0; k < config.replications; ++k) {
        try {
            score_replicate(plan, config, k, hits);
        } catch (...) {
            rethrow_with_replicate(std::current_exception(), plan, k);
        }
    }
    return hits;
}

std::vector<std::size_t> count_hits_parallel(const SizePlan& plan, const CoverageConfig& config) {
    const std::size_t nc = config.cutoffs.size();
    std::vector<std::size_t> hits(nc, 0);
    const auto replications = static_cast<std::ptrdiff_t>(config.replications);
    std::ptrdiff_t first_failure = replications;
    std::exception_ptr failure;

#pragma omp parallel
    {
        std::vector<std::size_t> local(nc, 0);
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t k = 0; k < replications; ++k) {
            try {
                score_replicate(plan, config, static_cast<std::size_t>(k), local);
            } catch (...) {
#pragma omp critical(epci_coverage_failure)
                {
                    if (k < first_failure) {
                        first_failure = k;
                        failure = std::current_exception();
                    }
                }
            }
        }
#pragma omp critical(epci_coverage_reduce)
        for (std::size_t i = 0; i < nc; ++i) hits[i] += local[i];
    }

    if (failure) rethrow_with_replicate(failure, plan, static_cast<std::size_t>(first_failure));
    return hits;
}

CoverageResult assemble(const CoverageConfig& config, const std::vector<SizePlan>& plans, bool parallel) {
    CoverageResult result;
    result.scenario = config.scenario;
    result.alpha = config.alpha;
    result.replications = config.replications;
    const double k = static_cast<double>(config.replications);
    for (const SizePlan& plan : plans) {
        const auto hits = parallel ? count_hits_parallel(plan, config) : count_hits_serial(plan, config);
        for (std::size_t i = 0; i < config.cutoffs.size(); ++i) {
            CoverageCell cell;
            cell.n = plan.n;
            cell.cutoff = config.cutoffs[i];
            cell.hits = hits[i];
            cell.replications = config.replications;
            cell.coverage = static_cast<double>(hits[i]) / k;
            cell.mc_se = std::sqrt(cell.coverage * (1.0 - cell.coverage) / k);
            cell.true_exceedance = plan.truth[i];
            result.cells.push_back(cell);
        }
    }
    return result;
}

CoverageResult mean_coverage(const CoverageConfig& config, bool parallel) {
    check_config(config, Scenario::sample_mean);
    if (!(config.mean.sigma_sq > 0.0)) fail(ErrorKind::domain, "sigma^2 must be positive");
    const double theta = config.mean.theta;
    const double sigma = std::sqrt(config.mean.sigma_sq);
    const std::uint64_t seed = config.master_seed;

    std::vector<SizePlan> plans;
    for (std::size_t n : config.sample_sizes) {
        SizePlan plan;
        plan.n = n;
        plan.coefficient = 0;
        for (double c : config.cutoffs) plan.truth.push_back(true_exceedance(theta, sigma, c, n));
        plan.fit = [=](std::size_t size, std::size_t replicate) {
            const auto y = generate_normal_sample(
                stream_seed({seed, static_cast<std::uint64_t>(Scenario::sample_mean), size, replicate}), size, theta,
                sigma);
            return fit_sample_mean(y);
        };
        plans.push_back(std::move(plan));
    }
    return assemble(config, plans, parallel);
}

CoverageResult regression_coverage(const CoverageConfig& config, bool parallel) {
    check_config(config, Scenario::linear_regression);
    const RegressionTruth truth = config.regression;
    if (!(truth.nu_sq > 0.0)) fail(ErrorKind::domain, "nu^2 must be positive");
    if (!(truth.x_hi > truth.x_lo)) fail(ErrorKind::domain, "covariate range must be non-empty");
    const double nu = std::sqrt(truth.nu_sq);
    const std::uint64_t seed = config.master_seed;

    std::vector<SizePlan> plans;
    std::vector<double> inverse_slope;
    for (std::size_t n : config.sample_sizes) {
        const Eigen::VectorXd x = fixed_covariate(seed, n, truth);
        Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 2);
        design.col(0).setOnes();
        design.col(1) = x;
        const Eigen::Matrix2d xtx_inv = (design.transpose() * design).inverse();
        const double inv22 = xtx_inv(1, 1);
        inverse_slope.push_back(inv22);
        const double sigma_slope = std::sqrt(static_cast<double>(n) * truth.nu_sq * inv22);

        SizePlan plan;
        plan.n = n;
        plan.coefficient = 1;
        for (double c : config.cutoffs) plan.truth.push_back(true_exceedance(truth.slope, sigma_slope, c, n));
        plan.fit = [=](std::size_t size, std::size_t replicate) {
            NormalStream stream(
                stream_seed({seed, static_cast<std::uint64_t>(Scenario::linear_regression), size, replicate}));
            Dataset data;
            data.outcome.resize(static_cast<Eigen::Index>(size));
            for (Eigen::Index i = 0; i < data.outcome.size(); ++i)
                data.outcome[i] = truth.intercept + truth.slope * x[i] + nu * stream.standard_normal();
            data.covariates = x;
            return fit_linear_regression(data);
        };
        plans.push_back(std::move(plan));
    }
    CoverageResult result = assemble(config, plans, parallel);
    result.design_inverse_slope = std::move(inverse_slope);
    return result;
}

}  // namespace

std::string_view to_string(Scenario scenario) noexcept {
    return scenario == Scenario::sample_mean ? "mean" : "regression";
}

std::optional<Scenario> parse_scenario(std::string_view text) noexcept {
    if (text == "mean" || text == "sample_mean") return Scenario::sample_mean;
    if (text == "regression" || text == "linear_regression") return Scenario::linear_regression;
    return std::nullopt;
}

CoverageConfig default_coverage_config(Scenario scenario) {
    CoverageConfig config;
    config.scenario = scenario;
    config.sample_sizes = {20, 40, 60, 80, 100};
    config.replications = 10000;
    config.alpha = 0.05;
    if (scenario == Scenario::sample_mean) {
        for (int i = 0; i <= 10; ++i) config.cutoffs.push_back(-0.5 + 0.1 * i);
    } else {
        for (int i = 0; i <= 20; ++i) config.cutoffs.push_back(1.0 + 0.1 * i);
    }
    return config;
}

std::vector<double> generate_normal_sample(std::uint64_t seed, std::size_t n, double theta, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::domain, "sigma must be positive");
    if (!std::isfinite(theta)) fail(ErrorKind::domain, "theta must be finite");
    NormalStream stream(seed);
    std::vector<double> out(n);
    for (double& v : out) v = theta + sigma * stream.standard_normal();
    return out;
}

Eigen::VectorXd fixed_covariate(std::uint64_t master_seed, std::size_t n, const RegressionTruth& truth) {
    NormalStream stream(stream_seed({master_seed, kDesignStream, n}));
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = truth.x_lo + (truth.x_hi - truth.x_lo) * stream.uniform();
    return x;
}

CoverageResult run_mean_coverage(const CoverageConfig& config) { return mean_coverage(config, true); }
CoverageResult run_regression_coverage(const CoverageConfig& config) { return regression_coverage(config, true); }

CoverageResult run_coverage(const CoverageConfig& config) {
    return config.scenario == Scenario::sample_mean ? run_mean_coverage(config) : run_regression_coverage(config);
}

namespace serial {
CoverageResult run_mean_coverage(const CoverageConfig& config) { return mean_coverage(config, false); }
CoverageResult run_regression_coverage(const CoverageConfig& config) { return regression_coverage(config, false); }
}  // namespace serial

}  // namespace epci
