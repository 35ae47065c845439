#pragma once

// Exceedance probabilities Pr(theta_rep_j > c) for a replication of size m,
// their noncentral-t confidence intervals, and the companion parameter
// intervals and p-values.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "epci/distributions.hpp"
#include "epci/models.hpp"

namespace epci {

enum class Side { two_sided, lower_one_sided, upper_one_sided };

std::string_view to_string(Side side) noexcept;
std::optional<Side> parse_side(std::string_view text) noexcept;

struct ExceedanceQuery {
    double cutoff = 0.0;
    std::size_t rep_size = 1;  // m
    double alpha = 0.05;
    Side side = Side::two_sided;
    std::size_t coefficient = 0;  // zero-based j
};

struct IntervalEstimate {
    double point = 0.0;
    double lower = 0.0;
    double upper = 1.0;
};

struct ParameterInterval {
    double estimate = 0.0;
    double lower = 0.0;  // -inf for an upper one-sided interval
    double upper = 0.0;  // +inf for a lower one-sided interval
};

struct EpCurve {
    std::vector<double> cutoffs;
    std::vector<IntervalEstimate> estimates;
    FitSummary fit;
    std::size_t rep_size = 1;
    double alpha = 0.05;
    Side side = Side::two_sided;
    std::size_t coefficient = 0;
};

// 1 - Phi(sqrt(m) (c - theta) / sigma).
double true_exceedance(double theta, double sigma, double cutoff, std::size_t rep_size);

// Plug-in estimate of true_exceedance at (theta_hat_j, sigma_hat_j).
double point_estimate(const FitSummary& fit, const ExceedanceQuery& query);

// The delta with F_{df,delta}(q) = target. F is strictly decreasing in delta,
// so the root is unique. Bracket starts at [q - 10, q + 10] and doubles its
// half-width until the target is straddled (at most 60 times); the root is
// then refined to 1e-10 in delta.
Noncentrality solve_noncentrality(double q, DegreesOfFreedom df, double target);

// Pointwise confidence interval for the exceedance probability. Two-sided:
// [1 - Phi(sqrt(m/n) delta_U), 1 - Phi(sqrt(m/n) delta_L)] with delta_L, delta_U
// solving F_{n-d,delta}(q) = 1 - alpha/2 and alpha/2, q = sqrt(n)(c - theta_hat)/sigma_hat.
// One-sided variants fix the other end at 1 (lower) or 0 (upper).
IntervalEstimate ep_confidence_interval(const FitSummary& fit, const ExceedanceQuery& query);

// 201 points on theta_hat_j +/- 4 standard errors.
std::vector<double> default_cutoff_grid(const FitSummary& fit, std::size_t coefficient = 0,
                                        std::size_t count = 201, double half_width_se = 4.0);

// Cutoffs are evaluated in parallel; ep_curve_serial is the reference loop.
EpCurve ep_curve(const FitSummary& fit, const std::vector<double>& cutoffs, std::size_t rep_size,
                 double alpha, Side side, std::size_t coefficient = 0);
EpCurve ep_curve_serial(const FitSummary& fit, const std::vector<double>& cutoffs, std::size_t rep_size,
                        double alpha, Side side, std::size_t coefficient = 0);

// t interval for theta_j: theta_hat +/- t_{n-d, 1-alpha/2} sigma_hat / sqrt(n),
// or the one-sided version with t_{n-d, 1-alpha}.
ParameterInterval parameter_ci(const FitSummary& fit, std::size_t coefficient, double alpha, Side side);

// t-test p-value for H0: theta = c (two-sided), theta <= c (lower_one_sided)
// or theta >= c (upper_one_sided).
double p_value(const FitSummary& fit, std::size_t coefficient, double cutoff, Side side);

// Cutoff theta0 + z_{1-alpha} sigma / sqrt(n) at which the exceedance
// probability equals the power of the one-sided z-test of H0: theta <= theta0.
double power_cutoff(double theta0, double sigma, std::size_t n, double alpha);

}  // namespace epci
