#pragma once

// Normal, central t and noncentral t distribution functions.
//
// All functions are pure and reentrant. Probabilities are clamped to [0, 1].
// Invalid arguments raise epci::Error with ErrorKind::domain; a series that
// fails to converge raises ErrorKind::numeric.

namespace epci {

// Degrees of freedom of a t distribution. Any positive real is accepted.
class DegreesOfFreedom {
public:
    explicit DegreesOfFreedom(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

// Noncentrality parameter of a noncentral t distribution.
class Noncentrality {
public:
    explicit Noncentrality(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

double std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0, 1).
double std_normal_quantile(double p);

// I_x(a, b).
double regularized_incomplete_beta(double x, double a, double b);

double central_t_cdf(double x, DegreesOfFreedom df);
double central_t_quantile(double p, DegreesOfFreedom df);

// F_{df, delta}(x). Poisson-weighted incomplete beta series for x >= 0,
// reflection F_{v,d}(x) = 1 - F_{v,-d}(-x) for x < 0.
double noncentral_t_cdf(double x, DegreesOfFreedom df, Noncentrality delta);

namespace detail {

// I_x(a, b) with 1 - x supplied separately so callers can avoid cancellation.
double incomplete_beta(double a, double b, double x, double one_minus_x);

// log Gamma(x) for x > 0, safe to call concurrently.
double log_gamma(double x) noexcept;

}  // namespace detail

}  // namespace epci
