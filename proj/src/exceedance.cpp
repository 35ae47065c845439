#include "epci/exceedance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "epci/error.hpp"
#include "epci/roots.hpp"

namespace epci {

namespace {

constexpr double kInitialHalfWidth = 10.0;
constexpr int kMaxBracketExpansions = 60;
constexpr double kDeltaTolerance = 1e-10;

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream msg;
        msg << "alpha must lie in (0, 1), got " << alpha;
        fail(ErrorKind::domain, msg.str());
    }
}

// Validates the fit and coefficient index, returns (theta_hat_j, sigma_hat_j).
std::pair<double, double> coefficient_of(const FitSummary& fit, std::size_t j) {
    validate(fit);
    if (j >= fit.theta_hat.size()) {
        std::ostringstream msg;
        msg << "coefficient index " << j + 1 << " out of range [1, " << fit.theta_hat.size() << "]";
        fail(ErrorKind::validation, msg.str());
    }
    if (fit.sigma_hat[j] == 0.0) {
        std::ostringstream msg;
        msg << "sigma_hat is zero for coefficient " << j + 1 << "; the pivotal quantity is undefined";
        fail(ErrorKind::degenerate_fit, msg.str());
    }
    return {fit.theta_hat[j], fit.sigma_hat[j]};
}

IntervalEstimate interval_at(const FitSummary& fit, double cutoff, std::size_t rep_size, double alpha,
                             Side side, std::size_t j) {
    ExceedanceQuery query{cutoff, rep_size, alpha, side, j};
    return ep_confidence_interval(fit, query);
}

std::string cutoff_context(double cutoff, std::size_t index, const std::string& what) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "at cutoff #" << index << " (c=" << cutoff << "): " << what;
    return msg.str();
}

void check_curve_inputs(const std::vector<double>& cutoffs) {
    if (cutoffs.empty()) fail(ErrorKind::validation, "cutoff grid is empty");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (!std::isfinite(cutoffs[i])) fail(ErrorKind::validation, cutoff_context(cutoffs[i], i, "not finite"));
        if (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))
            fail(ErrorKind::validation, cutoff_context(cutoffs[i], i, "cutoffs must be strictly increasing"));
    }
}

EpCurve make_curve(const FitSummary& fit, const std::vector<double>& cutoffs, std::size_t rep_size,
                   double alpha, Side side, std::size_t j) {
    EpCurve curve;
    curve.cutoffs = cutoffs;
    curve.estimates.resize(cutoffs.size());
    curve.fit = fit;
    curve.rep_size = rep_size;
    curve.alpha = alpha;
    curve.side = side;
    curve.coefficient = j;
    return curve;
}

}  // namespace

std::string_view to_string(Side side) noexcept {
    switch (side) {
    case Side::two_sided: return "two_sided";
    case Side::lower_one_sided: return "lower_one_sided";
    case Side::upper_one_sided: return "upper_one_sided";
    }
    return "two_sided";
}

std::optional<Side> parse_side(std::string_view text) noexcept {
    if (text == "two_sided" || text == "two-sided" || text == "two") return Side::two_sided;
    if (text == "lower_one_sided" || text == "lower") return Side::lower_one_sided;
    if (text == "upper_one_sided" || text == "upper") return Side::upper_one_sided;
    return std::nullopt;
}

double true_exceedance(double theta, double sigma, double cutoff, std::size_t rep_size) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        std::ostringstream msg;
        msg << "sigma must be positive, got " << sigma;
        fail(ErrorKind::domain, msg.str());
    }
    if (rep_size < 1) fail(ErrorKind::domain, "replication size must be at least 1");
    return std_normal_cdf(std::sqrt(static_cast<double>(rep_size)) * (theta - cutoff) / sigma);
}

double point_estimate(const FitSummary& fit, const ExceedanceQuery& query) {
    const auto [theta, sigma] = coefficient_of(fit, query.coefficient);
    return true_exceedance(theta, sigma, query.cutoff, query.rep_size);
}

Noncentrality solve_noncentrality(double q, DegreesOfFreedom df, double target) {
    if (!(target > 0.0 && target < 1.0)) {
        std::ostringstream msg;
        msg << "target probability must lie in (0, 1), got " << target;
        fail(ErrorKind::domain, msg.str());
    }
    if (!std::isfinite(q)) fail(ErrorKind::domain, "pivot value q must be finite");

    auto f = [&](double delta) { return noncentral_t_cdf(q, df, Noncentrality(delta)) - target; };

    // f is decreasing in delta: need f(lo) > 0 > f(hi).
    double half = kInitialHalfWidth;
    double lo = q - half, hi = q + half;
    double f_lo = f(lo), f_hi = f(hi);
    int expansions = 0;
    while (f_lo <= 0.0 || f_hi >= 0.0) {
        if (f_lo == 0.0) return Noncentrality(lo);
        if (f_hi == 0.0) return Noncentrality(hi);
        if (++expansions > kMaxBracketExpansions) {
            std::ostringstream msg;
            msg << "noncentrality bracket expansion exhausted (q=" << q << ", df=" << df.value()
                << ", target=" << target << ", bracket=[" << lo << ", " << hi << "])";
            fail(ErrorKind::numeric, msg.str());
        }
        half *= 2.0;
        if (f_lo <= 0.0) {
            lo = q - half;
            f_lo = f(lo);
        }
        if (f_hi >= 0.0) {
            hi = q + half;
            f_hi = f(hi);
        }
    }
    return Noncentrality(find_root_bracketed(f, lo, hi, kDeltaTolerance).root);
}

IntervalEstimate ep_confidence_interval(const FitSummary& fit, const ExceedanceQuery& query) {
    require_alpha(query.alpha);
    if (!std::isfinite(query.cutoff)) fail(ErrorKind::domain, "cutoff must be finite");
    const auto [theta, sigma] = coefficient_of(fit, query.coefficient);
    const double n = static_cast<double>(fit.n);
    const DegreesOfFreedom df(static_cast<double>(fit.degrees_of_freedom()));
    const double q = std::sqrt(n) * (query.cutoff - theta) / sigma;
    const double scale = std::sqrt(static_cast<double>(query.rep_size) / n);
    const double alpha = query.alpha;

    IntervalEstimate out;
    out.point = true_exceedance(theta, sigma, query.cutoff, query.rep_size);
    // 1 - Phi(s * delta) == Phi(-s * delta)
    switch (query.side) {
    case Side::two_sided: {
        const double delta_l = solve_noncentrality(q, df, 1.0 - 0.5 * alpha).value();
        const double delta_u = solve_noncentrality(q, df, 0.5 * alpha).value();
        out.lower = std_normal_cdf(-scale * delta_u);
        out.upper = std_normal_cdf(-scale * delta_l);
        break;
    }
    case Side::lower_one_sided: {
        const double delta_u = solve_noncentrality(q, df, alpha).value();
        out.lower = std_normal_cdf(-scale * delta_u);
        out.upper = 1.0;
        break;
    }
    case Side::upper_one_sided: {
        const double delta_l = solve_noncentrality(q, df, 1.0 - alpha).value();
        out.lower = 0.0;
        out.upper = std_normal_cdf(-scale * delta_l);
        break;
    }
    }
    return out;
}

std::vector<double> default_cutoff_grid(const FitSummary& fit, std::size_t coefficient, std::size_t count,
                                        double half_width_se) {
    const auto [theta, sigma] = coefficient_of(fit, coefficient);
    if (count < 2) fail(ErrorKind::validation, "cutoff grid needs at least 2 points");
    const double half = half_width_se * sigma / std::sqrt(static_cast<double>(fit.n));
    const double lo = theta - half;
    const double step = 2.0 * half / static_cast<double>(count - 1);
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = theta + half;
    return grid;
}

EpCurve ep_curve_serial(const FitSummary& fit, const std::vector<double>& cutoffs, std::size_t rep_size,
                        double alpha, Side side, std::size_t j) {
    check_curve_inputs(cutoffs);
    EpCurve curve = make_curve(fit, cutoffs, rep_size, alpha, side, j);
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        try {
            curve.estimates[i] = interval_at(fit, cutoffs[i], rep_size, alpha, side, j);
        } catch (const Error& e) {
            throw Error(e.kind(), cutoff_context(cutoffs[i], i, e.what()));
        }
    }
    return curve;
}

EpCurve ep_curve(const FitSummary& fit, const std::vector<double>& cutoffs, std::size_t rep_size,
                 double alpha, Side side, std::size_t j) {
    check_curve_inputs(cutoffs);
    // Surface fit/query errors before entering the parallel region.
    coefficient_of(fit, j);
    require_alpha(alpha);
    EpCurve curve = make_curve(fit, cutoffs, rep_size, alpha, side, j);

    const auto count = static_cast<std::ptrdiff_t>(cutoffs.size());
    std::vector<std::exception_ptr> errors(cutoffs.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto u = static_cast<std::size_t>(i);
        try {
            curve.estimates[u] = interval_at(fit, cutoffs[u], rep_size, alpha, side, j);
        } catch (...) {
            errors[u] = std::current_exception();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            throw Error(e.kind(), cutoff_context(cutoffs[i], i, e.what()));
        }
    }
    return curve;
}

ParameterInterval parameter_ci(const FitSummary& fit, std::size_t j, double alpha, Side side) {
    require_alpha(alpha);
    const auto [theta, sigma] = coefficient_of(fit, j);
    const DegreesOfFreedom df(static_cast<double>(fit.degrees_of_freedom()));
    const double se = sigma / std::sqrt(static_cast<double>(fit.n));
    constexpr double inf = std::numeric_limits<double>::infinity();

    ParameterInterval out;
    out.estimate = theta;
    if (side == Side::two_sided) {
        const double t = central_t_quantile(1.0 - 0.5 * alpha, df);
        out.lower = theta - t * se;
        out.upper = theta + t * se;
    } else {
        const double t = central_t_quantile(1.0 - alpha, df);
        out.lower = side == Side::lower_one_sided ? theta - t * se : -inf;
        out.upper = side == Side::upper_one_sided ? theta + t * se : inf;
    }
    return out;
}

double p_value(const FitSummary& fit, std::size_t j, double cutoff, Side side) {
    if (!std::isfinite(cutoff)) fail(ErrorKind::domain, "cutoff must be finite");
    const auto [theta, sigma] = coefficient_of(fit, j);
    const DegreesOfFreedom df(static_cast<double>(fit.degrees_of_freedom()));
    const double stat = std::sqrt(static_cast<double>(fit.n)) * (theta - cutoff) / sigma;
    switch (side) {
    case Side::two_sided: return std::min(1.0, 2.0 * central_t_cdf(-std::fabs(stat), df));
    case Side::lower_one_sided: return central_t_cdf(-stat, df);
    case Side::upper_one_sided: return central_t_cdf(stat, df);
    }
    return 1.0;
}

double power_cutoff(double theta0, double sigma, std::size_t n, double alpha) {
    require_alpha(alpha);
    if (!std::isfinite(theta0)) fail(ErrorKind::domain, "theta0 must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::domain, "sigma must be positive");
    if (n < 1) fail(ErrorKind::domain, "n must be at least 1");
    return theta0 + std_normal_quantile(1.0 - alpha) * sigma / std::sqrt(static_cast<double>(n));
}

}  // namespace epci
