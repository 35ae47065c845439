#pragma once

#include <functional>

namespace epci {

struct RootResult {
    double root;
    int evaluations;
};

// Brent's method on a bracket [lo, hi] where f(lo) and f(hi) differ in sign:
// bisection safeguarding secant / inverse-quadratic steps. Stops when the
// bracket is narrower than x_tol or |f| <= f_tol. Throws ErrorKind::numeric
// if the bracket is invalid or the iteration cap is hit.
RootResult find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                               double x_tol, double f_tol = 0.0, int max_iter = 200);

}  // namespace epci
