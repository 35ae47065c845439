#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "epci/distributions.hpp"
#include "epci/error.hpp"
#include "oracles/nct_quadrature.hpp"

using namespace epci;

namespace {

double nct(double x, double nu, double delta) {
    return noncentral_t_cdf(x, DegreesOfFreedom(nu), Noncentrality(delta));
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an epci::Error");
    return ErrorKind::numeric;
}

}  // namespace

TEST_CASE("strong types reject invalid parameters") {
    CHECK(kind_of([] { (void)DegreesOfFreedom(0.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { (void)DegreesOfFreedom(-3.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { (void)DegreesOfFreedom(NAN); }) == ErrorKind::domain);
    CHECK(kind_of([] { (void)DegreesOfFreedom(INFINITY); }) == ErrorKind::domain);
    CHECK(kind_of([] { (void)Noncentrality(NAN); }) == ErrorKind::domain);
    CHECK(DegreesOfFreedom(2.5).value() == 2.5);
    CHECK(Noncentrality(-1.0).value() == -1.0);
}

TEST_CASE("standard normal cdf and quantile") {
    CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
    CHECK(std_normal_cdf(-1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
    CHECK(std_normal_cdf(-10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
    CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std_normal_quantile(1e-300) == doctest::Approx(-37.047096299361201).epsilon(1e-12));
    for (double p = 1e-6; p < 1.0; p += 0.0123) {
        CAPTURE(p);
        CHECK(std_normal_cdf(std_normal_quantile(p)) == doctest::Approx(p).epsilon(1e-13));
    }
    CHECK(kind_of([] { std_normal_quantile(0.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { std_normal_quantile(1.0); }) == ErrorKind::domain);
}

TEST_CASE("regularized incomplete beta") {
    // I_x(2, 3) = sum_{j=2}^{4} C(4, j) x^j (1 - x)^(4 - j) = 67/256 at x = 1/4.
    CHECK(regularized_incomplete_beta(0.25, 2.0, 3.0) == doctest::Approx(0.26171875).epsilon(1e-15));
    CHECK(regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0);
    // I_x(1, b) = 1 - (1 - x)^b
    CHECK(regularized_incomplete_beta(0.3, 1.0, 4.5) == doctest::Approx(1.0 - std::pow(0.7, 4.5)).epsilon(1e-14));
    // I_x(1/2, 1/2) = (2 / pi) asin(sqrt(x))
    CHECK(regularized_incomplete_beta(0.2, 0.5, 0.5) ==
          doctest::Approx(2.0 / std::numbers::pi * std::asin(std::sqrt(0.2))).epsilon(1e-14));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.001, 0.999), ua(0.3, 60.0);
    for (int i = 0; i < 500; ++i) {
        const double x = ux(rng), a = ua(rng), b = ua(rng);
        CAPTURE(x);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(regularized_incomplete_beta(x, a, b) + regularized_incomplete_beta(1.0 - x, b, a) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(kind_of([] { regularized_incomplete_beta(1.5, 1.0, 1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { regularized_incomplete_beta(0.5, 0.0, 1.0); }) == ErrorKind::domain);
}

TEST_CASE("central t cdf matches closed forms") {
    for (double x = -20.0; x <= 20.0; x += 0.37) {
        CAPTURE(x);
        CHECK(central_t_cdf(x, DegreesOfFreedom(1.0)) ==
              doctest::Approx(0.5 + std::atan(x) / std::numbers::pi).epsilon(1e-13));
        CHECK(central_t_cdf(x, DegreesOfFreedom(2.0)) ==
              doctest::Approx(0.5 + x / (2.0 * std::sqrt(2.0 + x * x))).epsilon(1e-13));
    }
}

TEST_CASE("central t quantile inverts the cdf") {
    CHECK(central_t_quantile(0.975, DegreesOfFreedom(31.0)) == doctest::Approx(2.0395134463964082).epsilon(1e-12));
    CHECK(central_t_quantile(0.95, DegreesOfFreedom(31.0)) == doctest::Approx(1.6955187825458651).epsilon(1e-12));
    CHECK(central_t_quantile(0.5, DegreesOfFreedom(7.0)) == 0.0);
    for (double nu : {1.0, 2.5, 9.0, 99.0, 1e5}) {
        for (double p = 0.0005; p < 1.0; p += 0.0211) {
            CAPTURE(nu);
            CAPTURE(p);
            const double t = central_t_quantile(p, DegreesOfFreedom(nu));
            CHECK(central_t_cdf(t, DegreesOfFreedom(nu)) == doctest::Approx(p).epsilon(1e-10));
        }
    }
}

TEST_CASE("noncentral t reduces to simple cases") {
    for (double nu : {1.0, 3.0, 30.0}) {
        for (double x = -6.0; x <= 6.0; x += 0.5) {
            CHECK(nct(x, nu, 0.0) == doctest::Approx(central_t_cdf(x, DegreesOfFreedom(nu))).epsilon(1e-13));
        }
        for (double delta = -5.0; delta <= 5.0; delta += 0.5)
            CHECK(nct(0.0, nu, delta) == doctest::Approx(std_normal_cdf(-delta)).epsilon(1e-13));
    }
}

TEST_CASE("noncentral t symmetry over random triples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-10.0, 10.0), ud(-8.0, 8.0), unu(0.5, 300.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = ux(rng), delta = ud(rng), nu = unu(rng);
        CAPTURE(x);
        CAPTURE(delta);
        CAPTURE(nu);
        CHECK(std::abs(nct(x, nu, delta) - (1.0 - nct(-x, nu, -delta))) < 1e-12);
    }
}

TEST_CASE("noncentral t is decreasing in delta") {
    for (double nu : {2.0, 10.0, 98.0}) {
        for (double x : {-3.0, -0.5, 0.7, 2.5}) {
            double prev = 1.0;
            for (double delta = -8.0; delta <= 8.0; delta += 0.25) {
                const double f = nct(x, nu, delta);
                // Strict where the value is resolvable; tails only to the series tolerance.
                if (prev > 1e-10 && prev < 1.0 - 1e-10)
                    CHECK(f < prev);
                else
                    CHECK(f <= prev + 1e-13);
                CHECK(f >= 0.0);
                CHECK(f <= 1.0);
                prev = f;
            }
        }
    }
}

TEST_CASE("noncentral t approaches the shifted normal for large df") {
    for (double x = -4.0; x <= 4.0; x += 0.5) {
        for (double delta : {-2.0, 0.0, 1.5}) {
            CHECK(std::abs(nct(x, 1e6, delta) - std_normal_cdf(x - delta)) < 1e-5);
        }
    }
}

TEST_CASE("noncentral t agrees with the quadrature oracle") {
    double worst = 0.0;
    for (double nu : {2.0, 5.0, 31.0, 98.0}) {
        for (double delta = -6.0; delta <= 6.0001; delta += 0.5) {
            for (double x = -8.0; x <= 8.0001; x += 0.25) {
                worst = std::max(worst, std::abs(nct(x, nu, delta) - oracle::noncentral_t_cdf(x, nu, delta)));
            }
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("noncentral t frozen values") {
    // Oracle quadrature values.
    CHECK(nct(1.0, 10.0, 1.0) == doctest::Approx(oracle::noncentral_t_cdf(1.0, 10.0, 1.0)).epsilon(1e-10));
    CHECK(nct(-2.3, 31.0, 0.4) == doctest::Approx(oracle::noncentral_t_cdf(-2.3, 31.0, 0.4)).epsilon(1e-10));
    CHECK(nct(25.0, 4.0, 20.0) == doctest::Approx(oracle::noncentral_t_cdf(25.0, 4.0, 20.0)).epsilon(1e-9));
}

TEST_CASE("noncentral t at x = 1, df = 31, delta = 1") {
    CHECK(std::abs(nct(1.0, 31.0, 1.0) - oracle::noncentral_t_cdf(1.0, 31.0, 1.0)) < 1e-8);
}
