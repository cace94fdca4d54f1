#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qdelta/errors.hpp"
#include "qdelta/quadrature.hpp"

using namespace qdelta;
using namespace qdelta::quadrature;

namespace {

bool converged_within_tolerance(const IntegrationResult& r, const QuadratureConfig& cfg) {
    return !r.converged || r.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value));
}

}  // namespace

TEST_CASE("finite integral of a constant") {
    QuadratureConfig cfg;
    const auto r = integrate_finite(RealIntegrand([](double) { return 1.0; }), 0.0, 1.0, cfg);
    CHECK(r.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.converged);
    CHECK(r.evaluations == 15);
}

TEST_CASE("x^-1/2 / (1+x) over the half-line is pi") {
    QuadratureConfig cfg;
    HalfLineHints hints;
    hints.left_exponent = 0.5;
    const auto r = integrate_semi_infinite(RealIntegrand([](double x) { return 1.0 / (std::sqrt(x) * (1.0 + x)); }),
                                           0.0, cfg, hints);
    CHECK(std::abs(r.real() - std::numbers::pi) < 1e-8);
}

TEST_CASE("(x+1)^-2 over the half-line is 1") {
    QuadratureConfig cfg;
    auto f = RealIntegrand([](double x) { return 1.0 / ((x + 1.0) * (x + 1.0)); });
    SUBCASE("exponential map") {
        cfg.tail = TailStrategy::exponential_map();
        CHECK(std::abs(integrate_semi_infinite(f, 0.0, cfg).real() - 1.0) < 1e-9);
    }
    SUBCASE("analytic tail") {
        HalfLineHints hints;
        hints.tail = [](double X) { return Complex(1.0 / (X + 1.0), 0.0); };
        CHECK(std::abs(integrate_semi_infinite(f, 0.0, cfg, hints).real() - 1.0) < 1e-12);
    }
    SUBCASE("analytic tail without a closed form falls back to the map") {
        CHECK(std::abs(integrate_semi_infinite(f, 0.0, cfg).real() - 1.0) < 1e-9);
    }
}

TEST_CASE("exponential decay and the Beta-type example") {
    QuadratureConfig cfg;
    CHECK(std::abs(integrate_semi_infinite(RealIntegrand([](double x) { return std::exp(-x); }), 0.0, cfg).real() -
                   1.0) < 1e-10);
    HalfLineHints hints;
    hints.left_exponent = 0.5;
    const auto r = integrate_semi_infinite(
        RealIntegrand([](double x) { return std::pow(x, -0.5) * std::pow(1.0 + 2.0 * x, -1.5); }), 0.0, cfg, hints);
    CHECK(std::abs(r.real() - std::sqrt(2.0)) < 1e-8);
    CHECK(std::abs(oracle::beta_integral(0.5, 1.5, 2.0) - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("Beta-integral family on the (mu, nu, beta) grid") {
    QuadratureConfig cfg;
    int cases = 0;
    for (double mu : {0.5, 1.0, 1.5}) {
        for (double nu : {1.5, 2.0, 3.0}) {
            if (!(mu < nu)) continue;
            for (double beta : {0.5, 1.0, 2.0}) {
                HalfLineHints hints;
                hints.left_exponent = mu;
                hints.scale = 1.0 / beta;
                const auto r = integrate_semi_infinite(
                    RealIntegrand([&](double x) { return std::pow(x, mu - 1.0) * std::pow(1.0 + beta * x, -nu); }),
                    0.0, cfg, hints);
                const double exact = oracle::beta_integral(mu, nu, beta);
                const double err = std::abs(r.real() - exact);
                INFO("mu=" << mu << " nu=" << nu << " beta=" << beta);
                CHECK(err / exact < 1e-7);
                CHECK(err <= 10.0 * r.error_estimate);
                ++cases;
            }
        }
    }
    CHECK(cases == 24);
}

TEST_CASE("horizontal lines") {
    QuadratureConfig cfg;
    auto gauss = [](Complex z) { return std::exp(-z * z); };
    const auto on_axis = integrate_horizontal_line(gauss, 0.0, cfg);
    const auto shifted = integrate_horizontal_line(gauss, 1.0, cfg);
    CHECK(std::abs(on_axis.value - std::sqrt(std::numbers::pi)) < 1e-10);
    CHECK(std::abs(shifted.value - std::sqrt(std::numbers::pi)) < 1e-9);
    CHECK(std::abs(integrate_horizontal_line([](Complex) { return Complex(0.0); }, 1.0, cfg).value) == 0.0);

    // Top line minus bottom line, both left to right, runs clockwise around
    // the pole at 0, so the residue 1 enters with a minus sign.
    auto f = [](Complex z) { return std::exp(-z * z) / (2.0 * std::numbers::pi * Complex(0.0, 1.0) * z); };
    const Complex loop = integrate_horizontal_line(f, 1.0, cfg).value - integrate_horizontal_line(f, -1.0, cfg).value;
    CHECK(std::abs(loop - Complex(-1.0, 0.0)) < 1e-9);
}

TEST_CASE("linearity and additivity") {
    QuadratureConfig cfg;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double c1 = U(rng), c2 = U(rng), w = 1.0 + std::abs(U(rng));
        const double alpha = U(rng), beta = U(rng);
        auto f = [&](double x) { return Complex(std::cos(w * x) * std::exp(-c1 * c1 * x), std::sin(x)); };
        auto g = [&](double x) { return Complex(1.0 / (1.0 + c2 * c2 * x * x), x * x); };
        auto h = [&](double x) { return alpha * f(x) + beta * g(x); };
        const auto rf = integrate_finite(ComplexIntegrand(f), -1.0, 3.0, cfg);
        const auto rg = integrate_finite(ComplexIntegrand(g), -1.0, 3.0, cfg);
        const auto rh = integrate_finite(ComplexIntegrand(h), -1.0, 3.0, cfg);
        const double tol = 10.0 * (std::abs(alpha) * rf.error_estimate + std::abs(beta) * rg.error_estimate +
                                   rh.error_estimate) + 1e-14;
        CHECK(std::abs(rh.value - (alpha * rf.value + beta * rg.value)) <= tol);

        const double mid = U(rng);
        const auto left = integrate_finite(ComplexIntegrand(f), -2.0, mid, cfg);
        const auto right = integrate_finite(ComplexIntegrand(f), mid, 2.5, cfg);
        const auto whole = integrate_finite(ComplexIntegrand(f), -2.0, 2.5, cfg);
        CHECK(std::abs(left.value + right.value - whole.value) <=
              left.error_estimate + right.error_estimate + whole.error_estimate + 1e-14);
        CHECK(converged_within_tolerance(whole, cfg));
    }
}

TEST_CASE("results are bitwise reproducible") {
    QuadratureConfig cfg;
    auto f = ComplexIntegrand([](double x) { return Complex(std::sin(30.0 * x) / (1.0 + x * x), std::cos(x)); });
    const auto a = integrate_finite(f, -5.0, 5.0, cfg);
    const auto b = integrate_finite(f, -5.0, 5.0, cfg);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("Gauss-Kronrod pair is exact for low-degree polynomials") {
    const auto r = gauss_kronrod_15([](double x) { return Complex(std::pow(x, 13), 0.0); }, 0.0, 1.0);
    CHECK(std::abs(r.gauss.real() - 1.0 / 14.0) < 1e-15);
    CHECK(std::abs(r.kronrod.real() - 1.0 / 14.0) < 1e-15);
}

TEST_CASE("truncate strategy integrates a finite window") {
    QuadratureConfig cfg;
    cfg.tail = TailStrategy::truncate(40.0);
    const auto r = integrate_semi_infinite(RealIntegrand([](double x) { return std::exp(-x); }), 0.0, cfg);
    CHECK(std::abs(r.real() - (1.0 - std::exp(-40.0))) < 1e-12);
}

TEST_CASE("integrate_interval over the whole line with interior breaks") {
    QuadratureConfig cfg;
    const double eps = 1e-3;
    const std::vector<double> breaks = {-eps, eps};
    const auto r = integrate_interval(ComplexIntegrand([&](double k) { return Complex(eps / (k * k + eps * eps), 0.0); }),
                                      -INFINITY, INFINITY, cfg, 0.0, breaks, eps);
    CHECK(std::abs(r.real() - std::numbers::pi) < 1e-8);
}

TEST_CASE("quadrature error paths") {
    QuadratureConfig cfg;
    SUBCASE("invalid configuration") {
        cfg.abs_tol = 0.0;
        CHECK_THROWS_AS(cfg.validate(), DomainError);
        cfg = {};
        cfg.max_subdivisions = 0;
        CHECK_THROWS_AS(cfg.validate(), DomainError);
        cfg = {};
        cfg.tail = TailStrategy::truncate(-1.0);
        CHECK_THROWS_AS(cfg.validate(), DomainError);
    }
    SUBCASE("reversed interval") {
        CHECK_THROWS_AS(integrate_finite(RealIntegrand([](double) { return 1.0; }), 1.0, 0.0, cfg), DomainError);
    }
    SUBCASE("budget exhausted") {
        cfg.max_subdivisions = 3;
        auto f = RealIntegrand([](double x) { return std::sin(1.0 / x); });
        CHECK_THROWS_AS(integrate_finite(f, 1e-4, 1.0, cfg), QuadratureFailure);
        cfg.on_failure = OnFailure::Report;
        const auto r = integrate_finite(f, 1e-4, 1.0, cfg);
        CHECK_FALSE(r.converged);
    }
    SUBCASE("non-finite samples") {
        CHECK_THROWS_AS(integrate_finite(RealIntegrand([](double x) { return x > 0.5 ? NAN : 1.0; }), 0.0, 1.0, cfg),
                        NonFiniteIntegrand);
    }
    SUBCASE("tail that does not decay") {
        cfg.tail = TailStrategy::exponential_map();
        CHECK_THROWS_AS(integrate_semi_infinite(RealIntegrand([](double x) { return 1.0 / (1.0 + x); }), 0.0, cfg),
                        TailDivergence);
    }
}
