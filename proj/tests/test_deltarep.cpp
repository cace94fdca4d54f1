#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "oracles.hpp"
#include "qdelta/deltarep.hpp"
#include "qdelta/errors.hpp"
#include "qdelta/ultra.hpp"

using namespace qdelta;
using namespace qdelta::deltarep;
using testfns::gaussian_family;

namespace {

const std::vector<double> kQs = {1.1, 1.5, 1.9};

double weight(double q) { return 2.0 * std::numbers::pi / (2.0 - q); }

}  // namespace

TEST_CASE("family validation") {
    CHECK_THROWS_AS(RegularizedFamily(QParam(2.0), 0.1), DomainError);
    CHECK_THROWS_AS(RegularizedFamily(QParam(0.5), 0.1), DomainError);
    CHECK_THROWS_AS(RegularizedFamily(QParam(1.5), 0.0), DomainError);
    CHECK_THROWS_AS(RegularizedFamily(QParam(1.5), -1e-3), DomainError);
    CHECK(RegularizedFamily(QParam(1.5), 0.1).delta_weight() == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("closed form is the scaled Lorentzian") {
    for (double q : kQs) {
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
            for (double k : {0.0, 1e-5, 0.5, -0.5, 2.0, -2.0, 30.0}) {
                const auto r = regularized_integral(RegularizedFamily(QParam(q), eps), k, Method::ClosedForm);
                CHECK(r.value.real() == doctest::Approx(oracle::lorentzian(q, k, eps)).epsilon(1e-13));
                CHECK(r.value.imag() == 0.0);
            }
        }
    }
    CHECK(regularized_integral(RegularizedFamily(QParam(1.5), 0.1), 0.0, Method::ClosedForm).value.real() ==
          doctest::Approx(40.0).epsilon(1e-14));
    const double a = regularized_integral(RegularizedFamily(QParam(1.5), 1e-2), 1.0, Method::ClosedForm).value.real();
    const double b = regularized_integral(RegularizedFamily(QParam(1.5), 1e-3), 1.0, Method::ClosedForm).value.real();
    CHECK(a / b == doctest::Approx(10.0).epsilon(1e-3));
    CHECK(b == doctest::Approx(4e-3).epsilon(1e-5));
}

TEST_CASE("closed form and quadrature agree") {
    QuadratureConfig cfg;
    for (double q : kQs) {
        for (double k : {0.0, 0.5, -0.5, 2.0, -2.0}) {
            for (double eps : {1e-1, 1e-2, 1e-3}) {
                const RegularizedFamily fam(QParam(q), eps);
                const auto closed = regularized_integral(fam, k, Method::ClosedForm, cfg);
                const auto quad = regularized_integral(fam, k, Method::Quadrature, cfg);
                INFO("q=" << q << " k=" << k << " eps=" << eps);
                CHECK(std::abs(closed.value - quad.value) <= 10.0 * quad.error_estimate);
                CHECK(std::abs(quad.value.real() - oracle::lorentzian(q, k, eps)) <=
                      1e-8 * oracle::lorentzian(q, k, eps) + 10.0 * quad.error_estimate);
            }
        }
    }
}

TEST_CASE("regularised integral is positive and even in k") {
    for (double q : {1.01, 1.3, 1.99}) {
        for (double eps : {1e-4, 1e-1, 3.0}) {
            const RegularizedFamily fam(QParam(q), eps);
            for (double k = 0.0; k < 50.0; k += 0.37) {
                const double plus = regularized_integral(fam, k, Method::ClosedForm).value.real();
                const double minus = regularized_integral(fam, -k, Method::ClosedForm).value.real();
                CHECK(plus > 0.0);
                CHECK(plus == minus);
            }
        }
    }
}

TEST_CASE("total mass is 2pi/(2-q) for every epsilon") {
    QuadratureConfig cfg;
    CHECK(total_mass(RegularizedFamily(QParam(1.5), 0.3), cfg).value.real() ==
          doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-9));
    CHECK(total_mass(RegularizedFamily(QParam(1.1), 0.3), cfg).value.real() ==
          doctest::Approx(2.0 * std::numbers::pi / 0.9).epsilon(1e-9));
    for (double q : kQs) {
        const double coarse = total_mass(RegularizedFamily(QParam(q), 1e-1), cfg).value.real();
        const double fine = total_mass(RegularizedFamily(QParam(q), 1e-3), cfg).value.real();
        CHECK(std::abs(coarse - fine) < 1e-8 * coarse);
        CHECK(std::abs(fine - weight(q)) < 1e-8 * weight(q));
    }
}

TEST_CASE("Gaussian pairing matches the erfc closed form") {
    QuadratureConfig cfg;
    const auto phi = gaussian_family(1.0);
    for (double q : kQs) {
        for (double eps : default_eps_schedule()) {
            const auto r = delta_pair(RegularizedFamily(QParam(q), eps), phi, cfg);
            INFO("q=" << q << " eps=" << eps);
            CHECK(std::abs(r.value.real() - oracle::gauss_pairing(q, eps)) < 1e-9 * weight(q));
            CHECK(r.converged);
        }
    }
    // The O(ε) gap is (2π/(2-q))(2/√π)ε to leading order.
    const double gap = weight(1.9) - delta_pair(RegularizedFamily(QParam(1.9), 1e-4), phi, cfg).value.real();
    CHECK(gap == doctest::Approx(weight(1.9) * 2.0 / std::sqrt(std::numbers::pi) * 1e-4).epsilon(1e-3));
    CHECK(std::abs(gap) < 1e-2);
}

TEST_CASE("functions vanishing at the origin pair to O(epsilon)") {
    QuadratureConfig cfg;
    const auto phi = gaussian_family(1.0, {0.0, 0.0, 1.0});
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const auto r = delta_pair(RegularizedFamily(QParam(1.5), eps), phi, cfg);
        // ∫ (2/(2-q)) ε k²/(k²+ε²) e^{-k²} dk < (2/(2-q)) √π ε.
        CHECK(std::abs(r.value) <= 4.0 * std::sqrt(std::numbers::pi) * eps);
        CHECK(std::abs(r.value) >= 0.9 * 4.0 * std::sqrt(std::numbers::pi) * eps);
    }
}

TEST_CASE("pairing against a slowly decaying polynomial factor") {
    QuadratureConfig cfg;
    const auto phi = gaussian_family(0.3, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    const double eps = 1e-3;
    const auto r = delta_pair(RegularizedFamily(QParam(1.5), eps), phi, cfg);
    // k = ε tan θ turns the Lorentzian into the constant 2/(2-q) on (-π/2, π/2).
    const double h = 1.0e-9;
    const Complex brute = 4.0 * oracle::simpson(
                                    [&](double t) { return phi(Complex(eps * std::tan(t), 0.0)); },
                                    -std::numbers::pi / 2 + h, std::numbers::pi / 2 - h, 2000000);
    CHECK(std::abs(r.value - brute) < 1e-7 * std::abs(brute));
    // The k^6 factor keeps the finite-ε gap large.
    CHECK(std::abs(r.value - weight(1.5)) > 0.05);
}

TEST_CASE("real-axis pairing agrees with the contour pairing") {
    QuadratureConfig cfg;
    const auto phi = gaussian_family(1.0);
    for (double q : kQs) {
        const Complex contour = ultra::contour_pair(ultra::fq_rep(QParam(q)), phi, ultra::ContourSpec{1.0}, cfg).value;
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            const auto r = delta_pair(RegularizedFamily(QParam(q), eps), phi, cfg);
            const double bound = weight(q) * (2.0 / std::sqrt(std::numbers::pi)) * eps * 1.01 + r.error_estimate + 1e-9;
            CHECK(std::abs(r.value - contour) <= bound);
        }
    }
}

TEST_CASE("truncated integral") {
    QuadratureConfig cfg;
    CHECK(deltarep::truncated_integral(QParam(1.5), 0.0, 3.0) == Complex(6.0, 0.0));
    CHECK(deltarep::truncated_integral(QParam(1.2), 0.0, 3.0) == Complex(6.0, 0.0));
    // q = 1.5, k = 1: the antiderivative gives 2L / (1 + L²/4).
    for (double L : {0.5, 10.0, 100.0}) {
        const Complex v = deltarep::truncated_integral(QParam(1.5), 1.0, L);
        CHECK(std::abs(v - 2.0 * L / (1.0 + 0.25 * L * L)) < 1e-13 * std::abs(v));
    }
    const double ratio = std::abs(deltarep::truncated_integral(QParam(1.5), 1.0, 10.0)) /
                         std::abs(deltarep::truncated_integral(QParam(1.5), 1.0, 100.0));
    CHECK(ratio > 9.0);
    CHECK(ratio < 11.0);

    for (double q : {1.1, 1.5, 1.9}) {
        for (double k : {-3.0, 1e-7, 0.4, 2.0}) {
            for (double L : {0.7, 5.0}) {
                auto e = [&](double x) { return std::pow(1.0 + (1.0 - q) * Complex(0.0, k * x), 1.0 / (1.0 - q)); };
                const Complex brute = oracle::simpson(e, -L, L, 200000);
                const Complex closed = deltarep::truncated_integral(QParam(q), k, L);
                INFO("q=" << q << " k=" << k << " L=" << L);
                CHECK(std::abs(closed - brute) < 1e-9 * std::abs(brute));
                QuadratureConfig tight;
                tight.abs_tol = 1e-12;
                tight.rel_tol = 1e-11;
                const Complex quad = quadrature::integrate_finite(quadrature::ComplexIntegrand(e), -L, L, tight).value;
                CHECK(std::abs(closed - quad) < 1e-9 * std::abs(quad) + 1e-11);
            }
        }
    }
    CHECK_THROWS_AS(deltarep::truncated_integral(QParam(1.5), 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(deltarep::truncated_integral(QParam(1.5), NAN, 1.0), DomainError);
    CHECK_THROWS_AS(deltarep::truncated_integral(QParam(2.5), 1.0, 1.0), DomainError);
}

TEST_CASE("convergence sweep") {
    QuadratureConfig cfg;
    const auto phi = gaussian_family(1.0);

    SUBCASE("first-order convergence") {
        for (double q : kQs) {
            const SweepTable t = convergence_sweep(QParam(q), phi, default_eps_schedule(), cfg);
            REQUIRE(t.slope.has_value());
            CHECK(*t.slope >= 0.8);
            CHECK(*t.slope <= 1.2);
            CHECK(t.rows.size() == 7);
            CHECK(t.converged_rows() == 7);
            CHECK(t.limit.real() == doctest::Approx(weight(q)));
            CHECK_FALSE(t.rows[0].slope_running.has_value());
            for (std::size_t i = 1; i < t.rows.size(); ++i) {
                CHECK(t.rows[i].abs_error < t.rows[i - 1].abs_error);
                CHECK(*t.rows[i].slope_running == doctest::Approx(1.0).epsilon(0.05));
            }
        }
        CHECK(convergence_sweep(QParam(1.9), phi, {1e-2}, cfg).limit.real() ==
              doctest::Approx(20.0 * std::numbers::pi));
    }
    SUBCASE("single row has no slope") {
        const SweepTable t = convergence_sweep(QParam(1.5), phi, {1e-2}, cfg);
        CHECK(t.rows.size() == 1);
        CHECK_FALSE(t.slope.has_value());
    }
    SUBCASE("vanishing test function") {
        const auto z2 = gaussian_family(1.0, {0.0, 0.0, 1.0});
        const SweepTable t = convergence_sweep(QParam(1.5), z2, {1e-1, 1e-2, 1e-3}, cfg);
        CHECK(t.limit == Complex(0.0, 0.0));
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            CHECK(t.rows[i].abs_error == std::abs(t.rows[i].value));
            if (i) CHECK(t.rows[i].abs_error < t.rows[i - 1].abs_error);
        }
    }
    SUBCASE("failed rows are flagged and the sweep continues") {
        QuadratureConfig starved;
        starved.max_subdivisions = 1;
        const SweepTable t = convergence_sweep(QParam(1.5), phi, {1e-1, 1e-2}, starved);
        CHECK(t.rows.size() == 2);
        CHECK(t.converged_rows() == 0);
    }
    SUBCASE("schedule validation") {
        CHECK_THROWS_AS(convergence_sweep(QParam(1.5), phi, {}, cfg), DomainError);
        CHECK_THROWS_AS(convergence_sweep(QParam(1.5), phi, {1e-2, 1e-1}, cfg), DomainError);
        CHECK_THROWS_AS(convergence_sweep(QParam(1.5), phi, {1e-2, 1e-2}, cfg), DomainError);
        CHECK_THROWS_AS(convergence_sweep(QParam(1.5), phi, {1e-1, -1e-2}, cfg), DomainError);
    }
    SUBCASE("thread count does not change the table") {
        setenv("QDELTA_THREADS", "1", 1);
        const SweepTable a = convergence_sweep(QParam(1.5), phi, default_eps_schedule(), cfg);
        setenv("QDELTA_THREADS", "4", 1);
        const SweepTable b = convergence_sweep(QParam(1.5), phi, default_eps_schedule(), cfg);
        unsetenv("QDELTA_THREADS");
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].value == b.rows[i].value);
            CHECK(a.rows[i].evaluations == b.rows[i].evaluations);
        }
        CHECK(*a.slope == *b.slope);
    }
}
