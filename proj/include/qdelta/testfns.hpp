#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qdelta/quadrature.hpp"

namespace qdelta::testfns {

/// An entire function rapidly decreasing on every horizontal line:
/// z ↦ P(z)·exp(-a z²).
struct TestFunction {
    std::function<Complex(Complex)> eval;
    Complex value_at_zero{};
    double decay_rate = 1.0;  // a
    int polynomial_degree = 0;
    std::vector<Complex> poly_coeffs;  // ascending powers
    std::string label;

    Complex operator()(Complex z) const { return eval(z); }
};

/// Throws DomainError unless a > 0. An empty coefficient list means P = 1.
TestFunction gaussian_family(double a, std::vector<Complex> poly_coeffs = {Complex(1.0, 0.0)});

/// Parses "gauss:a=1" or "gauss:a=0.5,poly=1,0,1" (coefficients in ascending
/// order, each a real or a+bi complex literal).
TestFunction parse_test_function(std::string_view label);

/// Lower bound on sup_{|Im z| <= n} (1+|z|)^p |φ(z)| from a sampled grid:
/// `lines` equally spaced heights, `grid_density` points per line, real window
/// doubled until the maximum changes by less than 1e-12.
double strip_norm(const TestFunction& phi, int p, double n, int grid_density = 2001, int lines = 11);

/// Horner evaluation of Σ c_j z^j.
Complex polyval(const std::vector<Complex>& coeffs, Complex z);

}  // namespace qdelta::testfns
