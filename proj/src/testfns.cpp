#include "qdelta/testfns.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdelta/errors.hpp"
#include "qdelta/numeric_text.hpp"

namespace qdelta::testfns {

Complex polyval(const std::vector<Complex>& coeffs, Complex z) {
    Complex acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

TestFunction gaussian_family(double a, std::vector<Complex> poly_coeffs) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("gaussian test function needs a > 0");
    if (poly_coeffs.empty()) poly_coeffs = {Complex(1.0, 0.0)};
    while (poly_coeffs.size() > 1 && poly_coeffs.back() == Complex(0.0, 0.0)) poly_coeffs.pop_back();

    TestFunction phi;
    phi.decay_rate = a;
    phi.poly_coeffs = poly_coeffs;
    phi.polynomial_degree = static_cast<int>(poly_coeffs.size()) - 1;
    phi.value_at_zero = poly_coeffs.front();
    phi.eval = [a, poly_coeffs](Complex z) {
        if (z == Complex(0.0, 0.0)) return poly_coeffs.front();
        return polyval(poly_coeffs, z) * std::exp(-a * z * z);
    };

    std::string label = "gauss:a=" + format_real(a);
    const bool plain = poly_coeffs.size() == 1 && poly_coeffs.front() == Complex(1.0, 0.0);
    if (!plain) {
        label += ",poly=";
        for (std::size_t i = 0; i < poly_coeffs.size(); ++i) {
            if (i) label += ',';
            const Complex c = poly_coeffs[i];
            label += c.imag() == 0.0 ? format_real(c.real()) : format_complex(c);
        }
    }
    phi.label = std::move(label);
    return phi;
}

TestFunction parse_test_function(std::string_view label) {
    constexpr std::string_view prefix = "gauss:";
    if (label.substr(0, prefix.size()) != prefix) {
        throw DomainError("unknown test function '" + std::string(label) + "' (expected gauss:a=...)");
    }
    std::string_view rest = label.substr(prefix.size());
    double a = 1.0;
    std::vector<Complex> coeffs;
    bool in_poly = false;
    while (!rest.empty()) {
        const std::size_t comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.substr(0, 2) == "a=") {
            a = parse_real(item.substr(2));
            in_poly = false;
        } else if (item.substr(0, 5) == "poly=") {
            coeffs.push_back(parse_complex(item.substr(5)));
            in_poly = true;
        } else if (in_poly) {
            coeffs.push_back(parse_complex(item));
        } else {
            throw DomainError("unrecognised test function field '" + std::string(item) + "'");
        }
    }
    return gaussian_family(a, coeffs);
}

double strip_norm(const TestFunction& phi, int p, double n, int grid_density, int lines) {
    if (p < 0 || !(n >= 0.0) || grid_density < 2 || lines < 1) {
        throw DomainError("strip_norm needs p >= 0, n >= 0, grid_density >= 2, lines >= 1");
    }
    auto windowed_max = [&](double half_width) {
        double best = 0.0;
        for (int l = 0; l < lines; ++l) {
            const double h = lines == 1 ? 0.0 : -n + 2.0 * n * l / (lines - 1);
            for (int j = 0; j < grid_density; ++j) {
                const double t = -half_width + 2.0 * half_width * j / (grid_density - 1);
                const Complex z(t, h);
                best = std::max(best, std::pow(1.0 + std::abs(z), p) * std::abs(phi(z)));
            }
        }
        return best;
    };
    // Start from a window covering the Gaussian core and the polynomial's reach.
    double half_width = 4.0 / std::sqrt(phi.decay_rate) + n;
    double current = windowed_max(half_width);
    for (int i = 0; i < 40; ++i) {
        half_width *= 2.0;
        const double wider = windowed_max(half_width);
        const double change = std::abs(wider - current);
        current = std::max(current, wider);
        if (change < 1e-12 * std::max(1.0, current)) break;
    }
    return current;
}

}  // namespace qdelta::testfns
