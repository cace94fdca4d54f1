#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qdelta/quadrature.hpp"

namespace qdelta {

/// 17 significant digits, "%.17g".
std::string format_real(double x);
/// "a+bi" / "a-bi" at 17 significant digits; a zero imaginary part prints as "+0i".
std::string format_complex(Complex z);

/// Strict real parse of the whole string; throws DomainError otherwise.
double parse_real(std::string_view text);
/// Accepts "3", "-2.5e-3", "2i", "-i", "1+2i", "0.5-1e-3i" (no spaces).
Complex parse_complex(std::string_view text);
/// Comma-separated reals.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace qdelta
