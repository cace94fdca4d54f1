#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qdelta {

using Complex = std::complex<double>;

namespace quadrature {

using RealIntegrand = std::function<double(double)>;
using ComplexIntegrand = std::function<Complex(double)>;
/// Function of a complex argument; horizontal-line integrals sample it at t + i·h.
using AnalyticIntegrand = std::function<Complex(Complex)>;

enum class TailKind { AnalyticTail, ExponentialMap, Truncate };

struct TailStrategy {
    TailKind kind = TailKind::AnalyticTail;
    /// Length of the integrated window for Truncate; ignored otherwise.
    double cutoff = 0.0;

    static TailStrategy analytic() { return {TailKind::AnalyticTail, 0.0}; }
    static TailStrategy exponential_map() { return {TailKind::ExponentialMap, 0.0}; }
    static TailStrategy truncate(double cutoff) { return {TailKind::Truncate, cutoff}; }
};

/// What to do when the subdivision budget runs out.
enum class OnFailure { Throw, Report };

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 10'000;
    TailStrategy tail = TailStrategy::analytic();
    OnFailure on_failure = OnFailure::Throw;

    /// Throws DomainError unless abs_tol > 0, rel_tol > 0, max_subdivisions >= 1.
    void validate() const;
    double tolerance_for(double magnitude) const;
};

struct IntegrationResult {
    Complex value{};
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = true;

    double real() const { return value.real(); }
    IntegrationResult& operator+=(const IntegrationResult& other);
};

IntegrationResult operator+(IntegrationResult a, const IntegrationResult& b);
IntegrationResult operator-(IntegrationResult a, const IntegrationResult& b);
IntegrationResult operator*(Complex scale, IntegrationResult r);

/// Per-call knowledge about a half-line integrand.
struct HalfLineHints {
    /// Characteristic length of the integrand; sets the split point and the map.
    double scale = 1.0;
    /// The integrand behaves like (x - a)^(left_exponent - 1) near a. Values
    /// below 1 switch the head interval to x = a + w·u^(1/left_exponent).
    double left_exponent = 1.0;
    /// ∫_X^∞ f(x) dx for the AnalyticTail strategy. Leave empty to fall back to
    /// ExponentialMap.
    std::function<Complex(double)> tail;
    /// With AnalyticTail the closed form is used beyond X = a + split_factor·scale.
    double split_factor = 32.0;
};

/// G7/K15 on [a, b]. Used by the adaptive driver; exposed for tests.
struct RuleEstimate {
    Complex kronrod{};
    Complex gauss{};
    double abs_mass = 0.0;  // K15 estimate of ∫|f|
};
RuleEstimate gauss_kronrod_15(const ComplexIntegrand& f, double a, double b);

/// Global adaptive bisection over the intervals delimited by `breakpoints`
/// (sorted, at least two entries). Real and imaginary parts share the tree.
IntegrationResult integrate_piecewise(const ComplexIntegrand& f, std::span<const double> breakpoints,
                                      const QuadratureConfig& cfg);

IntegrationResult integrate_finite(const ComplexIntegrand& f, double a, double b,
                                   const QuadratureConfig& cfg, double left_exponent = 1.0);
IntegrationResult integrate_finite(const RealIntegrand& f, double a, double b,
                                   const QuadratureConfig& cfg, double left_exponent = 1.0);

/// ∫_a^∞ f(x) dx.
IntegrationResult integrate_semi_infinite(const ComplexIntegrand& f, double a,
                                          const QuadratureConfig& cfg, const HalfLineHints& hints = {});
IntegrationResult integrate_semi_infinite(const RealIntegrand& f, double a, const QuadratureConfig& cfg,
                                          const HalfLineHints& hints = {});

/// ∫_lo^hi f over a possibly unbounded interval; infinite ends are split at
/// `center` and handed to integrate_semi_infinite. Interior breakpoints are
/// honoured on the finite part.
IntegrationResult integrate_interval(const ComplexIntegrand& f, double lo, double hi,
                                     const QuadratureConfig& cfg, double center = 0.0,
                                     std::span<const double> interior_breaks = {}, double scale = 1.0);

/// ∫_{-∞}^{∞} f(t + i·h) dt, traversed left to right.
IntegrationResult integrate_horizontal_line(const AnalyticIntegrand& f, double h, const QuadratureConfig& cfg,
                                            double scale = 1.0);

}  // namespace quadrature
}  // namespace qdelta
