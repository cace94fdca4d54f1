#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qdelta/qparam.hpp"
#include "qdelta/quadrature.hpp"

namespace qdelta::qcalc {

using quadrature::QuadratureConfig;

/// e_q(x) = (1 + (1-q)x)_+^{1/(1-q)}; exactly 0 once the base is <= 0.
double q_exp(const QParam& q, double x);

/// exp(Log(1 + (1-q)z) / (1-q)) with the principal logarithm.
/// Throws BranchCutError when the base lies on the closed negative real axis.
Complex q_exp_complex(const QParam& q, Complex z);

/// Principal power base^exponent, refusing bases on (-∞, 0].
Complex principal_pow(Complex base, double exponent);

/// A probability density on the real line.
struct Density {
    std::function<double(double)> pdf;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    /// Where unbounded supports are split and truncation starts searching.
    double center = 0.0;
    /// Characteristic width (standard deviation or similar).
    double scale = 1.0;
    std::optional<double> declared_variance;
    std::string label;

    double operator()(double x) const { return (x < lo || x > hi) ? 0.0 : pdf(x); }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

Density uniform_density(double a, double b);
Density gaussian_density(double sigma);

/// x ↦ C·e_q(-βx²), 1 < q < 3 (or limit mode), normalised through
/// ∫_0^∞ t^{μ-1}(1+βt)^{-ν} dt = β^{-μ}Γ(μ)Γ(ν-μ)/Γ(ν) with t = x², μ = 1/2.
Density q_gaussian_pdf(const QParam& q, double beta);
/// The normalising constant C_q(β) used by q_gaussian_pdf.
double q_gaussian_normalization(const QParam& q, double beta);

struct EntropyResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

/// ∫ g(x) dx over the support of `f`. Unbounded supports are truncated where
/// |g| drops below abs_tol / width, then integrated adaptively.
quadrature::IntegrationResult integrate_over_support(const std::function<double(double)>& g, const Density& f,
                                                     const QuadratureConfig& cfg);

/// (1 - ∫ f^q) / (q - 1), which tends to the Shannon entropy as q → 1;
/// dispatches to shannon_entropy in limit mode.
EntropyResult tsallis_entropy(const QParam& q, const Density& f, const QuadratureConfig& cfg);
/// -∫ f log f.
EntropyResult shannon_entropy(const Density& f, const QuadratureConfig& cfg);

/// Which second moment the maximality probe holds fixed.
enum class MomentConstraint {
    /// ∫x² f^q / ∫f^q, the q-expectation under which e_q(-βx²) is the H_q maximiser.
    Escort,
    /// ∫x² f. The e_q-Gaussian is not stationary for H_q under this constraint.
    Linear,
};

struct Perturbation {
    std::function<double(double)> shape;  // bounded, smooth
    std::string label;
};

/// Symmetric and asymmetric Gaussian bumps used when no perturbations are given.
std::vector<Perturbation> default_perturbations();

struct PerturbationOutcome {
    std::string label;
    double entropy = 0.0;
    double delta = 0.0;  // H_q(perturbed) - H_q(q-Gaussian)
    int projection_iterations = 0;
    bool exceeds = false;  // delta > tolerance
};

struct MaximalityReport {
    double q = 0.0;
    double beta = 0.0;
    double scale = 0.0;
    double tolerance = 0.0;
    MomentConstraint constraint = MomentConstraint::Escort;
    double reference_entropy = 0.0;
    double reference_moment = 0.0;
    std::vector<PerturbationOutcome> outcomes;
    bool any_exceeds = false;
};

/// Perturbs the q-Gaussian as f·(1 + scale·b), projects back onto unit mass
/// and the reference second moment by alternating x → λx rescaling and
/// renormalisation (to 1e-12, at most 100 rounds), and compares H_q.
MaximalityReport entropy_maximality_check(const QParam& q, double beta, const std::vector<Perturbation>& perturbations,
                                          double scale, const QuadratureConfig& cfg,
                                          MomentConstraint constraint = MomentConstraint::Escort,
                                          double tolerance = 1e-10);

}  // namespace qdelta::qcalc
