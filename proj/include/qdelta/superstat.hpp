#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qdelta/quadrature.hpp"

namespace qdelta::superstat {

using quadrature::QuadratureConfig;

/// Probability density of the inverse temperature β on (0, ∞).
struct MixingDensity {
    std::function<double(double)> pdf;
    std::string label;
    std::map<std::string, double> params;
    /// κ in pdf(β) ~ β^κ as β → 0, when known.
    std::optional<double> origin_exponent;
    /// Mean and standard deviation of β; place quadrature breakpoints.
    double scale = 1.0;
    double spread = 1.0;
    /// Draws β; needed by mc_generalized_factor.
    std::function<double(std::mt19937_64&)> sampler;
};

/// Gamma(shape n, rate b): b^n β^{n-1} e^{-bβ} / Γ(n).
MixingDensity gamma_mixing(double shape, double rate);

enum class WeightMode {
    /// ∫ (dβ/β) f(β) e^{-βE}, the multiplicative-convolution measure.
    Haar,
    /// ∫ dβ f(β) e^{-βE}, the Laplace transform of f.
    Plain,
};

const char* to_string(WeightMode mode);

struct FactorResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    WeightMode mode = WeightMode::Plain;
};

/// Throws SingularOrigin in Haar mode when f(β)/β is not integrable at 0.
FactorResult generalized_factor(const MixingDensity& f, double energy, WeightMode mode, const QuadratureConfig& cfg);

/// q = 1 + 1/n and β_q = n / b make (1 + E/b)^{-n} ≡ e_q(-β_q E).
struct QExpMapping {
    double q = 0.0;
    double beta_q = 0.0;
};
QExpMapping gamma_qexp_mapping(double shape, double rate);

struct MatchRow {
    double energy = 0.0;
    double factor = 0.0;       // Plain-mode quadrature
    double closed_form = 0.0;  // (1 + E/b)^{-n}
    double q_exponential = 0.0;
    double rel_dev = 0.0;  // max relative deviation among the three
};

struct MatchReport {
    double shape = 0.0;
    double rate = 0.0;
    QExpMapping mapping;
    std::vector<MatchRow> rows;
    double max_rel_dev = 0.0;
};

/// Requires n > 1 (so q lies in (1, 2)) and b > 0.
MatchReport gamma_matches_qexp(double shape, double rate, const std::vector<double>& energies,
                               const QuadratureConfig& cfg);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::int64_t samples = 0;
};

/// Sample mean of e^{-βE} over β ~ f with its standard error. The draws are
/// split into fixed-size chunks, each seeded from (seed, chunk index), so the
/// result depends only on the seed, not on the thread count.
MonteCarloEstimate mc_generalized_factor(const MixingDensity& f, double energy, std::int64_t samples,
                                         std::uint64_t seed);

}  // namespace qdelta::superstat
