#include "qdelta/superstat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qdelta/errors.hpp"
#include "qdelta/parallel.hpp"
#include "qdelta/qcalc.hpp"
#include "qdelta/qparam.hpp"

namespace qdelta::superstat {


namespace {

constexpr std::int64_t kChunk = 1 << 16;

// Running count / mean / sum of squared deviations.
struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        const double total = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / total;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
};

// pdf(β) ~ β^κ near 0, estimated from two small arguments when undeclared.
std::optional<double> origin_exponent(const MixingDensity& f) {
    if (f.origin_exponent) return f.origin_exponent;
    const double near = f.pdf(1e-8 * f.scale);
    const double far = f.pdf(1e-6 * f.scale);
    if (!(near > 0.0) || !(far > 0.0)) return std::nullopt;
    return std::log(far / near) / std::log(100.0);
}

}  // namespace

const char* to_string(WeightMode mode) { return mode == WeightMode::Haar ? "haar" : "plain"; }

MixingDensity gamma_mixing(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
        throw DomainError("Gamma mixing density needs shape > 0 and rate > 0");
    }
    const double log_norm = shape * std::log(rate) - std::lgamma(shape);
    MixingDensity f;
    f.pdf = [shape, rate, log_norm](double beta) {
        if (!(beta > 0.0)) return 0.0;
        return std::exp((shape - 1.0) * std::log(beta) - rate * beta + log_norm);
    };
    char buf[64];
    std::snprintf(buf, sizeof buf, "gamma:n=%g,b=%g", shape, rate);
    f.label = buf;
    f.params = {{"shape", shape}, {"rate", rate}};
    f.origin_exponent = shape - 1.0;
    f.scale = shape / rate;
    f.spread = std::sqrt(shape) / rate;
    f.sampler = [shape, rate](std::mt19937_64& rng) {
        return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
    };
    return f;
}

FactorResult generalized_factor(const MixingDensity& f, double energy, WeightMode mode, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(energy >= 0.0) || !std::isfinite(energy)) throw DomainError("energy must be finite and >= 0");
    if (!(f.scale > 0.0) || !(f.spread > 0.0)) throw DomainError("mixing density needs positive scale and spread");

    const std::optional<double> kappa = origin_exponent(f);
    double left_exponent = 1.0;
    if (mode == WeightMode::Haar) {
        if (kappa && *kappa <= 1e-9) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "f(beta)/beta is not integrable at 0 (pdf ~ beta^%.3g)", *kappa);
            throw SingularOrigin(buf);
        }
        if (kappa) left_exponent = *kappa;
    } else if (kappa) {
        left_exponent = *kappa + 1.0;
    }
    left_exponent = std::min(left_exponent, 1.0);

    auto g = [&](double beta) {
        const double weight = f.pdf(beta) * std::exp(-beta * energy);
        return Complex(mode == WeightMode::Haar ? weight / beta : weight, 0.0);
    };

    // Breakpoints around the tilted bulk; exact for the Gamma family, where
    // e^{-βE} turns rate b into b + E.
    const double tilt = 1.0 / (1.0 + energy * f.spread * f.spread / f.scale);
    std::vector<double> pts = {f.scale};
    for (double k : {0.0, 1.0, 3.0, 6.0, 10.0}) {
        for (double sgn : {-1.0, 1.0}) {
            const double b = tilt * (f.scale + sgn * k * f.spread);
            if (b > 0.0) pts.push_back(b);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    QuadratureConfig part = cfg;
    part.abs_tol = cfg.abs_tol / 3.0;
    quadrature::IntegrationResult r = quadrature::integrate_finite(g, 0.0, pts.front(), part, left_exponent);
    if (pts.size() > 1) r += quadrature::integrate_piecewise(g, pts, part);
    quadrature::HalfLineHints hints;
    hints.scale = tilt * f.spread;
    const double edge = pts.back();
    r += quadrature::integrate_semi_infinite(quadrature::ComplexIntegrand([&](double x) { return g(edge + x); }), 0.0,
                                             part, hints);
    return {r.real(), r.error_estimate, r.evaluations, mode};
}

QExpMapping gamma_qexp_mapping(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("mapping needs shape > 0 and rate > 0");
    return {1.0 + 1.0 / shape, shape / rate};
}

MatchReport gamma_matches_qexp(double shape, double rate, const std::vector<double>& energies,
                               const QuadratureConfig& cfg) {
    if (!(shape > 1.0)) throw DomainError("gamma_matches_qexp needs shape n > 1 so that q = 1 + 1/n < 2");
    const MixingDensity f = gamma_mixing(shape, rate);
    MatchReport report;
    report.shape = shape;
    report.rate = rate;
    report.mapping = gamma_qexp_mapping(shape, rate);
    const QParam q(report.mapping.q);

    for (double e : energies) {
        MatchRow row;
        row.energy = e;
        row.factor = generalized_factor(f, e, WeightMode::Plain, cfg).value;
        row.closed_form = std::exp(-shape * std::log1p(e / rate));
        row.q_exponential = qcalc::q_exp(q, -report.mapping.beta_q * e);
        const double ref = row.closed_form;
        row.rel_dev = std::max({std::abs(row.factor - ref) / ref, std::abs(row.q_exponential - ref) / ref,
                                std::abs(row.factor - row.q_exponential) / row.q_exponential});
        report.max_rel_dev = std::max(report.max_rel_dev, row.rel_dev);
        report.rows.push_back(row);
    }
    return report;
}

MonteCarloEstimate mc_generalized_factor(const MixingDensity& f, double energy, std::int64_t samples,
                                         std::uint64_t seed) {
    if (!f.sampler) throw DomainError("mixing density " + f.label + " has no sampler");
    if (samples < 100) throw DomainError("Monte Carlo needs at least 100 samples");
    if (!(energy >= 0.0) || !std::isfinite(energy)) throw DomainError("energy must be finite and >= 0");

    const std::size_t chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
    std::vector<Moments> partial(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c)};
        std::mt19937_64 rng(seq);
        const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
        const std::int64_t count = std::min(kChunk, samples - begin);
        Moments m;
        for (std::int64_t i = 0; i < count; ++i) m.add(std::exp(-f.sampler(rng) * energy));
        partial[c] = m;
    });

    Moments total;
    for (const Moments& m : partial) total.merge(m);
    const double n = static_cast<double>(total.n);
    return {total.mean, std::sqrt(total.m2 / (n - 1.0) / n), total.n};
}

}  // namespace qdelta::superstat
