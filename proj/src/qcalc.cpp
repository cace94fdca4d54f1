#include "qdelta/qcalc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qdelta/errors.hpp"

namespace qdelta::qcalc {

namespace {

// log(1 + w) without losing digits for small |w|.
Complex complex_log1p(Complex w) {
    const double re = w.real();
    const double im = w.imag();
    const double modulus_log = 0.5 * std::log1p(2.0 * re + re * re + im * im);
    return {modulus_log, std::atan2(im, 1.0 + re)};
}

bool on_branch_cut(Complex base) { return base.imag() == 0.0 && base.real() <= 0.0; }

void require_finite(double x, const char* what) {
    if (std::isnan(x)) throw DomainError(std::string(what) + " is NaN");
}

}  // namespace

double q_exp(const QParam& q, double x) {
    require_finite(x, "q_exp argument");
    if (q.is_limit()) return std::exp(x);
    const double w = q.one_minus() * x;
    if (1.0 + w <= 0.0) return 0.0;
    return std::exp(std::log1p(w) / q.one_minus());
}

Complex principal_pow(Complex base, double exponent) {
    if (on_branch_cut(base)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "base %.6g%+.6gi lies on the branch cut (-inf, 0]", base.real(), base.imag());
        throw BranchCutError(buf);
    }
    return std::exp(exponent * std::log(base));
}

Complex q_exp_complex(const QParam& q, Complex z) {
    require_finite(z.real(), "real part of q_exp_complex argument");
    require_finite(z.imag(), "imaginary part of q_exp_complex argument");
    if (q.is_limit()) return std::exp(z);
    const Complex w = q.one_minus() * z;
    if (on_branch_cut(1.0 + w)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "1 + (1-q)z = %.6g%+.6gi lies on the branch cut", 1.0 + w.real(), w.imag());
        throw BranchCutError(buf);
    }
    return std::exp(complex_log1p(w) / q.one_minus());
}

Density uniform_density(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("uniform density needs finite a < b");
    const double height = 1.0 / (b - a);
    Density d;
    d.pdf = [height](double) { return height; };
    d.lo = a;
    d.hi = b;
    d.center = 0.5 * (a + b);
    d.scale = b - a;
    d.declared_variance = (b - a) * (b - a) / 12.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "uniform:a=%g,b=%g", a, b);
    d.label = buf;
    return d;
}

Density gaussian_density(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("gaussian density needs sigma > 0");
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    Density d;
    d.pdf = [norm, sigma](double x) {
        const double u = x / sigma;
        return norm * std::exp(-0.5 * u * u);
    };
    d.scale = sigma;
    d.declared_variance = sigma * sigma;
    char buf[64];
    std::snprintf(buf, sizeof buf, "gauss:sigma=%g", sigma);
    d.label = buf;
    return d;
}

double q_gaussian_normalization(const QParam& q, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("q-Gaussian needs beta > 0");
    if (q.is_limit()) return std::sqrt(beta / std::numbers::pi);
    if (!(q.value() > 1.0 && q.value() < 3.0)) throw DomainError("q-Gaussian needs 1 < q < 3");
    // t = x², μ = 1/2, ν = 1/(q-1), β' = (q-1)β in the Beta-type integral.
    const double nu = 1.0 / (q.value() - 1.0);
    const double rate = (q.value() - 1.0) * beta;
    const double integral =
        std::sqrt(std::numbers::pi / rate) * std::exp(std::lgamma(nu - 0.5) - std::lgamma(nu));
    return 1.0 / integral;
}

Density q_gaussian_pdf(const QParam& q, double beta) {
    const double norm = q_gaussian_normalization(q, beta);
    Density d;
    d.pdf = [q, beta, norm](double x) { return norm * q_exp(q, -beta * x * x); };
    d.scale = 1.0 / std::sqrt(2.0 * beta);
    if (q.is_limit()) {
        d.declared_variance = 1.0 / (2.0 * beta);
    } else {
        const double nu = 1.0 / (q.value() - 1.0);
        if (nu > 1.5) {
            const double rate = (q.value() - 1.0) * beta;
            d.declared_variance = norm * std::pow(rate, -1.5) * std::tgamma(1.5) *
                                  std::exp(std::lgamma(nu - 1.5) - std::lgamma(nu));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "qgauss:q=%g,beta=%g", q.value(), beta);
    d.label = buf;
    return d;
}

quadrature::IntegrationResult integrate_over_support(const std::function<double(double)>& g, const Density& f,
                                                     const QuadratureConfig& cfg) {
    cfg.validate();
    const quadrature::ComplexIntegrand h = [&](double x) { return Complex(g(x), 0.0); };
    if (f.bounded()) {
        std::vector<double> pts = {f.lo, f.hi};
        if (f.center > f.lo && f.center < f.hi) pts.insert(pts.begin() + 1, f.center);
        return quadrature::integrate_piecewise(h, pts, cfg);
    }

    // Open sides go to the mapped half-line rule, which copes with the
    // algebraic tails of q-Gaussians; octave breaks keep the peak resolved.
    std::vector<double> pts;
    for (double r = f.scale; r <= 64.0 * f.scale; r *= 4.0) {
        pts.push_back(f.center - r);
        pts.push_back(f.center + r);
    }
    return quadrature::integrate_interval(h, f.lo, f.hi, cfg, f.center, pts, f.scale);
}

EntropyResult shannon_entropy(const Density& f, const QuadratureConfig& cfg) {
    const auto r = integrate_over_support(
        [&](double x) {
            const double p = f(x);
            return p > 0.0 ? -p * std::log(p) : 0.0;
        },
        f, cfg);
    return {r.real(), r.error_estimate, r.evaluations};
}

EntropyResult tsallis_entropy(const QParam& q, const Density& f, const QuadratureConfig& cfg) {
    if (q.is_limit()) return shannon_entropy(f, cfg);
    require_entropy_range(q);
    const double qv = q.value();
    const auto r = integrate_over_support(
        [&](double x) {
            const double p = f(x);
            return p > 0.0 ? std::pow(p, qv) : 0.0;
        },
        f, cfg);
    const double denom = qv - 1.0;
    return {(1.0 - r.real()) / denom, r.error_estimate / std::abs(denom), r.evaluations};
}

std::vector<Perturbation> default_perturbations() {
    auto bump = [](double c, double w) {
        return [c, w](double x) {
            const double u = (x - c) / w;
            return std::exp(-0.5 * u * u);
        };
    };
    return {
        {bump(0.0, 0.5), "bump:c=0,w=0.5"},
        {[b = bump(1.0, 0.5)](double x) { return 0.5 * (b(x) + b(-x)); }, "pair:c=1,w=0.5"},
        {[b = bump(2.0, 0.7)](double x) { return -0.5 * (b(x) + b(-x)); }, "dip-pair:c=2,w=0.7"},
        {bump(0.8, 0.4), "shift:c=0.8,w=0.4"},
        {[](double x) { return std::cos(2.0 * x) * std::exp(-x * x / 8.0); }, "wave:cos(2x)exp(-x^2/8)"},
    };
}

namespace {

struct Projected {
    Density density;
    int iterations = 0;
};

double second_moment(const QParam& q, const Density& f, MomentConstraint constraint, const QuadratureConfig& cfg) {
    const double qv = q.value();
    if (constraint == MomentConstraint::Linear) {
        return integrate_over_support([&](double x) { return x * x * f(x); }, f, cfg).real();
    }
    auto weight = [&](double x) {
        const double p = f(x);
        return p > 0.0 ? std::pow(p, qv) : 0.0;
    };
    const double num = integrate_over_support([&](double x) { return x * x * weight(x); }, f, cfg).real();
    const double den = integrate_over_support(weight, f, cfg).real();
    return num / den;
}

// h(x) = amplitude · g(x / stretch) / stretch
Density stretched(const Density& base, double amplitude, double stretch) {
    Density d = base;
    d.pdf = [pdf = base.pdf, amplitude, stretch](double x) { return amplitude * pdf(x / stretch) / stretch; };
    d.center = base.center * stretch;
    d.scale = base.scale * stretch;
    d.lo = base.lo * stretch;
    d.hi = base.hi * stretch;
    return d;
}

Projected project(const QParam& q, const Density& raw, double target_moment, MomentConstraint constraint,
                  const QuadratureConfig& cfg) {
    constexpr double kTol = 1e-12;
    double amplitude = 1.0;
    double stretch = 1.0;
    for (int it = 1; it <= 100; ++it) {
        const Density h = stretched(raw, amplitude, stretch);
        const double mass = integrate_over_support([&](double x) { return h(x); }, h, cfg).real();
        double moment = second_moment(q, h, constraint, cfg);
        if (std::abs(mass - 1.0) <= kTol && std::abs(moment / target_moment - 1.0) <= kTol) {
            return {h, it};
        }
        amplitude /= mass;
        if (constraint == MomentConstraint::Linear) moment /= mass;
        stretch *= std::sqrt(target_moment / moment);
    }
    throw ProjectionFailure("normalisation/moment projection did not converge in 100 rounds");
}

}  // namespace

MaximalityReport entropy_maximality_check(const QParam& q, double beta, const std::vector<Perturbation>& perturbations,
                                          double scale, const QuadratureConfig& cfg, MomentConstraint constraint,
                                          double tolerance) {
    require_entropy_range(q);
    if (!std::isfinite(scale)) throw DomainError("perturbation scale must be finite");
    const Density reference = q_gaussian_pdf(q, beta);

    // The projection needs integrals well below its 1e-12 stopping test.
    QuadratureConfig tight = cfg;
    tight.abs_tol = std::min(cfg.abs_tol, 1e-15);
    tight.rel_tol = std::min(cfg.rel_tol, 1e-13);
    tight.max_subdivisions = std::max(cfg.max_subdivisions, 20'000);

    MaximalityReport report;
    report.q = q.value();
    report.beta = beta;
    report.scale = scale;
    report.tolerance = tolerance;
    report.constraint = constraint;
    report.reference_entropy = tsallis_entropy(q, reference, tight).value;
    report.reference_moment = second_moment(q, reference, constraint, tight);

    for (const Perturbation& p : perturbations) {
        Density raw = reference;
        raw.pdf = [ref = reference.pdf, shape = p.shape, scale](double x) {
            const double factor = 1.0 + scale * shape(x);
            if (factor < 0.0) throw DomainError("perturbation makes the density negative; reduce the scale");
            return ref(x) * factor;
        };
        const Projected proj = project(q, raw, report.reference_moment, constraint, tight);
        PerturbationOutcome out;
        out.label = p.label;
        out.entropy = tsallis_entropy(q, proj.density, tight).value;
        out.delta = out.entropy - report.reference_entropy;
        out.projection_iterations = proj.iterations;
        out.exceeds = out.delta > tolerance;
        report.any_exceeds = report.any_exceeds || out.exceeds;
        report.outcomes.push_back(std::move(out));
    }
    return report;
}

}  // namespace qdelta::qcalc
