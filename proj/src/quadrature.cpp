#include "qdelta/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>

#include "qdelta/errors.hpp"

namespace qdelta::quadrature {

namespace {

// Kronrod abscissae on [-1, 1], descending; odd indices are the Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Weights of the 7-point Gauss rule at kNodes[1], [3], [5], [7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

Complex checked_eval(const ComplexIntegrand& f, double x) {
    const Complex y = f(x);
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "integrand is not finite at x = %.17g", x);
        throw NonFiniteIntegrand(buf, x);
    }
    return y;
}

struct Segment {
    double a;
    double b;
    Complex value;
    double error;
};

struct LargerError {
    bool operator()(const Segment& l, const Segment& r) const {
        if (l.error != r.error) return l.error < r.error;
        return l.a > r.a;
    }
};

Segment evaluate_segment(const ComplexIntegrand& f, double a, double b) {
    const RuleEstimate r = gauss_kronrod_15(f, a, b);
    // Raw rule difference, floored at the rounding level of the K15 sum.
    const double err = std::max(std::abs(r.kronrod - r.gauss), 50.0 * kEps * r.abs_mass);
    return {a, b, r.kronrod, err};
}

IntegrationResult fail_or_report(const IntegrationResult& partial, const QuadratureConfig& cfg,
                                 const char* why) {
    if (cfg.on_failure == OnFailure::Throw) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s (value %.6g, error estimate %.3g, %lld evaluations)", why,
                      std::abs(partial.value), partial.error_estimate,
                      static_cast<long long>(partial.evaluations));
        throw QuadratureFailure(buf, partial.value.real(), partial.error_estimate);
    }
    IntegrationResult r = partial;
    r.converged = false;
    return r;
}

QuadratureConfig split_tolerance(const QuadratureConfig& cfg, double parts) {
    QuadratureConfig c = cfg;
    c.abs_tol = cfg.abs_tol / parts;
    return c;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
        throw DomainError("quadrature config requires abs_tol > 0, rel_tol > 0, max_subdivisions >= 1");
    }
    if (tail.kind == TailKind::Truncate && !(tail.cutoff > 0.0)) {
        throw DomainError("Truncate tail strategy requires a positive cutoff");
    }
}

double QuadratureConfig::tolerance_for(double magnitude) const {
    return std::max(abs_tol, rel_tol * std::abs(magnitude));
}

IntegrationResult& IntegrationResult::operator+=(const IntegrationResult& other) {
    value += other.value;
    error_estimate += other.error_estimate;
    evaluations += other.evaluations;
    converged = converged && other.converged;
    return *this;
}

IntegrationResult operator+(IntegrationResult a, const IntegrationResult& b) { return a += b; }

IntegrationResult operator-(IntegrationResult a, const IntegrationResult& b) {
    a.value -= b.value;
    a.error_estimate += b.error_estimate;
    a.evaluations += b.evaluations;
    a.converged = a.converged && b.converged;
    return a;
}

IntegrationResult operator*(Complex scale, IntegrationResult r) {
    r.value *= scale;
    r.error_estimate *= std::abs(scale);
    return r;
}

RuleEstimate gauss_kronrod_15(const ComplexIntegrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const Complex fc = checked_eval(f, center);
    Complex kronrod = kKronrodWeights[7] * fc;
    Complex gauss = kGaussWeights[3] * fc;
    double abs_mass = kKronrodWeights[7] * std::abs(fc);

    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const Complex lo = checked_eval(f, center - dx);
        const Complex hi = checked_eval(f, center + dx);
        kronrod += kKronrodWeights[i] * (lo + hi);
        abs_mass += kKronrodWeights[i] * (std::abs(lo) + std::abs(hi));
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (lo + hi);
    }
    return {kronrod * half, gauss * half, abs_mass * std::abs(half)};
}

IntegrationResult integrate_piecewise(const ComplexIntegrand& f, std::span<const double> breakpoints,
                                      const QuadratureConfig& cfg) {
    cfg.validate();
    if (breakpoints.size() < 2) throw DomainError("integrate_piecewise needs at least two breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i - 1] < breakpoints[i]) || !std::isfinite(breakpoints[i - 1]) ||
            !std::isfinite(breakpoints[i])) {
            throw DomainError("breakpoints must be finite and strictly increasing");
        }
    }

    std::priority_queue<Segment, std::vector<Segment>, LargerError> heap;
    Complex total{};
    double total_err = 0.0;
    std::int64_t evals = 0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        Segment s = evaluate_segment(f, breakpoints[i - 1], breakpoints[i]);
        evals += 15;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }

    bool ok = true;
    const char* why = nullptr;
    while (total_err > cfg.tolerance_for(std::abs(total))) {
        if (static_cast<int>(heap.size()) >= cfg.max_subdivisions) {
            ok = false;
            why = "subdivision budget exhausted";
            break;
        }
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            ok = false;
            why = "interval cannot be bisected further";
            break;
        }
        heap.pop();
        const Segment left = evaluate_segment(f, worst.a, mid);
        const Segment right = evaluate_segment(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Fixed summation order: left to right.
    std::vector<Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
    IntegrationResult out;
    for (const Segment& s : segments) {
        out.value += s.value;
        out.error_estimate += s.error;
    }
    out.evaluations = evals;
    if (!ok || out.error_estimate > cfg.tolerance_for(std::abs(out.value))) {
        return fail_or_report(out, cfg, why ? why : "tolerance not met");
    }
    return out;
}

IntegrationResult integrate_finite(const ComplexIntegrand& f, double a, double b, const QuadratureConfig& cfg,
                                   double left_exponent) {
    if (!(a < b)) throw DomainError("integrate_finite requires a < b");
    if (!(left_exponent > 0.0)) throw DomainError("left endpoint exponent must be positive");
    const std::array<double, 2> unit = {0.0, 1.0};
    if (left_exponent >= 1.0) {
        const std::array<double, 2> ab = {a, b};
        return integrate_piecewise(f, ab, cfg);
    }
    // x = a + w·u^m with m = 1/left_exponent flattens (x - a)^(left_exponent - 1).
    const double m = 1.0 / left_exponent;
    const double w = b - a;
    auto g = [&](double u) {
        const double um1 = std::pow(u, m - 1.0);
        return f(a + w * um1 * u) * (w * m * um1);
    };
    return integrate_piecewise(g, unit, cfg);
}

IntegrationResult integrate_finite(const RealIntegrand& f, double a, double b, const QuadratureConfig& cfg,
                                   double left_exponent) {
    return integrate_finite(ComplexIntegrand([&](double x) { return Complex(f(x), 0.0); }), a, b, cfg,
                            left_exponent);
}

IntegrationResult integrate_semi_infinite(const ComplexIntegrand& f, double a, const QuadratureConfig& cfg,
                                          const HalfLineHints& hints) {
    cfg.validate();
    if (!std::isfinite(a)) throw DomainError("semi-infinite lower limit must be finite");
    if (!(hints.scale > 0.0) || !std::isfinite(hints.scale)) throw DomainError("half-line scale must be positive");

    TailKind kind = cfg.tail.kind;
    if (kind == TailKind::AnalyticTail && !hints.tail) kind = TailKind::ExponentialMap;

    switch (kind) {
        case TailKind::Truncate:
            return integrate_finite(f, a, a + cfg.tail.cutoff, cfg, hints.left_exponent);

        case TailKind::AnalyticTail: {
            const double split = a + hints.split_factor * hints.scale;
            IntegrationResult r = integrate_finite(f, a, split, cfg, hints.left_exponent);
            const Complex tail = hints.tail(split);
            if (!std::isfinite(tail.real()) || !std::isfinite(tail.imag())) {
                throw TailDivergence("analytic tail is not finite at the split point");
            }
            r.value += tail;
            return r;
        }

        case TailKind::ExponentialMap:
            break;
    }

    const QuadratureConfig half_cfg = split_tolerance(cfg, 2.0);
    const double s = hints.scale;
    IntegrationResult head = integrate_finite(f, a, a + s, half_cfg, hints.left_exponent);

    // Beyond a + s: x = a + s·e^t turns algebraic decay |x|^-p into e^{-(p-1)t}.
    auto g = [&](double t) {
        const double et = std::exp(t);
        return f(a + s * et) * (s * et);
    };
    const double tail_tol = 0.1 * half_cfg.tolerance_for(std::abs(head.value));
    std::vector<double> breaks = {0.0};
    double prev_t = 0.0;
    double prev_mag = 0.0;
    double remainder = 0.0;
    std::int64_t probe_evals = 0;
    bool settled = false;
    for (double t = 1.0; t <= 512.0; t *= 2.0) {
        double mag = 0.0;
        for (double dt : {0.0, 0.37, 0.71}) mag = std::max(mag, std::abs(checked_eval(g, t + dt)));
        probe_evals += 3;
        breaks.push_back(t);
        if (mag == 0.0) {
            settled = true;
            break;
        }
        if (prev_mag > 0.0) {
            const double rate = std::log(prev_mag / mag) / (t - prev_t);
            if (rate > 0.0 && mag / rate <= tail_tol) {
                remainder = mag / rate;
                settled = true;
                break;
            }
            if (t >= 32.0 && !(rate > 0.0)) {
                throw TailDivergence("integrand does not decay along the half-line");
            }
        }
        prev_t = t;
        prev_mag = mag;
    }
    if (!settled) throw TailDivergence("half-line tail decays too slowly to meet the tolerance");

    IntegrationResult body = integrate_piecewise(g, breaks, half_cfg);
    IntegrationResult total = head + body;
    total.error_estimate += remainder;
    total.evaluations += probe_evals;
    return total;
}

IntegrationResult integrate_semi_infinite(const RealIntegrand& f, double a, const QuadratureConfig& cfg,
                                          const HalfLineHints& hints) {
    return integrate_semi_infinite(ComplexIntegrand([&](double x) { return Complex(f(x), 0.0); }), a, cfg,
                                   hints);
}

IntegrationResult integrate_interval(const ComplexIntegrand& f, double lo, double hi, const QuadratureConfig& cfg,
                                     double center, std::span<const double> interior_breaks, double scale) {
    if (!(lo < hi)) throw DomainError("integrate_interval requires lo < hi");
    const bool left_open = std::isinf(lo);
    const bool right_open = std::isinf(hi);

    std::vector<double> pts;
    for (double b : interior_breaks) {
        if (b > lo && b < hi) pts.push_back(b);
    }
    if (left_open || right_open) {
        if (!(center > lo && center < hi)) center = left_open ? (right_open ? 0.0 : hi - scale) : lo + scale;
        pts.push_back(center);
    }
    if (!left_open) pts.push_back(lo);
    if (!right_open) pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const int parts = (left_open ? 1 : 0) + (right_open ? 1 : 0) + (pts.size() > 1 ? 1 : 0);
    const QuadratureConfig part_cfg = split_tolerance(cfg, std::max(parts, 1));

    IntegrationResult out;
    HalfLineHints hints;
    hints.scale = scale;
    if (left_open) {
        const double edge = pts.front();
        out += integrate_semi_infinite(ComplexIntegrand([&](double x) { return f(edge - x); }), 0.0, part_cfg,
                                       hints);
    }
    if (pts.size() > 1) out += integrate_piecewise(f, pts, part_cfg);
    if (right_open) {
        const double edge = pts.back();
        out += integrate_semi_infinite(ComplexIntegrand([&](double x) { return f(edge + x); }), 0.0, part_cfg,
                                       hints);
    }
    return out;
}

IntegrationResult integrate_horizontal_line(const AnalyticIntegrand& f, double h, const QuadratureConfig& cfg,
                                            double scale) {
    if (!std::isfinite(h)) throw DomainError("line height must be finite");
    HalfLineHints hints;
    hints.scale = scale;
    const QuadratureConfig half_cfg = split_tolerance(cfg, 2.0);
    IntegrationResult right = integrate_semi_infinite(
        ComplexIntegrand([&](double t) { return f(Complex(t, h)); }), 0.0, half_cfg, hints);
    IntegrationResult left = integrate_semi_infinite(
        ComplexIntegrand([&](double t) { return f(Complex(-t, h)); }), 0.0, half_cfg, hints);
    return right + left;
}

}  // namespace qdelta::quadrature
