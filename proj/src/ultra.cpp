#include "qdelta/ultra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qdelta/errors.hpp"

namespace qdelta::ultra {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_off_axis(Complex k) {
    if (!(k.imag() != 0.0) || !std::isfinite(k.real()) || !std::isfinite(k.imag())) {
        throw DomainError("k must be finite with Im k != 0");
    }
}

}  // namespace

void ContourSpec::validate_for(const UltraRep& rep) const {
    if (!(zeta > rep.strip_halfwidth) || !std::isfinite(zeta)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "contour height %.6g must exceed the strip half-width %.6g of %s", zeta,
                      rep.strip_halfwidth, rep.label.c_str());
        throw DomainError(buf);
    }
}

Complex eval_Eq(const QParam& q, Complex k, double x) {
    require_delta_window(q);
    require_off_axis(k);
    if (std::isnan(x)) throw DomainError("x is NaN");

    const bool upper = k.imag() > 0.0;
    double sign = 0.0;
    if (upper && x >= 0.0) sign = 1.0;
    if (!upper && x <= 0.0) sign = -1.0;
    if (sign == 0.0) return {0.0, 0.0};

    const Complex z = kI * k * x;
    const Complex base = 1.0 + q.one_minus() * z;
    // Re(base) = 1 + (q-1)·Im(k)·x >= 1 on the surviving half-line.
    if (!(base.real() >= 1.0)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "E_q base left the right half-plane: Re = %.17g", base.real());
        throw BranchCutError(buf);
    }
    return sign * qcalc::q_exp_complex(q, z);
}

Complex Fq_closed_form(const QParam& q, Complex k) {
    require_delta_window(q);
    if (k == Complex(0.0, 0.0)) throw DomainError("F_q is singular at k = 0");
    if (!(k.imag() != 0.0)) throw DomainError("F_q closed form needs Im k != 0");
    return -1.0 / ((2.0 - q.value()) * kI * k);
}

IntegrationResult integrate_Eq_over_x(const QParam& q, Complex k, const QuadratureConfig& cfg) {
    require_delta_window(q);
    require_off_axis(k);
    const double dir = k.imag() > 0.0 ? 1.0 : -1.0;
    const double qv = q.value();

    quadrature::HalfLineHints hints;
    hints.scale = 1.0 / ((qv - 1.0) * std::abs(k));
    // ∫_X^∞ E_q(i k (dir·y)) dy = -[1 + dir·i(1-q)kX]^{(2-q)/(1-q)} / ((2-q) i k)
    hints.tail = [q, k, dir, qv](double split) {
        const Complex base = 1.0 + dir * q.one_minus() * kI * k * split;
        return -qcalc::principal_pow(base, (2.0 - qv) / q.one_minus()) / ((2.0 - qv) * kI * k);
    };
    return quadrature::integrate_semi_infinite(
        quadrature::ComplexIntegrand([&](double y) { return eval_Eq(q, k, dir * y); }), 0.0, cfg, hints);
}

UltraRep fq_rep(const QParam& q) {
    require_delta_window(q);
    char buf[48];
    std::snprintf(buf, sizeof buf, "F_q(q=%g)", q.value());
    return {[q](Complex k) { return Fq_closed_form(q, k); }, 0.0, 0, buf};
}

UltraRep dirac_rep() {
    return {[](Complex k) { return -1.0 / (2.0 * std::numbers::pi * kI * k); }, 0.0, 0, "dirac"};
}

UltraRep plus_polynomial(const UltraRep& rep, std::vector<Complex> coeffs) {
    UltraRep out = rep;
    out.eval = [inner = rep.eval, coeffs](Complex k) { return inner(k) + testfns::polyval(coeffs, k); };
    out.power_bound_degree = std::max(rep.power_bound_degree, static_cast<int>(coeffs.size()) - 1);
    out.label = rep.label + "+poly";
    return out;
}

IntegrationResult contour_pair(const UltraRep& rep, const testfns::TestFunction& phi, const ContourSpec& spec,
                               const QuadratureConfig& cfg) {
    spec.validate_for(rep);
    const double scale = 1.0 / std::sqrt(phi.decay_rate);
    auto integrand = [&](Complex k) { return rep(k) * phi(k); };
    QuadratureConfig half = cfg;
    half.abs_tol = cfg.abs_tol / 2.0;
    const IntegrationResult top = quadrature::integrate_horizontal_line(integrand, spec.zeta, half, scale);
    const IntegrationResult bottom = quadrature::integrate_horizontal_line(integrand, -spec.zeta, half, scale);
    return top - bottom;
}

Complex cauchy_transform(const qcalc::Density& f, Complex z, const QuadratureConfig& cfg) {
    require_off_axis(z);
    std::vector<double> breaks;
    if (std::abs(z.imag()) < 0.1 && z.real() > f.lo && z.real() < f.hi) {
        const double w = std::abs(z.imag());
        for (double m : {-10.0, -1.0, 0.0, 1.0, 10.0}) breaks.push_back(z.real() + m * w);
    }
    const double center = (f.center > f.lo && f.center < f.hi) ? f.center : 0.5 * (f.lo + f.hi);
    const IntegrationResult r = quadrature::integrate_interval(
        quadrature::ComplexIntegrand([&](double t) { return f(t) / (t - z); }), f.lo, f.hi, cfg, center, breaks,
        f.scale);
    return r.value / (2.0 * std::numbers::pi * kI);
}

UltraRep cauchy_rep(qcalc::Density f, QuadratureConfig cfg) {
    std::string label = "cauchy[" + f.label + "]";
    return {[f = std::move(f), cfg](Complex z) { return cauchy_transform(f, z, cfg); }, 0.0, 0, std::move(label)};
}

double pseudo_poly_invariance_check(const UltraRep& rep, const std::vector<Complex>& poly_coeffs,
                                    const testfns::TestFunction& phi, const ContourSpec& spec,
                                    const QuadratureConfig& cfg) {
    const IntegrationResult base = contour_pair(rep, phi, spec, cfg);
    const IntegrationResult shifted = contour_pair(plus_polynomial(rep, poly_coeffs), phi, spec, cfg);
    return std::abs(shifted.value - base.value);
}

PowerBound power_bound(const UltraRep& rep, const ContourSpec& spec, double reach, int samples) {
    spec.validate_for(rep);
    if (samples < 2 || !(reach > 0.0)) throw DomainError("power_bound needs samples >= 2 and reach > 0");
    PowerBound out;
    out.degree = rep.power_bound_degree;
    for (double h : {spec.zeta, -spec.zeta}) {
        for (int j = 0; j < samples; ++j) {
            const Complex k(-reach + 2.0 * reach * j / (samples - 1), h);
            const double ratio = std::abs(rep(k)) / std::pow(std::abs(k), out.degree);
            out.constant = std::max(out.constant, ratio);
            ++out.samples;
        }
    }
    return out;
}

}  // namespace qdelta::ultra
