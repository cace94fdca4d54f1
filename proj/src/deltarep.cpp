#include "qdelta/deltarep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "qdelta/errors.hpp"
#include "qdelta/parallel.hpp"
#include "qdelta/qcalc.hpp"
#include "qdelta/ultra.hpp"

namespace qdelta::deltarep {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_real_residue(Complex value, double allowance) {
    if (std::abs(value.imag()) > 1e-10 * std::abs(value) + allowance) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "regularised integral has imaginary residue %.3g (value %.17g)", value.imag(),
                      value.real());
        throw Error(buf);
    }
}

double closed_form_value(const RegularizedFamily& fam, double k) {
    const double two_minus_q = 2.0 - fam.q().value();
    const Complex upper(k, fam.epsilon());
    const Complex lower(k, -fam.epsilon());
    const Complex value = -1.0 / (two_minus_q * kI * upper) + 1.0 / (two_minus_q * kI * lower);
    require_real_residue(value, 0.0);
    return value.real();
}

}  // namespace

RegularizedFamily::RegularizedFamily(QParam q, double epsilon) : q_(q), epsilon_(epsilon) {
    require_delta_window(q_);
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be positive and finite");
}

double RegularizedFamily::delta_weight() const noexcept { return 2.0 * std::numbers::pi / (2.0 - q_.value()); }

PairingResult regularized_integral(const RegularizedFamily& fam, double k, Method method,
                                   const QuadratureConfig& cfg) {
    if (!std::isfinite(k)) throw DomainError("k must be finite");
    if (method == Method::ClosedForm) return {closed_form_value(fam, k), 0.0, 0, true};

    // ∫_{-∞}^0 e_q(i(k-iε)x) dx = ∫_0^∞ e_q(i(-k+iε)y) dy, so both halves are
    // upper half-plane E_q integrals.
    QuadratureConfig half = cfg;
    half.abs_tol = cfg.abs_tol / 2.0;
    const auto upper = ultra::integrate_Eq_over_x(fam.q(), Complex(k, fam.epsilon()), half);
    const auto lower = ultra::integrate_Eq_over_x(fam.q(), Complex(-k, fam.epsilon()), half);
    const auto sum = upper + lower;
    require_real_residue(sum.value, 10.0 * sum.error_estimate);
    return {sum.value.real(), sum.error_estimate, sum.evaluations, sum.converged};
}

PairingResult total_mass(const RegularizedFamily& fam, const QuadratureConfig& cfg) {
    const double eps = fam.epsilon();
    const std::vector<double> breaks = {-eps, eps};
    const auto r = quadrature::integrate_interval(
        quadrature::ComplexIntegrand([&](double k) { return Complex(closed_form_value(fam, k), 0.0); }),
        -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), cfg, 0.0, breaks, eps);
    return {r.value, r.error_estimate, r.evaluations, r.converged};
}

PairingResult delta_pair(const RegularizedFamily& fam, const testfns::TestFunction& phi, const QuadratureConfig& cfg) {
    cfg.validate();
    const double eps = fam.epsilon();
    const double a = phi.decay_rate;
    double reach = std::sqrt(std::log(1.0 / cfg.abs_tol) / a) + 10.0 * eps;
    // The polynomial factor can hold φ up past the Gaussian estimate.
    for (int i = 0; i < 60; ++i) {
        const double edge = std::max(std::abs(phi(Complex(reach, 0.0))), std::abs(phi(Complex(-reach, 0.0))));
        if (edge * reach <= 1e-3 * cfg.abs_tol) break;
        reach *= 1.25;
    }

    std::vector<double> pts = {0.0};
    for (double r = eps; r < reach; r *= 10.0) {
        pts.push_back(r);
        pts.push_back(-r);
    }
    pts.push_back(reach);
    pts.push_back(-reach);
    std::sort(pts.begin(), pts.end());

    const auto r = quadrature::integrate_piecewise(
        [&](double k) { return closed_form_value(fam, k) * phi(Complex(k, 0.0)); }, pts, cfg);
    return {r.value, r.error_estimate, r.evaluations, r.converged};
}

Complex truncated_integral(const QParam& q, double k, double L) {
    require_delta_window(q);
    if (!std::isfinite(k)) throw DomainError("k must be finite");
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("L must be positive and finite");
    if (k == 0.0) return {2.0 * L, 0.0};
    const double qv = q.value();
    if (std::abs(k) * L < 1e-4) {
        // e_q(y) = 1 + y + (q/2)y² + O(y³); the odd terms cancel on [-L, L].
        return {2.0 * L - qv * k * k * L * L * L / 3.0, 0.0};
    }
    const double power = (2.0 - qv) / q.one_minus();
    auto antiderivative = [&](double x) {
        const Complex base = 1.0 + q.one_minus() * kI * k * x;
        return qcalc::principal_pow(base, power) / ((2.0 - qv) * kI * k);
    };
    return antiderivative(L) - antiderivative(-L);
}

std::size_t SweepTable::converged_rows() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; }));
}

std::vector<double> default_eps_schedule() { return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4}; }

SweepTable convergence_sweep(const QParam& q, const testfns::TestFunction& phi, const std::vector<double>& eps_schedule,
                             const QuadratureConfig& cfg) {
    require_delta_window(q);
    if (eps_schedule.empty()) throw DomainError("epsilon schedule is empty");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i] > 0.0) || (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))) {
            throw DomainError("epsilon schedule must be positive and strictly decreasing");
        }
    }

    SweepTable table;
    table.q = q.value();
    table.testfn = phi.label;
    table.limit = (2.0 * std::numbers::pi / (2.0 - q.value())) * phi.value_at_zero;
    table.rows.resize(eps_schedule.size());

    QuadratureConfig row_cfg = cfg;
    row_cfg.on_failure = quadrature::OnFailure::Report;
    parallel_for(eps_schedule.size(), [&](std::size_t i) {
        SweepRow& row = table.rows[i];
        row.epsilon = eps_schedule[i];
        try {
            const PairingResult p = delta_pair(RegularizedFamily(q, row.epsilon), phi, row_cfg);
            row.value = p.value;
            row.evaluations = p.evaluations;
            row.converged = p.converged;
        } catch (const QuadratureFailure&) {
            row.value = {std::nan(""), std::nan("")};
            row.converged = false;
        } catch (const NonFiniteIntegrand&) {
            row.value = {std::nan(""), std::nan("")};
            row.converged = false;
        }
        row.abs_error = std::abs(row.value - table.limit);
    });

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        SweepRow& row = table.rows[i];
        if (i > 0) {
            const SweepRow& prev = table.rows[i - 1];
            if (row.converged && prev.converged && row.abs_error > 0.0 && prev.abs_error > 0.0) {
                row.slope_running =
                    std::log(row.abs_error / prev.abs_error) / std::log(row.epsilon / prev.epsilon);
            }
        }
        if (row.converged && row.abs_error > 0.0) {
            xs.push_back(std::log(row.epsilon));
            ys.push_back(std::log(row.abs_error));
        }
    }
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= n;
        my /= n;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        if (sxx > 0.0) table.slope = sxy / sxx;
    }
    return table;
}

}  // namespace qdelta::deltarep
