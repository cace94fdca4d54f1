#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdelta/qparam.hpp"
#include "qdelta/quadrature.hpp"
#include "qdelta/testfns.hpp"

namespace qdelta::deltarep {

using quadrature::QuadratureConfig;

/// The ε-regularised integral family for fixed q.
class RegularizedFamily {
  public:
    /// Throws DomainError unless 1 < q < 2 and epsilon > 0.
    RegularizedFamily(QParam q, double epsilon);

    const QParam& q() const noexcept { return q_; }
    double epsilon() const noexcept { return epsilon_; }
    /// 2π / (2 - q), the mass carried by every member.
    double delta_weight() const noexcept;

  private:
    QParam q_;
    double epsilon_;
};

enum class Method { ClosedForm, Quadrature };

struct PairingResult {
    Complex value{};
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = true;
};

/// I_ε(k) = ∫_0^∞ [1 + (1-q)i(k+iε)x]^{1/(1-q)} dx + ∫_{-∞}^0 [1 + (1-q)i(k-iε)x]^{1/(1-q)} dx.
///
/// ClosedForm evaluates the two half-line antiderivatives at their limits,
/// -1/((2-q)i(k+iε)) + 1/((2-q)i(k-iε)); Quadrature integrates both half-lines.
/// The result is real; an imaginary residue above 1e-10·|value| (plus ten
/// error estimates on the Quadrature path) raises qdelta::Error.
PairingResult regularized_integral(const RegularizedFamily& fam, double k, Method method,
                                   const QuadratureConfig& cfg = {});

/// ∫ I_ε(k) dk over the real line.
PairingResult total_mass(const RegularizedFamily& fam, const QuadratureConfig& cfg = {});

/// ⟨I_ε, φ⟩ = ∫ I_ε(k) φ(k) dk, truncated at |k| <= sqrt(ln(1/abs_tol)/a) + 10ε
/// (widened if φ has not yet decayed there).
PairingResult delta_pair(const RegularizedFamily& fam, const testfns::TestFunction& phi,
                         const QuadratureConfig& cfg = {});

/// ∫_{-L}^{L} e_q(ikx) dx from the antiderivative [1+(1-q)ikx]^{(2-q)/(1-q)}/((2-q)ik);
/// 2L at k = 0. Does not converge as L → ∞ for fixed k.
Complex truncated_integral(const QParam& q, double k, double L);

struct SweepRow {
    double epsilon = 0.0;
    Complex value{};
    double abs_error = 0.0;
    std::optional<double> slope_running;
    std::int64_t evaluations = 0;
    bool converged = true;
};

struct SweepTable {
    double q = 0.0;
    std::string testfn;
    Complex limit{};  // (2π/(2-q))·φ(0)
    std::vector<SweepRow> rows;
    /// Least-squares slope of log(abs_error) against log(ε) over converged rows.
    std::optional<double> slope;

    std::size_t converged_rows() const;
};

/// {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4}
std::vector<double> default_eps_schedule();

/// Pairings along a strictly decreasing ε schedule. Rows whose quadrature
/// fails are flagged (converged = false) and the sweep continues.
SweepTable convergence_sweep(const QParam& q, const testfns::TestFunction& phi, const std::vector<double>& eps_schedule,
                             const QuadratureConfig& cfg = {});

}  // namespace qdelta::deltarep
