#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qdelta/qcalc.hpp"
#include "qdelta/qparam.hpp"
#include "qdelta/quadrature.hpp"
#include "qdelta/testfns.hpp"

namespace qdelta::ultra {

using quadrature::IntegrationResult;
using quadrature::QuadratureConfig;

/// Analytic representative of a 1-D tempered ultradistribution, defined off
/// the strip |Im k| <= strip_halfwidth and bounded there by C·|k|^power_bound_degree.
struct UltraRep {
    std::function<Complex(Complex)> eval;
    double strip_halfwidth = 0.0;
    int power_bound_degree = 0;
    std::string label;

    Complex operator()(Complex k) const { return eval(k); }
};

/// Pair of horizontal lines at Im k = ±zeta: the upper one traversed
/// left to right, the lower one right to left.
struct ContourSpec {
    double zeta = 1.0;

    /// Throws DomainError unless zeta > rep.strip_halfwidth.
    void validate_for(const UltraRep& rep) const;
};

/// {H(x)H(Im k) - H(-x)H(-Im k)}·[1 + i(1-q)kx]^{1/(1-q)} with H(0) = 1.
/// Asserts Re(base) >= 1 on the surviving half-line and throws BranchCutError
/// otherwise.
Complex eval_Eq(const QParam& q, Complex k, double x);

/// ∫ E_q(ikx) dx over the surviving half-line, numerically, with the
/// antiderivative supplying the tail beyond the split point.
IntegrationResult integrate_Eq_over_x(const QParam& q, Complex k, const QuadratureConfig& cfg);

/// -1 / ((2-q)·i·k).
Complex Fq_closed_form(const QParam& q, Complex k);

/// F_q as an UltraRep (strip half-width 0, degree 0).
UltraRep fq_rep(const QParam& q);
/// -1/(2πik): the representative of δ.
UltraRep dirac_rep();
/// F + P for the polynomial with ascending coefficients.
UltraRep plus_polynomial(const UltraRep& rep, std::vector<Complex> coeffs);

/// ∮_Γ F(k)φ(k) dk = ∫_{Im k = ζ} Fφ - ∫_{Im k = -ζ} Fφ.
IntegrationResult contour_pair(const UltraRep& rep, const testfns::TestFunction& phi, const ContourSpec& spec,
                               const QuadratureConfig& cfg);

/// (1/(2πi)) ∫ f(t)/(t - z) dt over the support of f. Near the real axis
/// (|Im z| < 0.1) the integration is split at Re z.
Complex cauchy_transform(const qcalc::Density& f, Complex z, const QuadratureConfig& cfg);
/// The Cauchy transform as an UltraRep, evaluating the integral per point.
UltraRep cauchy_rep(qcalc::Density f, QuadratureConfig cfg);

/// |∮(F + P)φ - ∮Fφ|.
double pseudo_poly_invariance_check(const UltraRep& rep, const std::vector<Complex>& poly_coeffs,
                                    const testfns::TestFunction& phi, const ContourSpec& spec,
                                    const QuadratureConfig& cfg);

struct PowerBound {
    double constant = 0.0;  // max |F(k)| / |k|^degree over the samples
    int degree = 0;
    int samples = 0;
};

/// Samples both contour lines over |Re k| <= reach and records the smallest C
/// with |F(k)| <= C|k|^degree on the samples.
PowerBound power_bound(const UltraRep& rep, const ContourSpec& spec, double reach = 100.0, int samples = 2001);

}  // namespace qdelta::ultra
