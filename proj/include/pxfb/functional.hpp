// The one-phase energy: Dirichlet term sum |grad u|^p/p plus volume penalty
// lambda * chi_{u>0}, its smoothed surrogate for descent, and the exact
// gradient of the surrogate with respect to node values.
#pragma once

#include "pxfb/field.hpp"

namespace pxfb {

struct FunctionalParams {
    double eps = 0.0;    // indicator ramp width; > 0 for the smoothed energy
    double delta = 0.0;  // gradient regularization (|g|^2 + delta^2)^(p/2)
    double tau = 0.0;    // positivity threshold for set extraction
};

struct EnergyBreakdown {
    double dirichlet = 0.0;
    double volume = 0.0;
    double total = 0.0;
};

// Discrete positivity convention: strictly above tau when tau == 0 (the exact
// characteristic function chi_{u>0}), at-or-above tau when tau > 0 (ties at a
// positive threshold count as positive).
inline bool counts_positive(double value, double tau) {
    return tau > 0.0 ? value >= tau : value > 0.0;
}

// C^1 indicator ramp (smoothstep). A piecewise-linear ramp has a kink where a
// cell average crosses eps, and that kink lattice-pins the discrete interface
// during continuation; the smooth ramp removes it. s'(0) = 0, so u == 0 stays
// a critical point.
inline double ramp(double t, double eps) {
    const double s = std::clamp(t / eps, 0.0, 1.0);
    return s * s * (3.0 - 2.0 * s);
}
inline double ramp_deriv(double t, double eps) {
    if (t <= 0.0 || t >= eps) return 0.0;
    const double s = t / eps;
    return 6.0 * s * (1.0 - s) / eps;
}

EnergyBreakdown energy_exact(const ScalarField& u, const ExponentField& p,
                             const CoefficientField& lam, double tau);

double energy_smoothed(const ScalarField& u, const ExponentField& p, const CoefficientField& lam,
                       double eps, double delta);

// d(energy_smoothed)/d(node values); boundary-node components are zeroed.
ScalarField energy_gradient(const ScalarField& u, const ExponentField& p,
                            const CoefficientField& lam, double eps, double delta);

struct MonotonicityGap {
    double lhs = 0.0;
    double rhs = 0.0;
};

// The strict monotonicity of A(q) = |q|^{p-2} q: rhs = (A(eta)-A(xi)).(eta-xi),
// lhs = |eta-xi|^p for p >= 2 and |eta-xi|^2 (|eta|+|xi|)^{p-2} for p < 2.
// Callers assert lhs <= C * rhs; C = 4 covers p in [1.2, 4].
MonotonicityGap monotonicity_gap(double p, const Vec2& eta, const Vec2& xi);

}  // namespace pxfb
