// Variable-exponent Lebesgue space primitives: the modular, the Luxemburg norm,
// the norm-vs-modular bound and a discrete Poincare quotient.
#pragma once

#include "pxfb/field.hpp"

namespace pxfb {

// rho_{p(.)}(u) = sum_cells |u(c)|^p(c) * vol. Node fields are corner-averaged.
double modular(const ScalarField& u, const ExponentField& p);

// inf{ s > 0 : modular(u/s) <= 1 }, by bracketing + bisection to 1e-12 relative.
// Zero field has norm 0.
double luxemburg_norm(const ScalarField& u, const ExponentField& p);

struct EquiBound {
    double lhs = 0.0;  // Luxemburg norm
    double rhs = 0.0;  // max(rho^{1/p_min}, rho^{1/p_max})
    bool pass = false;
};

// ||u|| <= max(rho^{1/p_min}, rho^{1/p_max}); checked with 1e-10 relative slack.
EquiBound equi_bound_check(const ScalarField& u, const ExponentField& p);

// ||u|| / ||grad u|| for a node field vanishing on the boundary. Zero field -> 0.
double poincare_ratio(const ScalarField& u, const ExponentField& p);

}  // namespace pxfb
