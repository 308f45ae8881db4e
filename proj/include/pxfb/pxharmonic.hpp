// Dirichlet solver for the p(x)-Laplacian (convex minimization of the Dirichlet
// term with fixed boundary data) and ball-based regularity diagnostics:
// comparison, Cacciopoli, Harnack, gradient estimate.
#pragma once

#include "pxfb/field.hpp"

namespace pxfb {

struct HarmonicSolve {
    ScalarField v;
    double residual = 0.0;  // sup |interior energy gradient| / vol at final delta
    int iterations = 0;
};

// Minimizes sum |grad v|^p/p over node fields matching g on the boundary.
// Interior values of g are ignored (used only as warm start when finite).
HarmonicSolve solve_dirichlet(const ScalarField& boundary_values, const ExponentField& p,
                              double tol = 1e-8, int max_iters = 50000);

// Solves for g1 and g2 (g1 <= g2 nodewise on the boundary) and checks v1 <= v2.
bool comparison_check(const ScalarField& g1, const ScalarField& g2, const ExponentField& p,
                      double tol = 1e-6);

// [sum_{B_{r/2}} |grad v|^p vol] / [sum_{B_r} (v/r)^p vol]; balls are the cells
// whose centers lie within Euclidean distance r of the center.
double cacciopoli_ratio(const ScalarField& v, const ExponentField& p, double r, const Vec2& center);

// sup_{B_r} v / (inf_{B_r} v + r); requires B_{10r}(center) inside the domain.
double harnack_ratio(const ScalarField& v, double r, const Vec2& center);

struct GradientEstimate {
    double lhs = 0.0;  // |grad v| at the center, averaged over adjacent cells
    double rhs = 0.0;  // (1 + sup_{B_r} v / r)^(p_+/p_-)
    bool pass = false;
};

// Pinned empirical constant for the gradient estimate check.
inline constexpr double kGradientEstimatePin = 4.0;

GradientEstimate gradient_estimate_check(const ScalarField& v, const ExponentField& p, double r,
                                         const Vec2& center);

}  // namespace pxfb
