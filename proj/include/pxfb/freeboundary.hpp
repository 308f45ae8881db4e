// Extraction of the discrete free boundary (level set {u = tau}) and the
// quantities the free-boundary theory constrains there: gradient trace versus
// lambda*, density ratios, nondegeneracy and linear growth, blow-up rescaling,
// the measure Lambda = Delta_{p(x)} u, and its perimeter scaling.
#pragma once

#include <vector>

#include "pxfb/field.hpp"

namespace pxfb {

struct FreeBoundaryPoint {
    Vec2 x{0.0, 0.0};
    Vec2 nu{0.0, 0.0};  // unit, points out of {u > 0}
    double grad_trace = 0.0;
    double lambda_star = 0.0;
};

struct FreeBoundary {
    bool none = false;
    double tau = 0.0;
    std::vector<FreeBoundaryPoint> points;
    std::vector<std::array<int, 2>> segments;  // 2D marching-squares polyline
};

// Default threshold tau = c_tau * h * max(lambda*), c_tau = 1.
double default_tau(const Grid& g, const ExponentField& p, const CoefficientField& lam);

// 1D: interpolated crossings of u = tau. 2D: marching-squares polyline. Normals
// come from -grad u averaged over adjacent positive cells; the gradient trace
// is sampled 3h inside the positive set along -nu.
FreeBoundary extract(const ScalarField& u, const ExponentField& p, const CoefficientField& lam,
                     double tau);

struct LambdaStarCondition {
    std::vector<double> relative_errors;  // per point, same order as fb.points
    double summary_max = 0.0;             // over points at least 5h from the boundary
    int points_used = 0;
};

LambdaStarCondition lambda_star_condition(const FreeBoundary& fb, const Grid& g);

struct BallSample {
    int point = 0;
    double r = 0.0;
    double value = 0.0;
    bool skipped = false;
};

struct DensityResult {
    std::vector<BallSample> samples;
    double min_ratio = 1.0;
    double max_ratio = 0.0;
    int skipped = 0;
};

// |B_r cap {u > tau}| / |B_r| by cell counting at each (point, r).
DensityResult density_ratios(const ScalarField& u, const FreeBoundary& fb, double tau,
                             const std::vector<double>& radii);

struct NondegeneracyResult {
    std::vector<BallSample> growth;        // sup_{B_r} u / r
    std::vector<BallSample> linear_bound;  // sup_{B_{3r/4}} u / r
    double min_growth = 0.0;
    double max_linear = 0.0;
    int skipped = 0;
};

NondegeneracyResult nondegeneracy(const ScalarField& u, const FreeBoundary& fb,
                                  const std::vector<double>& radii);

// u_rho(x) = u(x0 + rho x) / rho resampled onto [-1,1]^N with n_ref cells per
// axis. Requires B_{rho sqrt(N)}(x0) inside the domain.
ScalarField blowup(const ScalarField& u, const Vec2& x0, double rho, int n_ref = 64);

// Half-plane profile lambda_star * <x - x0, nu>^- on the blow-up reference grid.
ScalarField blowup_halfplane_model(const Grid& reference, double lambda_star_x0, const Vec2& nu);

// -sum_cells |grad u|^{p-2} grad u . grad phi * vol; the measure Lambda applied
// to a node test field.
double measure_pairing(const ScalarField& u, const ExponentField& p, const ScalarField& phi);

struct WeakIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
    double relerr = 0.0;
};

// lhs = -sum over positive cells of |grad u|^{p-2} grad u . grad phi * vol;
// rhs = integral of (lambda*)^{p-1} phi over the extracted boundary. phi must
// vanish within 2h of the domain boundary.
WeakIdentity weak_identity_residual(const ScalarField& u, const ExponentField& p,
                                    const CoefficientField& lam, const FreeBoundary& fb,
                                    const ScalarField& phi);

struct PerimeterSample {
    int point = 0;
    double r = 0.0;
    double lambda_ratio = 0.0;   // Lambda(B_r) / r^{N-1}
    double hausdorff_ratio = 0.0;  // length (2D) or point count (1D) / r^{N-1}
    bool skipped = false;
};

std::vector<PerimeterSample> perimeter_scaling(const ScalarField& u, const ExponentField& p,
                                               const FreeBoundary& fb,
                                               const std::vector<double>& radii);

struct NormalHoelderFit {
    double gamma = 0.0;
    double constant = 0.0;
    double residual = 0.0;
    bool flat = false;  // all normal differences vanish; gamma is a sentinel
    int pairs = 0;
};

// Least-squares fit of log|nu_i - nu_j| against log|x_i - x_j| over nearby
// point pairs. Reported, never asserted against a theorem constant.
NormalHoelderFit normal_hoelder_fit(const FreeBoundary& fb, const Grid& g);

}  // namespace pxfb
