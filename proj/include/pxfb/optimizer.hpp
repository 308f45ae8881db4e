// Projected gradient descent with backtracking on the smoothed energy, plus the
// eps/delta continuation loop that produces the final minimizer.
#pragma once

#include <optional>
#include <vector>

#include "pxfb/functional.hpp"

namespace pxfb {

struct ContinuationSchedule {
    std::vector<double> eps_list;    // strictly decreasing, floored at c_eps * h
    std::vector<double> delta_list;  // decreasing; ends at 0 iff p_min >= 2
    double inner_tol = 1e-6;         // sup-norm of projected gradient / cell volume
    int max_inner_iters = 20000;

    static ContinuationSchedule defaults(const Grid& g, const ExponentField& p,
                                         const CoefficientField& lam, const BoundaryData& phi0);
    void validate(const Grid& g) const;
};

struct StageInfo {
    double eps = 0.0;
    double delta = 0.0;
    int iterations = 0;
    double energy_smoothed = 0.0;
    double grad_norm = 0.0;
};

struct MinimizerResult {
    ScalarField u;
    std::vector<EnergyBreakdown> energy_trace;  // exact energy (tau = 0) per stage
    std::vector<StageInfo> stage_info;
    double grad_norm_final = 0.0;
    int stages = 0;
};

// Box constraint for the descent; boundary nodes are always pinned.
struct DescentControl {
    double tol = 1e-6;
    int max_iters = 20000;
    bool clamp = false;
    double clamp_lo = 0.0;
    double clamp_hi = 0.0;
    bool verbose = false;
    const char* tag = "descent";
    bool error_on_max_iters = false;
};

struct DescentResult {
    int iterations = 0;
    double grad_norm = 0.0;
    double energy = 0.0;
};

// Minimizes energy_smoothed over interior node values in place. Deterministic:
// fixed sweep order, no parallel reductions.
DescentResult run_descent(ScalarField& u, const ExponentField& p, const CoefficientField& lam,
                          double eps, double delta, const DescentControl& ctl);

// Interior nodes clamped to [0, sup phi0]; boundary nodes set to phi0 exactly.
void clamp_projection(ScalarField& u, const BoundaryData& phi0);

MinimizerResult minimize(const BoundaryData& phi0, const ExponentField& p,
                         const CoefficientField& lam, const ContinuationSchedule& schedule,
                         const std::optional<ScalarField>& init = std::nullopt,
                         bool verbose = false);

// Most negative tent pairing -sum |grad u|^{p-2} grad u . grad xi * vol over
// tents xi at interior nodes. Nonnegative (up to tolerance) for minimizers.
// scale_out receives the largest pairing magnitude.
double subharmonicity_residual(const ScalarField& u, const ExponentField& p,
                               double* scale_out = nullptr);

// Sup of |Dirichlet-energy gradient| / vol over interior nodes whose incident
// cells are strictly positive (u > tau at every corner). Empty set -> 0.
double pxharmonic_residual_on_positive_set(const ScalarField& u, const ExponentField& p,
                                           double tau);

}  // namespace pxfb
