// Runs every property check over a solved instance and assembles a
// VerificationReport. Check names, reference tags and pass thresholds live in
// a fixed registry so reports are stable and machine-comparable.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pxfb/freeboundary.hpp"
#include "pxfb/optimizer.hpp"

namespace pxfb {

// Frozen check thresholds. Empirical pins were fixed by a calibration run on
// the reference instances and are not tuned per run.
inline constexpr double kDensityLo = 0.15;
inline constexpr double kDensityHi = 0.85;
inline constexpr double kNondegeneracyFactor = 0.3;  // times min lambda*
inline constexpr double kLinearGrowthPin = 3.0;      // times max lambda*
inline constexpr double kLambdaStarTol1D = 0.05;
inline constexpr double kLambdaStarTol2D = 0.15;
inline constexpr double kWeakIdentityTol1D = 0.10;
inline constexpr double kWeakIdentityTol2D = 0.20;
inline constexpr double kBlowupTol = 0.15;          // relative to lambda*(x0)
inline constexpr double kSubharmonicityTol = 1e-6;  // times tent-pairing scale
inline constexpr double kPerimeterLo = 0.2;         // times (lambda*)^{p-1}
inline constexpr double kPerimeterHi = 5.0;
inline constexpr double kHausdorffLo = 1.0;  // 2D chord/r band
inline constexpr double kHausdorffHi = 4.0;
inline constexpr double kSubsolutionTol = 0.05;  // times weak-form scale
inline constexpr double kBarrierM = 10.0;
inline constexpr const char* kArtifactVersion = "0.1.0";

struct Instance {
    Grid grid;
    ExponentField p;
    CoefficientField lam;
    BoundaryData phi0;
    ContinuationSchedule schedule;
    std::uint64_t seed = 1;
    double tau_factor = 1.0;  // tau = tau_factor * h * max(lambda*)
    double gamma0 = 0.9;      // Hoelder tracking exponent
    std::string p_desc = "custom";
    std::string lam_desc = "custom";
    std::string phi0_desc = "custom";
    bool verbose = false;
};

struct CheckResult {
    std::string name;
    std::string paper_ref;
    std::map<std::string, double> values;
    double tolerance = 0.0;
    std::string status;  // "pass" | "fail" | "skip"
    std::string notes;
};

struct VerificationReport {
    std::map<std::string, std::string> meta;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (c.status == "fail") return false;
        return true;
    }
    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// name -> reference tag of the statement each check exercises; total over all
// checks a report can contain.
const std::vector<std::pair<std::string, std::string>>& check_registry();

struct RunArtifacts {
    MinimizerResult result;
    double tau = 0.0;
    FreeBoundary fb;
};

// Solve (or adopt a loaded field) and extract the free boundary.
RunArtifacts run_instance(const Instance& inst,
                          const std::optional<ScalarField>& loaded_u = std::nullopt);

VerificationReport run_suite(const Instance& inst,
                             const std::optional<ScalarField>& loaded_u = std::nullopt);

struct RefinementRow {
    int n = 0;
    double h = 0.0;
    double lambda_star_err = 0.0;
    double fb_location = 0.0;
    double fb_location_err = 0.0;
    double lipschitz_quotient = 0.0;
};

struct RefinementStudy {
    std::vector<RefinementRow> rows;
    double order_lambda_star = 0.0;
    double order_fb_location = 0.0;
    bool monotone_lambda_star = true;  // within 20% slack
    bool monotone_fb_location = true;
};

// Re-solves the instance on each grid level. FB errors are measured against
// oracle_location when given, otherwise against the finest level.
RefinementStudy refinement_study(const Instance& base, const std::vector<int>& n_list,
                                 std::optional<double> oracle_location = std::nullopt);

// Discrete seminorm sup |u(x)-u(y)| / |x-y|^gamma over node pairs within
// max_dist; gamma = 1 restricted to interior pairs at distance >= 2h gives the
// Lipschitz quotient.
double hoelder_seminorm(const ScalarField& u, double gamma, double max_dist);
double lipschitz_quotient(const ScalarField& u);

}  // namespace pxfb
