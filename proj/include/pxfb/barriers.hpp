// Barrier machinery: the exponential barrier w = M exp(-mu |x|^2) with its
// closed-form normalized p(x)-Laplacian, the non-divergence form coefficients,
// and the divergence-form inequality satisfied by |grad u|.
#pragma once

#include <vector>

#include "pxfb/field.hpp"

namespace pxfb {

struct ExpBarrier {
    double M = 1.0;   // amplitude
    double mu = 1.0;  // exponent rate > 0
    double r1 = 1.0;  // outer annulus radius
    double r2 = 0.5;  // inner annulus radius, 0 < r2 < r1

    ExpBarrier(double M_, double mu_, double r1_, double r2_);

    double value(const Vec2& x) const;
    Vec2 gradient(const Vec2& x) const;                 // closed form, never differenced
    std::array<double, 3> hessian(const Vec2& x) const;  // (w_00, w_01, w_11)
};

// Per-cell central-difference gradient of the exponent field.
std::vector<Vec2> exponent_gradient(const ExponentField& p);

// The proof's normalized quantity e^{mu|x|^2} (2 M mu)^{-1} |grad w|^{2-p}
// Delta_{p(x)} w at barrier coordinate x; p and grad p are read from the field
// at physical point center + x.
double exp_barrier_operator(const ExpBarrier& b, const ExponentField& p, const Vec2& center,
                            const Vec2& x);

struct ExpLemmaResult {
    double min_value = 0.0;  // min of the normalized operator over the sample set
    double bound = 0.0;      // C1 (mu - C2 ||grad p|| |log M|)
    double mu0 = 0.0;
    double eps0 = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double grad_p_norm = 0.0;
    bool pass = false;
};

// Proof-mined constants: eps0 from 2(p_- - 1) r2^2 - r1 (r1^2 + 1) eps0 >=
// (3/2)(p_- - 1) r2^2, C1 = (3/4)(p_- - 1) r2^2, C2 = r1 / C1, and mu0 making
// the remaining additive terms nonnegative. Requires ||grad p|| <= eps0.
ExpLemmaResult verify_exp_lemma(const ExpBarrier& b, const ExponentField& p, const Vec2& center,
                                int samples_radial = 16, int samples_angular = 32);

struct NonDivCell {
    std::int64_t cell = 0;
    std::array<double, 3> a{};  // a_00, a_01, a_11 of |grad u|^{p-2}(I + (p-2) n n^T)
    Vec2 drift{};               // |grad u|^{p-2} log|grad u| grad p
    double eig_min = 0.0;       // eigenvalues of b_ij = a_ij / |grad u|^{p-2}
    double eig_max = 0.0;
};

struct NonDivCoeffs {
    std::vector<NonDivCell> cells;
    double eig_min = 0.0;
    double eig_max = 0.0;
};

// Coefficients on the selected cells; every cell must satisfy c1 <= |grad u| <= c2.
NonDivCoeffs nondiv_coeffs(const ScalarField& u, const ExponentField& p, double c1, double c2,
                           const std::vector<std::int64_t>& cells);

struct SubsolutionResidual {
    double value = 0.0;  // sum [D grad v . grad phi + (B . grad v) phi + H . grad phi] vol
    double scale = 0.0;  // sum |D grad v| |grad phi| vol, for relative tolerances
};

// Weak-form residual of -div(D grad v) + B grad v <= div H for v = |grad u|,
// against a nonnegative node test field phi supported where c1 <= |grad u| <= c2.
SubsolutionResidual gradient_subsolution_check(const ScalarField& u, const ExponentField& p,
                                               double c1, double c2, const ScalarField& phi);

}  // namespace pxfb
