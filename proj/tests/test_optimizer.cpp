#include "doctest.h"

#include <cmath>

#include "pxfb/optimizer.hpp"
#include "pxfb/pxharmonic.hpp"

using namespace pxfb;

namespace {

struct Oracle1D {
    Grid g;
    ExponentField p;
    CoefficientField lam;
    BoundaryData phi0;
    ContinuationSchedule sched;
};

// Boundary data a at x = 0, 0 at x = 1; the minimizer is the plateau profile
// a (1 - x/s)^+ with s = a ((p-1)/(p lambda))^{1/p}.
Oracle1D make_oracle(int n, double a = 0.5, double lam_val = 0.5) {
    const Grid g = Grid::make(1, {0, 0}, {1, 0}, {n, 1});
    ExponentField p(ScalarField(g, Location::Cell, 2.0));
    CoefficientField lam(ScalarField(g, Location::Cell, lam_val));
    ScalarField b(g, Location::Node, 0.0);
    b.at_node(0, 0) = a;
    BoundaryData phi0(b);
    ContinuationSchedule sched = ContinuationSchedule::defaults(g, p, lam, phi0);
    return {g, std::move(p), std::move(lam), std::move(phi0), sched};
}

double plateau_point(double a, double p, double lam) {
    return a * std::pow((p - 1.0) / (p * lam), 1.0 / p);
}

// Independent oracle: scan the one-parameter plateau family for the best s.
double plateau_point_brute(double a, double p, double lam) {
    double best_s = 1.0, best = 1e300;
    for (int i = 1; i <= 200000; ++i) {
        const double s = i * 1e-5 * 2.0;
        const double J = std::pow(a, p) * std::pow(s, 1.0 - p) / p + lam * s;
        if (J < best) {
            best = J;
            best_s = s;
        }
    }
    return best_s;
}

}  // namespace

TEST_CASE("plateau point: closed form agrees with the brute-force scan") {
    for (double lam : {0.25, 0.5, 1.0})
        CHECK(plateau_point(0.5, 2.0, lam) ==
              doctest::Approx(plateau_point_brute(0.5, 2.0, lam)).epsilon(1e-4));
}

TEST_CASE("clamp projection") {
    Oracle1D o = make_oracle(8);
    ScalarField u(o.g, Location::Node, 0.2);
    ScalarField orig = u;
    clamp_projection(u, o.phi0);
    for (int k = 1; k < o.g.n[0]; ++k) CHECK(u.at_node(k, 0) == orig.at_node(k, 0));
    CHECK(u.at_node(0, 0) == 0.5);
    CHECK(u.at_node(o.g.n[0], 0) == 0.0);

    ScalarField v(o.g, Location::Node, -1.0);
    clamp_projection(v, o.phi0);
    for (int k = 1; k < o.g.n[0]; ++k) CHECK(v.at_node(k, 0) == 0.0);

    ScalarField w(o.g, Location::Node, 9.0);
    clamp_projection(w, o.phi0);
    for (int k = 1; k < o.g.n[0]; ++k) CHECK(w.at_node(k, 0) == 0.5);
}

TEST_CASE("lambda = 0 reduces the minimizer to the Dirichlet solve") {
    const Grid g = Grid::make(1, {0, 0}, {1, 0}, {32, 1});
    ExponentField p(ScalarField(g, Location::Cell, 2.0));
    CoefficientField lam0(ScalarField(g, Location::Cell, 0.0));
    ScalarField b(g, Location::Node, 0.0);
    b.at_node(0, 0) = 1.0;
    b.at_node(g.n[0], 0) = 0.25;
    BoundaryData phi0(b);
    ContinuationSchedule sched = ContinuationSchedule::defaults(g, p, lam0, phi0);
    sched.inner_tol = 1e-8;

    const MinimizerResult res = minimize(phi0, p, lam0, sched);
    const HarmonicSolve hs = solve_dirichlet(phi0.phi0, p, 1e-8);
    for (std::int64_t k = 0; k < g.node_count(); ++k)
        CHECK(std::abs(res.u[k] - hs.v[k]) <= 1e-6);
}

TEST_CASE("zero boundary data gives the zero minimizer") {
    const Grid g = Grid::make(1, {0, 0}, {1, 0}, {16, 1});
    ExponentField p(ScalarField(g, Location::Cell, 2.0));
    CoefficientField lam(ScalarField(g, Location::Cell, 0.5));
    BoundaryData phi0(ScalarField(g, Location::Node, 0.0));
    ContinuationSchedule sched = ContinuationSchedule::defaults(g, p, lam, phi0);
    const MinimizerResult res = minimize(phi0, p, lam, sched);
    CHECK(energy_exact(res.u, p, lam, 0.0).total == 0.0);
    for (double v : res.u.values) CHECK(v == 0.0);
}

TEST_CASE("1D oracle: plateau minimizer with the free boundary at s") {
    Oracle1D o = make_oracle(64);
    const MinimizerResult res = minimize(o.phi0, o.p, o.lam, o.sched);
    const double h = o.g.h[0];

    // Max principle (projection makes this exact).
    for (double v : res.u.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 0.5);
    }
    // Final residual met the schedule tolerance.
    CHECK(res.grad_norm_final <= o.sched.inner_tol);

    // Energy close to the continuum optimum J(s*) = 0.5.
    const EnergyBreakdown e = energy_exact(res.u, o.p, o.lam, 0.0);
    CHECK(e.total == doctest::Approx(0.5).epsilon(0.05));

    // The profile tracks 0.5 (1 - x/0.5)^+ .
    double worst = 0.0;
    for (int k = 0; k <= o.g.n[0]; ++k) {
        const double x = o.g.node_coord(k, 0)[0];
        worst = std::max(worst,
                         std::abs(res.u.at_node(k, 0) - 0.5 * std::max(1.0 - x / 0.5, 0.0)));
    }
    CHECK(worst <= 10.0 * h);

    // Energy trace is per stage and non-increasing within tolerance.
    CHECK(res.energy_trace.size() == size_t(res.stages));
}

TEST_CASE("subharmonicity residual of the oracle minimizer") {
    Oracle1D o = make_oracle(64);
    const MinimizerResult res = minimize(o.phi0, o.p, o.lam, o.sched);
    double scale = 0.0;
    const double worst = subharmonicity_residual(res.u, o.p, &scale);
    CHECK(worst >= -1e-6 * scale);
    // The tent at the kink pairs to about (lambda*)^{p-1} = 1.
    CHECK(scale == doctest::Approx(1.0).epsilon(0.3));

    // p(x)-harmonic fields pair to ~0 against every tent.
    const HarmonicSolve hs = solve_dirichlet(o.phi0.phi0, o.p, 1e-10);
    double hscale = 0.0;
    const double hworst = subharmonicity_residual(hs.v, o.p, &hscale);
    CHECK(std::abs(hworst) <= 1e-8);
    CHECK(hscale <= 1e-8);
}

TEST_CASE("a concave interior kink is flagged as non-subharmonic") {
    const Grid g = Grid::make(1, {0, 0}, {1, 0}, {32, 1});
    const ExponentField p(ScalarField(g, Location::Cell, 2.0));
    const ScalarField tent =
        sample_field(g, Location::Node, [](Vec2 x) { return std::min(x[0], 1.0 - x[0]); });
    double scale = 0.0;
    const double worst = subharmonicity_residual(tent, p, &scale);
    CHECK(worst < -0.5);  // the apex pairing is about -2
}

TEST_CASE("pxharmonic residual on the positive set") {
    Oracle1D o = make_oracle(64);
    const MinimizerResult res = minimize(o.phi0, o.p, o.lam, o.sched);
    const ScalarField ls = lambda_star(o.p, o.lam);
    const double tau = o.g.h[0] * ls.max();
    CHECK(pxharmonic_residual_on_positive_set(res.u, o.p, tau) <= 10.0 * o.sched.inner_tol);
}

TEST_CASE("determinism: identical schedule and data give identical results") {
    Oracle1D o = make_oracle(48);
    const MinimizerResult r1 = minimize(o.phi0, o.p, o.lam, o.sched);
    const MinimizerResult r2 = minimize(o.phi0, o.p, o.lam, o.sched);
    CHECK(r1.u.values == r2.u.values);
    CHECK(r1.grad_norm_final == r2.grad_norm_final);
}

TEST_CASE("no free boundary when the data exceeds lambda*") {
    // a = 2 >= lambda* = 1: the plateau family has no interior optimum and the
    // minimizer is the full-support harmonic solution.
    Oracle1D o = make_oracle(64, 2.0, 0.5);
    const MinimizerResult res = minimize(o.phi0, o.p, o.lam, o.sched);
    for (int k = 0; k < o.g.n[0]; ++k)
        CHECK(res.u.at_node(k, 0) > 0.0);
    const EnergyBreakdown e = energy_exact(res.u, o.p, o.lam, 0.0);
    CHECK(e.total == doctest::Approx(2.0 * 2.0 / 2.0 + 0.5).epsilon(0.02));
}

TEST_CASE("schedule validation") {
    Oracle1D o = make_oracle(8);
    ContinuationSchedule bad = o.sched;
    bad.eps_list = {0.1, 0.2};
    CHECK_THROWS_AS(bad.validate(o.g), std::invalid_argument);
    bad = o.sched;
    bad.eps_list.clear();
    CHECK_THROWS_AS(bad.validate(o.g), std::invalid_argument);
    bad = o.sched;
    bad.delta_list = {0.0, 0.1};
    CHECK_THROWS_AS(bad.validate(o.g), std::invalid_argument);
    bad = o.sched;
    bad.inner_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(o.g), std::invalid_argument);
}
