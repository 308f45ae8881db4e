#include "pxfb/pxharmonic.hpp"

#include <cmath>
#include <limits>

#include "pxfb/optimizer.hpp"

namespace pxfb {

namespace {

void require_ball(const Grid& g, const Vec2& center, double r, const char* who) {
    const Vec2 a{center[0] - r, center[1] - (g.dim == 2 ? r : 0.0)};
    const Vec2 b{center[0] + r, center[1] + (g.dim == 2 ? r : 0.0)};
    if (!g.contains(a) || !g.contains(b))
        throw std::invalid_argument(std::string(who) + ": ball of radius " + std::to_string(r) +
                                    " not contained in the grid");
}

}  // namespace

HarmonicSolve solve_dirichlet(const ScalarField& boundary_values, const ExponentField& p,
                              double tol, int max_iters) {
    if (boundary_values.location != Location::Node)
        throw std::invalid_argument("solve_dirichlet: boundary values must be node-centered");
    if (!(boundary_values.grid == p.p.grid))
        throw std::invalid_argument("solve_dirichlet: mismatched grids");
    boundary_values.check_finite("solve_dirichlet boundary data");
    const Grid& g = boundary_values.grid;

    // Warm start: boundary mean on the interior.
    double bsum = 0.0;
    std::int64_t bcount = 0;
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy)
            if (g.is_boundary_node(ix, iy)) {
                bsum += boundary_values.at_node(ix, iy);
                ++bcount;
            }
    const double bmean = bsum / double(bcount);

    HarmonicSolve out;
    out.v = boundary_values;
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy)
            if (!g.is_boundary_node(ix, iy)) out.v.at_node(ix, iy) = bmean;

    const CoefficientField lam0(ScalarField(g, Location::Cell, 0.0));
    std::vector<double> deltas{1e-1, 1e-2, 1e-3};
    deltas.push_back(p.p_min >= 2.0 ? 0.0 : 1e-3);

    for (size_t s = 0; s < deltas.size(); ++s) {
        DescentControl ctl;
        ctl.tol = tol;
        ctl.max_iters = max_iters;
        ctl.clamp = false;
        ctl.tag = "solve_dirichlet";
        ctl.error_on_max_iters = (s + 1 == deltas.size());
        const DescentResult dr = run_descent(out.v, p, lam0, 1.0, deltas[s], ctl);
        out.iterations += dr.iterations;
        out.residual = dr.grad_norm;
    }
    return out;
}

bool comparison_check(const ScalarField& g1, const ScalarField& g2, const ExponentField& p,
                      double tol) {
    const Grid& g = g1.grid;
    if (!(g == g2.grid)) throw std::invalid_argument("comparison_check: mismatched grids");
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy)
            if (g.is_boundary_node(ix, iy) && g1.at_node(ix, iy) > g2.at_node(ix, iy))
                throw std::invalid_argument("comparison_check: requires g1 <= g2 on the boundary");
    const HarmonicSolve s1 = solve_dirichlet(g1, p);
    const HarmonicSolve s2 = solve_dirichlet(g2, p);
    for (std::int64_t k = 0; k < g.node_count(); ++k)
        if (s1.v[k] > s2.v[k] + tol) return false;
    return true;
}

double cacciopoli_ratio(const ScalarField& v, const ExponentField& p, double r,
                        const Vec2& center) {
    if (v.location != Location::Node)
        throw std::invalid_argument("cacciopoli_ratio: v must be node-centered");
    const Grid& g = v.grid;
    require_ball(g, center, r, "cacciopoli_ratio");
    const double vol = g.cell_volume();
    const std::vector<Vec2> grad = cell_gradient(v);
    const ScalarField vc = cell_average(v);
    double num = 0.0, den = 0.0;
    for (int ix = 0; ix < g.cells(0); ++ix)
        for (int iy = 0; iy < g.cells(1); ++iy) {
            const Vec2 c = g.cell_center(ix, iy);
            const Vec2 d{c[0] - center[0], c[1] - center[1]};
            const double dist = norm(d);
            const std::int64_t ci = g.cell_index(ix, iy);
            const double pv = p.p[ci];
            if (dist <= 0.5 * r) num += std::pow(norm(grad[size_t(ci)]), pv) * vol;
            if (dist <= r) den += std::pow(std::abs(vc[ci]) / r, pv) * vol;
        }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

double harnack_ratio(const ScalarField& v, double r, const Vec2& center) {
    const Grid& g = v.grid;
    require_ball(g, center, 10.0 * r, "harnack_ratio");
    double sup = -std::numeric_limits<double>::infinity();
    double inf = std::numeric_limits<double>::infinity();
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy) {
            const Vec2 x = g.node_coord(ix, iy);
            const Vec2 d{x[0] - center[0], x[1] - center[1]};
            if (norm(d) > r) continue;
            const double val = v.at_node(ix, iy);
            sup = std::max(sup, val);
            inf = std::min(inf, val);
        }
    return sup / (inf + r);
}

GradientEstimate gradient_estimate_check(const ScalarField& v, const ExponentField& p, double r,
                                         const Vec2& center) {
    const Grid& g = v.grid;
    require_ball(g, center, r, "gradient_estimate_check");
    if (r > 1.0)
        throw std::invalid_argument("gradient_estimate_check: requires r <= 1");
    const std::vector<Vec2> grad = cell_gradient(v);
    GradientEstimate out;
    out.lhs = norm(interp_cell_vec(g, grad, center));

    double sup = 0.0;  // nonnegative setting of the estimate
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy) {
            const Vec2 x = g.node_coord(ix, iy);
            const Vec2 d{x[0] - center[0], x[1] - center[1]};
            if (norm(d) <= r) sup = std::max(sup, v.at_node(ix, iy));
        }
    double pp = -std::numeric_limits<double>::infinity();
    double pm = std::numeric_limits<double>::infinity();
    for (int ix = 0; ix < g.cells(0); ++ix)
        for (int iy = 0; iy < g.cells(1); ++iy) {
            const Vec2 c = g.cell_center(ix, iy);
            const Vec2 d{c[0] - center[0], c[1] - center[1]};
            if (norm(d) > r) continue;
            pp = std::max(pp, p.p.at_cell(ix, iy));
            pm = std::min(pm, p.p.at_cell(ix, iy));
        }
    if (!std::isfinite(pp)) {
        pp = p.p_max;
        pm = p.p_min;
    }
    out.rhs = std::pow(1.0 + sup / r, pp / pm);
    out.pass = out.lhs <= kGradientEstimatePin * out.rhs;
    return out;
}

}  // namespace pxfb
