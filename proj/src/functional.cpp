#include "pxfb/functional.hpp"

#include <cmath>

namespace pxfb {

namespace {

void require_same_grid(const ScalarField& u, const ExponentField& p, const CoefficientField& lam) {
    if (!(u.grid == p.p.grid) || !(u.grid == lam.lambda.grid))
        throw std::invalid_argument("functional: fields live on different grids");
    if (u.location != Location::Node)
        throw std::invalid_argument("functional: u must be node-centered");
}

}  // namespace

EnergyBreakdown energy_exact(const ScalarField& u, const ExponentField& p,
                             const CoefficientField& lam, double tau) {
    require_same_grid(u, p, lam);
    const Grid& g = u.grid;
    const double vol = g.cell_volume();
    const std::vector<Vec2> grad = cell_gradient(u);
    const ScalarField uc = cell_average(u);
    EnergyBreakdown e;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        const double pv = p.p[i];
        e.dirichlet += std::pow(norm(grad[size_t(i)]), pv) / pv * vol;
        if (counts_positive(uc[i], tau)) e.volume += lam.lambda[i] * vol;
    }
    e.total = e.dirichlet + e.volume;
    return e;
}

double energy_smoothed(const ScalarField& u, const ExponentField& p, const CoefficientField& lam,
                       double eps, double delta) {
    require_same_grid(u, p, lam);
    if (!(eps > 0.0)) throw std::invalid_argument("energy_smoothed: eps must be positive");
    const Grid& g = u.grid;
    const double vol = g.cell_volume();
    const std::vector<Vec2> grad = cell_gradient(u);
    const ScalarField uc = cell_average(u);
    double e = 0.0;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        const double pv = p.p[i];
        const double g2 = dot(grad[size_t(i)], grad[size_t(i)]) + delta * delta;
        // The -delta^p offset keeps zero-gradient cells at exactly zero energy;
        // both powers use the same expression so they cancel bitwise.
        e += (std::pow(g2, 0.5 * pv) - std::pow(delta * delta, 0.5 * pv)) / pv * vol;
        e += lam.lambda[i] * ramp(uc[i], eps) * vol;
    }
    return e;
}

ScalarField energy_gradient(const ScalarField& u, const ExponentField& p,
                            const CoefficientField& lam, double eps, double delta) {
    require_same_grid(u, p, lam);
    if (!(eps > 0.0)) throw std::invalid_argument("energy_gradient: eps must be positive");
    const Grid& g = u.grid;
    const double vol = g.cell_volume();
    const std::vector<Vec2> grad = cell_gradient(u);
    const ScalarField uc = cell_average(u);
    ScalarField out(g, Location::Node, 0.0);

    if (g.dim == 1) {
        const double cw = 0.5;  // corner weight of the cell average
        for (int ix = 0; ix < g.cells(0); ++ix) {
            const std::int64_t ci = g.cell_index(ix, 0);
            const double pv = p.p[ci];
            const double g2 = grad[size_t(ci)][0] * grad[size_t(ci)][0] + delta * delta;
            const double flux = (g2 > 0.0) ? std::pow(g2, 0.5 * pv - 1.0) * grad[size_t(ci)][0] : 0.0;
            const double dvol = lam.lambda[ci] * ramp_deriv(uc[ci], eps) * cw * vol;
            out.at_node(ix, 0) += -flux / g.h[0] * vol + dvol;
            out.at_node(ix + 1, 0) += flux / g.h[0] * vol + dvol;
        }
    } else {
        const double cw = 0.25;
        for (int ix = 0; ix < g.cells(0); ++ix)
            for (int iy = 0; iy < g.cells(1); ++iy) {
                const std::int64_t ci = g.cell_index(ix, iy);
                const double pv = p.p[ci];
                const Vec2& gv = grad[size_t(ci)];
                const double g2 = dot(gv, gv) + delta * delta;
                const double scale = (g2 > 0.0) ? std::pow(g2, 0.5 * pv - 1.0) : 0.0;
                const double fx = scale * gv[0] * 0.5 / g.h[0] * vol;
                const double fy = scale * gv[1] * 0.5 / g.h[1] * vol;
                const double dvol = lam.lambda[ci] * ramp_deriv(uc[ci], eps) * cw * vol;
                out.at_node(ix, iy) += -fx - fy + dvol;
                out.at_node(ix + 1, iy) += fx - fy + dvol;
                out.at_node(ix, iy + 1) += -fx + fy + dvol;
                out.at_node(ix + 1, iy + 1) += fx + fy + dvol;
            }
    }

    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy)
            if (g.is_boundary_node(ix, iy)) out.at_node(ix, iy) = 0.0;
    return out;
}

MonotonicityGap monotonicity_gap(double p, const Vec2& eta, const Vec2& xi) {
    if (!(p > 1.0)) throw std::invalid_argument("monotonicity_gap: p must exceed 1");
    auto A = [p](const Vec2& q) -> Vec2 {
        const double nq = norm(q);
        if (nq == 0.0) return {0.0, 0.0};
        const double s = std::pow(nq, p - 2.0);
        return {s * q[0], s * q[1]};
    };
    const Vec2 d{eta[0] - xi[0], eta[1] - xi[1]};
    const Vec2 Ae = A(eta), Ax = A(xi);
    MonotonicityGap out;
    out.rhs = (Ae[0] - Ax[0]) * d[0] + (Ae[1] - Ax[1]) * d[1];
    const double nd = norm(d);
    if (p >= 2.0) {
        out.lhs = std::pow(nd, p);
    } else {
        const double base = norm(eta) + norm(xi);
        out.lhs = (nd == 0.0) ? 0.0 : nd * nd * std::pow(base, p - 2.0);
    }
    return out;
}

}  // namespace pxfb
