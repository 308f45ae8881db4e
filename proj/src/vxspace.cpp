#include "pxfb/vxspace.hpp"

#include <cmath>

namespace pxfb {

namespace {

// Modular of the raw cell sample vector scaled by 1/s.
double modular_scaled(const std::vector<double>& cellvals, const ExponentField& p, double vol,
                      double s) {
    double acc = 0.0;
    for (size_t i = 0; i < cellvals.size(); ++i)
        acc += std::pow(std::abs(cellvals[i]) / s, p.p.values[i]) * vol;
    return acc;
}

std::vector<double> to_cells(const ScalarField& u, const ExponentField& p) {
    if (!(u.grid == p.p.grid))
        throw std::invalid_argument("vxspace: field and exponent live on different grids");
    if (u.location == Location::Cell) return u.values;
    return cell_average(u).values;
}

}  // namespace

double modular(const ScalarField& u, const ExponentField& p) {
    const std::vector<double> c = to_cells(u, p);
    const double vol = u.grid.cell_volume();
    double acc = 0.0;
    for (size_t i = 0; i < c.size(); ++i) acc += std::pow(std::abs(c[i]), p.p.values[i]) * vol;
    return acc;
}

double luxemburg_norm(const ScalarField& u, const ExponentField& p) {
    const std::vector<double> c = to_cells(u, p);
    const double vol = u.grid.cell_volume();
    double umax = 0.0;
    for (double v : c) umax = std::max(umax, std::abs(v));
    if (umax == 0.0) return 0.0;

    const double rho = modular_scaled(c, p, vol, 1.0);
    // modular(u/s) is strictly decreasing in s, so any bracket works.
    double hi = std::max(rho, 1.0) * (1.0 + umax);
    double lo = std::min(1e-12, hi * 1e-6);
    while (modular_scaled(c, p, vol, hi) > 1.0) hi *= 2.0;
    while (modular_scaled(c, p, vol, lo) <= 1.0) lo *= 0.5;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (modular_scaled(c, p, vol, mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

EquiBound equi_bound_check(const ScalarField& u, const ExponentField& p) {
    EquiBound out;
    out.lhs = luxemburg_norm(u, p);
    const double rho = modular(u, p);
    out.rhs = std::max(std::pow(rho, 1.0 / p.p_min), std::pow(rho, 1.0 / p.p_max));
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-10);
    return out;
}

double poincare_ratio(const ScalarField& u, const ExponentField& p) {
    if (u.location != Location::Node)
        throw std::invalid_argument("poincare_ratio: u must be node-centered");
    const Grid& g = u.grid;
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy)
            if (g.is_boundary_node(ix, iy) && u.at_node(ix, iy) != 0.0)
                throw std::invalid_argument("poincare_ratio: u must vanish on the boundary");
    const double nu = luxemburg_norm(u, p);
    if (nu == 0.0) return 0.0;  // 0/0 by convention

    const std::vector<Vec2> grad = cell_gradient(u);
    ScalarField gmag(g, Location::Cell);
    for (size_t i = 0; i < grad.size(); ++i) gmag.values[i] = norm(grad[i]);
    const double ng = luxemburg_norm(gmag, p);
    if (ng == 0.0)
        throw std::runtime_error("poincare_ratio: zero gradient with nonzero u");
    return nu / ng;
}

}  // namespace pxfb
