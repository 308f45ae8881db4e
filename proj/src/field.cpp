#include "pxfb/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pxfb {

Grid Grid::make(int dim, const std::array<double, 2>& lo, const std::array<double, 2>& hi,
                const std::array<int, 2>& ncells) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("Grid: dim must be 1 or 2, got " + std::to_string(dim));
    Grid g;
    g.dim = dim;
    for (int a = 0; a < dim; ++a) {
        if (!(hi[a] > lo[a]) || !std::isfinite(lo[a]) || !std::isfinite(hi[a]))
            throw std::invalid_argument("Grid: degenerate extent on axis " + std::to_string(a));
        if (ncells[a] < 2)
            throw std::invalid_argument("Grid: need at least 2 cells per axis, got " +
                                        std::to_string(ncells[a]));
        g.lo[a] = lo[a];
        g.hi[a] = hi[a];
        g.n[a] = ncells[a];
        g.h[a] = (hi[a] - lo[a]) / ncells[a];
    }
    if (dim == 1) {
        g.lo[1] = g.hi[1] = 0.0;
        g.n[1] = 1;
        g.h[1] = 0.0;
    }
    return g;
}

ScalarField::ScalarField(const Grid& g, Location loc, double fill) : grid(g), location(loc) {
    const std::int64_t count = (loc == Location::Node) ? g.node_count() : g.cell_count();
    values.assign(size_t(count), fill);
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, v);
    return m;
}

double ScalarField::min() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, v);
    return m;
}

void ScalarField::check_finite(const std::string& what) const {
    for (size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw std::runtime_error(what + ": non-finite value at index " + std::to_string(i));
}

ScalarField sample_field(const Grid& g, Location loc, const std::function<double(Vec2)>& f) {
    ScalarField out(g, loc);
    if (loc == Location::Node) {
        for (int ix = 0; ix < g.nodes(0); ++ix)
            for (int iy = 0; iy < g.nodes(1); ++iy) {
                const double v = f(g.node_coord(ix, iy));
                if (!std::isfinite(v))
                    throw std::invalid_argument("sample_field: non-finite sample at node index " +
                                                std::to_string(g.node_index(ix, iy)));
                out.at_node(ix, iy) = v;
            }
    } else {
        for (int ix = 0; ix < g.cells(0); ++ix)
            for (int iy = 0; iy < g.cells(1); ++iy) {
                const double v = f(g.cell_center(ix, iy));
                if (!std::isfinite(v))
                    throw std::invalid_argument("sample_field: non-finite sample at cell index " +
                                                std::to_string(g.cell_index(ix, iy)));
                out.at_cell(ix, iy) = v;
            }
    }
    return out;
}

std::vector<Vec2> cell_gradient(const ScalarField& u) {
    if (u.location != Location::Node)
        throw std::invalid_argument("cell_gradient: field must be node-centered");
    const Grid& g = u.grid;
    std::vector<Vec2> grad(size_t(g.cell_count()), Vec2{0.0, 0.0});
    if (g.dim == 1) {
        for (int ix = 0; ix < g.cells(0); ++ix)
            grad[size_t(ix)][0] = (u.at_node(ix + 1, 0) - u.at_node(ix, 0)) / g.h[0];
        return grad;
    }
    for (int ix = 0; ix < g.cells(0); ++ix)
        for (int iy = 0; iy < g.cells(1); ++iy) {
            const double u00 = u.at_node(ix, iy);
            const double u10 = u.at_node(ix + 1, iy);
            const double u01 = u.at_node(ix, iy + 1);
            const double u11 = u.at_node(ix + 1, iy + 1);
            Vec2& gv = grad[size_t(g.cell_index(ix, iy))];
            gv[0] = 0.5 * ((u10 - u00) + (u11 - u01)) / g.h[0];
            gv[1] = 0.5 * ((u01 - u00) + (u11 - u10)) / g.h[1];
        }
    return grad;
}

ScalarField cell_average(const ScalarField& u) {
    if (u.location != Location::Node)
        throw std::invalid_argument("cell_average: field must be node-centered");
    const Grid& g = u.grid;
    ScalarField out(g, Location::Cell);
    if (g.dim == 1) {
        for (int ix = 0; ix < g.cells(0); ++ix)
            out.at_cell(ix, 0) = 0.5 * (u.at_node(ix, 0) + u.at_node(ix + 1, 0));
        return out;
    }
    for (int ix = 0; ix < g.cells(0); ++ix)
        for (int iy = 0; iy < g.cells(1); ++iy)
            out.at_cell(ix, iy) = 0.25 * (u.at_node(ix, iy) + u.at_node(ix + 1, iy) +
                                          u.at_node(ix, iy + 1) + u.at_node(ix + 1, iy + 1));
    return out;
}

namespace {

struct LinCoord {
    int i0;
    double t;  // weight of the i0+1 sample
};

LinCoord locate(double x, double origin, double h, int count) {
    double s = (x - origin) / h;
    s = std::clamp(s, 0.0, double(count - 1));
    int i0 = std::min(int(std::floor(s)), count - 2);
    i0 = std::max(i0, 0);
    return {i0, s - i0};
}

}  // namespace

double interp_node(const ScalarField& u, const Vec2& x) {
    const Grid& g = u.grid;
    const LinCoord cx = locate(x[0], g.lo[0], g.h[0], g.nodes(0));
    if (g.dim == 1)
        return (1 - cx.t) * u.at_node(cx.i0, 0) + cx.t * u.at_node(cx.i0 + 1, 0);
    const LinCoord cy = locate(x[1], g.lo[1], g.h[1], g.nodes(1));
    return (1 - cx.t) * ((1 - cy.t) * u.at_node(cx.i0, cy.i0) + cy.t * u.at_node(cx.i0, cy.i0 + 1)) +
           cx.t * ((1 - cy.t) * u.at_node(cx.i0 + 1, cy.i0) + cy.t * u.at_node(cx.i0 + 1, cy.i0 + 1));
}

double interp_cell(const ScalarField& c, const Vec2& x) {
    const Grid& g = c.grid;
    const LinCoord cx = locate(x[0], g.lo[0] + 0.5 * g.h[0], g.h[0], g.cells(0));
    if (g.dim == 1)
        return (1 - cx.t) * c.at_cell(cx.i0, 0) + cx.t * c.at_cell(cx.i0 + 1, 0);
    const LinCoord cy = locate(x[1], g.lo[1] + 0.5 * g.h[1], g.h[1], g.cells(1));
    return (1 - cx.t) * ((1 - cy.t) * c.at_cell(cx.i0, cy.i0) + cy.t * c.at_cell(cx.i0, cy.i0 + 1)) +
           cx.t * ((1 - cy.t) * c.at_cell(cx.i0 + 1, cy.i0) + cy.t * c.at_cell(cx.i0 + 1, cy.i0 + 1));
}

Vec2 interp_cell_vec(const Grid& g, const std::vector<Vec2>& cellvals, const Vec2& x) {
    const LinCoord cx = locate(x[0], g.lo[0] + 0.5 * g.h[0], g.h[0], g.cells(0));
    auto at = [&](int ix, int iy) -> const Vec2& { return cellvals[size_t(g.cell_index(ix, iy))]; };
    Vec2 out{0.0, 0.0};
    if (g.dim == 1) {
        for (int k = 0; k < 2; ++k)
            out[k] = (1 - cx.t) * at(cx.i0, 0)[k] + cx.t * at(cx.i0 + 1, 0)[k];
        return out;
    }
    const LinCoord cy = locate(x[1], g.lo[1] + 0.5 * g.h[1], g.h[1], g.cells(1));
    for (int k = 0; k < 2; ++k)
        out[k] = (1 - cx.t) * ((1 - cy.t) * at(cx.i0, cy.i0)[k] + cy.t * at(cx.i0, cy.i0 + 1)[k]) +
                 cx.t * ((1 - cy.t) * at(cx.i0 + 1, cy.i0)[k] + cy.t * at(cx.i0 + 1, cy.i0 + 1)[k]);
    return out;
}

ExponentField::ExponentField(ScalarField cellfield) : p(std::move(cellfield)) {
    if (p.location != Location::Cell)
        throw std::invalid_argument("ExponentField: p must be cell-centered");
    p.check_finite("ExponentField");
    p_min = p.min();
    p_max = p.max();
    if (!(p_min > 1.0))
        throw std::invalid_argument("ExponentField: requires p(x) > 1 everywhere, min is " +
                                    std::to_string(p_min));
    const Grid& g = p.grid;
    lipschitz = 0.0;
    for (int ix = 0; ix < g.cells(0); ++ix)
        for (int iy = 0; iy < g.cells(1); ++iy) {
            if (ix + 1 < g.cells(0))
                lipschitz = std::max(lipschitz,
                                     std::abs(p.at_cell(ix + 1, iy) - p.at_cell(ix, iy)) / g.h[0]);
            if (g.dim == 2 && iy + 1 < g.cells(1))
                lipschitz = std::max(lipschitz,
                                     std::abs(p.at_cell(ix, iy + 1) - p.at_cell(ix, iy)) / g.h[1]);
        }
}

CoefficientField::CoefficientField(ScalarField cellfield) : lambda(std::move(cellfield)) {
    if (lambda.location != Location::Cell)
        throw std::invalid_argument("CoefficientField: lambda must be cell-centered");
    lambda.check_finite("CoefficientField");
    lambda1 = lambda.min();
    lambda2 = lambda.max();
    if (lambda1 < 0.0)
        throw std::invalid_argument("CoefficientField: lambda must be nonnegative");
}

BoundaryData::BoundaryData(ScalarField nodefield) : phi0(std::move(nodefield)) {
    if (phi0.location != Location::Node)
        throw std::invalid_argument("BoundaryData: phi0 must be node-centered");
    phi0.check_finite("BoundaryData");
    const Grid& g = phi0.grid;
    sup_phi0 = 0.0;
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy) {
            if (!g.is_boundary_node(ix, iy)) {
                phi0.at_node(ix, iy) = 0.0;
                continue;
            }
            const double v = phi0.at_node(ix, iy);
            if (v < 0.0)
                throw std::invalid_argument("BoundaryData: phi0 must be nonnegative on the boundary");
            sup_phi0 = std::max(sup_phi0, v);
        }
}

ScalarField lambda_star(const ExponentField& p, const CoefficientField& lam) {
    if (!(p.p.grid == lam.lambda.grid))
        throw std::invalid_argument("lambda_star: fields live on different grids");
    ScalarField out(p.p.grid, Location::Cell);
    for (size_t i = 0; i < out.values.size(); ++i) {
        const double pv = p.p.values[i];
        const double lv = lam.lambda.values[i];
        out.values[i] = std::pow(pv * lv / (pv - 1.0), 1.0 / pv);
    }
    return out;
}

}  // namespace pxfb
