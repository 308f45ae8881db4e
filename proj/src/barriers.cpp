#include "pxfb/barriers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pxfb {

ExpBarrier::ExpBarrier(double M_, double mu_, double r1_, double r2_)
    : M(M_), mu(mu_), r1(r1_), r2(r2_) {
    if (!(M > 0.0)) throw std::invalid_argument("ExpBarrier: M must be positive");
    if (!(mu > 0.0)) throw std::invalid_argument("ExpBarrier: mu must be positive");
    if (!(0.0 < r2 && r2 < r1)) throw std::invalid_argument("ExpBarrier: need 0 < r2 < r1");
}

double ExpBarrier::value(const Vec2& x) const { return M * std::exp(-mu * dot(x, x)); }

Vec2 ExpBarrier::gradient(const Vec2& x) const {
    const double w = value(x);
    return {-2.0 * mu * x[0] * w, -2.0 * mu * x[1] * w};
}

std::array<double, 3> ExpBarrier::hessian(const Vec2& x) const {
    const double w = value(x);
    return {(4.0 * mu * mu * x[0] * x[0] - 2.0 * mu) * w, 4.0 * mu * mu * x[0] * x[1] * w,
            (4.0 * mu * mu * x[1] * x[1] - 2.0 * mu) * w};
}

std::vector<Vec2> exponent_gradient(const ExponentField& p) {
    const Grid& g = p.p.grid;
    std::vector<Vec2> out(size_t(g.cell_count()), Vec2{0.0, 0.0});
    auto diff = [](double a, double b, double span) { return (b - a) / span; };
    for (int ix = 0; ix < g.cells(0); ++ix)
        for (int iy = 0; iy < g.cells(1); ++iy) {
            Vec2& v = out[size_t(g.cell_index(ix, iy))];
            const int xm = std::max(0, ix - 1), xp = std::min(g.cells(0) - 1, ix + 1);
            v[0] = diff(p.p.at_cell(xm, iy), p.p.at_cell(xp, iy), (xp - xm) * g.h[0]);
            if (g.dim == 2) {
                const int ym = std::max(0, iy - 1), yp = std::min(g.cells(1) - 1, iy + 1);
                v[1] = diff(p.p.at_cell(ix, ym), p.p.at_cell(ix, yp), (yp - ym) * g.h[1]);
            }
        }
    return out;
}

double exp_barrier_operator(const ExpBarrier& b, const ExponentField& p, const Vec2& center,
                            const Vec2& x) {
    const double r = norm(x);
    if (r < b.r2 * (1.0 - 1e-12) || r > b.r1 * (1.0 + 1e-12))
        throw std::invalid_argument("exp_barrier_operator: |x| outside the annulus [r2, r1]");
    const Grid& g = p.p.grid;
    const Vec2 phys{center[0] + x[0], g.dim == 2 ? center[1] + x[1] : 0.0};
    if (!g.contains(phys))
        throw std::invalid_argument("exp_barrier_operator: sample point outside the domain");
    const double pv = interp_cell(p.p, phys);
    const std::vector<Vec2> gp = exponent_gradient(p);
    const Vec2 gradp = interp_cell_vec(g, gp, phys);
    const double N = double(g.dim);
    const double mu = b.mu;
    const double r2sq = dot(x, x);
    const double xdp = dot(x, gradp);
    return (pv - 2.0) * (2.0 * mu * r2sq - 1.0) + (2.0 * mu * r2sq - N) -
           xdp * (std::log(b.M) + std::log(2.0 * mu * r)) + mu * xdp * r2sq;
}

ExpLemmaResult verify_exp_lemma(const ExpBarrier& b, const ExponentField& p, const Vec2& center,
                                int samples_radial, int samples_angular) {
    const Grid& g = p.p.grid;
    ExpLemmaResult out;

    const std::vector<Vec2> gp = exponent_gradient(p);
    for (const Vec2& v : gp) out.grad_p_norm = std::max(out.grad_p_norm, norm(v));

    const double pm = p.p_min, pp = p.p_max;
    out.eps0 = (pm - 1.0) * b.r2 * b.r2 / (2.0 * b.r1 * (b.r1 * b.r1 + 1.0));
    if (out.grad_p_norm > out.eps0)
        throw std::invalid_argument("verify_exp_lemma: lemma hypotheses violated (||grad p|| = " +
                                    std::to_string(out.grad_p_norm) + " exceeds eps0 = " +
                                    std::to_string(out.eps0) + ")");
    const double C_ann = std::max(std::abs(std::log(2.0 * b.r1)), std::abs(std::log(2.0 * b.r2)));
    out.C1 = 0.75 * (pm - 1.0) * b.r2 * b.r2;
    out.C2 = b.r1 / out.C1;
    out.mu0 = std::max(1.0, ((pp - 2.0 + double(g.dim)) + b.r1 * out.grad_p_norm * C_ann) / out.C1);

    out.min_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples_radial; ++i) {
        const double r = b.r2 + (b.r1 - b.r2) * double(i) / double(samples_radial - 1);
        if (g.dim == 1) {
            for (double s : {-1.0, 1.0})
                out.min_value = std::min(out.min_value,
                                         exp_barrier_operator(b, p, center, Vec2{s * r, 0.0}));
        } else {
            for (int j = 0; j < samples_angular; ++j) {
                const double th = 2.0 * std::numbers::pi * double(j) / double(samples_angular);
                const Vec2 x{r * std::cos(th), r * std::sin(th)};
                out.min_value = std::min(out.min_value, exp_barrier_operator(b, p, center, x));
            }
        }
    }
    out.bound = out.C1 * (b.mu - out.C2 * out.grad_p_norm * std::abs(std::log(b.M)));
    out.pass = out.min_value >= out.bound;
    return out;
}

NonDivCoeffs nondiv_coeffs(const ScalarField& u, const ExponentField& p, double c1, double c2,
                           const std::vector<std::int64_t>& cells) {
    if (!(0.0 < c1 && c1 <= c2))
        throw std::invalid_argument("nondiv_coeffs: need 0 < c1 <= c2");
    const Grid& g = u.grid;
    const std::vector<Vec2> gu = cell_gradient(u);
    const std::vector<Vec2> gp = exponent_gradient(p);
    NonDivCoeffs out;
    out.eig_min = std::numeric_limits<double>::infinity();
    out.eig_max = -std::numeric_limits<double>::infinity();
    for (std::int64_t ci : cells) {
        if (ci < 0 || ci >= g.cell_count())
            throw std::invalid_argument("nondiv_coeffs: cell index out of range");
        const Vec2& gv = gu[size_t(ci)];
        const double n = norm(gv);
        if (n < c1 || n > c2)
            throw std::invalid_argument("nondiv_coeffs: cell " + std::to_string(ci) +
                                        " violates the gradient band, |grad u| = " +
                                        std::to_string(n));
        const double pv = p.p[ci];
        const double s = std::pow(n, pv - 2.0);
        NonDivCell cell;
        cell.cell = ci;
        const double nx = gv[0] / n, ny = gv[1] / n;
        cell.a = {s * (1.0 + (pv - 2.0) * nx * nx), s * (pv - 2.0) * nx * ny,
                  s * (1.0 + (pv - 2.0) * ny * ny)};
        const double logn = std::log(n);
        cell.drift = {s * logn * gp[size_t(ci)][0], s * logn * gp[size_t(ci)][1]};
        if (g.dim == 1) {
            cell.eig_min = cell.eig_max = pv - 1.0;
        } else {
            // b = I + (p-2) n n^T has eigenvalues {1, p-1}.
            const double b00 = 1.0 + (pv - 2.0) * nx * nx;
            const double b01 = (pv - 2.0) * nx * ny;
            const double b11 = 1.0 + (pv - 2.0) * ny * ny;
            const double tr = b00 + b11;
            const double disc = std::sqrt(std::max(0.0, 0.25 * (b00 - b11) * (b00 - b11) + b01 * b01));
            cell.eig_min = 0.5 * tr - disc;
            cell.eig_max = 0.5 * tr + disc;
        }
        out.eig_min = std::min(out.eig_min, cell.eig_min);
        out.eig_max = std::max(out.eig_max, cell.eig_max);
        out.cells.push_back(cell);
    }
    return out;
}

SubsolutionResidual gradient_subsolution_check(const ScalarField& u, const ExponentField& p,
                                               double c1, double c2, const ScalarField& phi) {
    if (!(u.grid == phi.grid) || phi.location != Location::Node)
        throw std::invalid_argument("gradient_subsolution_check: phi must be a node field");
    const Grid& g = u.grid;
    const double vol = g.cell_volume();
    const std::vector<Vec2> gu = cell_gradient(u);
    const std::vector<Vec2> gp = exponent_gradient(p);
    const std::vector<Vec2> gphi = cell_gradient(phi);
    const ScalarField phic = cell_average(phi);
    for (double v : phi.values)
        if (v < 0.0)
            throw std::invalid_argument("gradient_subsolution_check: phi must be nonnegative");

    // v = |grad u| as a cell field; grad v by central differences of cells.
    ScalarField vmag(g, Location::Cell);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) vmag[i] = norm(gu[size_t(i)]);
    std::vector<Vec2> gv(size_t(g.cell_count()), Vec2{0.0, 0.0});
    for (int ix = 0; ix < g.cells(0); ++ix)
        for (int iy = 0; iy < g.cells(1); ++iy) {
            Vec2& d = gv[size_t(g.cell_index(ix, iy))];
            const int xm = std::max(0, ix - 1), xp = std::min(g.cells(0) - 1, ix + 1);
            d[0] = (vmag.at_cell(xp, iy) - vmag.at_cell(xm, iy)) / ((xp - xm) * g.h[0]);
            if (g.dim == 2) {
                const int ym = std::max(0, iy - 1), yp = std::min(g.cells(1) - 1, iy + 1);
                d[1] = (vmag.at_cell(ix, yp) - vmag.at_cell(ix, ym)) / ((yp - ym) * g.h[1]);
            }
        }

    SubsolutionResidual out;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        const bool touched = phic[i] != 0.0 || norm(gphi[size_t(i)]) != 0.0;
        if (!touched) continue;
        const double n = vmag[i];
        if (n < c1 || n > c2)
            throw std::invalid_argument("gradient_subsolution_check: phi support touches cell " +
                                        std::to_string(i) + " outside the gradient band");
        const double pv = p.p[i];
        const Vec2& ng = gu[size_t(i)];
        const double nx = ng[0] / n, ny = ng[1] / n;
        const double sD = std::pow(n, pv - 1.0);
        // D grad v
        const Vec2 Dg{sD * (gv[size_t(i)][0] + (pv - 2.0) * nx * (nx * gv[size_t(i)][0] + ny * gv[size_t(i)][1])),
                      sD * (gv[size_t(i)][1] + (pv - 2.0) * ny * (nx * gv[size_t(i)][0] + ny * gv[size_t(i)][1]))};
        const double logn = std::log(n);
        const Vec2 B{sD * logn * gp[size_t(i)][0], sD * logn * gp[size_t(i)][1]};
        const double sH = std::pow(n, pv - 2.0) * logn * dot(ng, gp[size_t(i)]);
        const Vec2 H{sH * ng[0], sH * ng[1]};
        out.value += (dot(Dg, gphi[size_t(i)]) + dot(B, gv[size_t(i)]) * phic[i] +
                      dot(H, gphi[size_t(i)])) * vol;
        out.scale += norm(Dg) * norm(gphi[size_t(i)]) * vol;
    }
    return out;
}

}  // namespace pxfb
