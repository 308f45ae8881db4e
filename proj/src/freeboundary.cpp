#include "pxfb/freeboundary.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "pxfb/functional.hpp"

namespace pxfb {

namespace {

// Flux |g|^{p-2} g with the zero-gradient convention.
Vec2 pflux(const Vec2& gv, double pv) {
    const double n = norm(gv);
    if (n == 0.0) return {0.0, 0.0};
    const double s = std::pow(n, pv - 2.0);
    return {s * gv[0], s * gv[1]};
}

}  // namespace

double default_tau(const Grid& g, const ExponentField& p, const CoefficientField& lam) {
    const ScalarField ls = lambda_star(p, lam);
    return g.h_max() * ls.max();
}

FreeBoundary extract(const ScalarField& u, const ExponentField& p, const CoefficientField& lam,
                     double tau) {
    if (u.location != Location::Node)
        throw std::invalid_argument("extract: u must be node-centered");
    if (!(tau >= 0.0)) throw std::invalid_argument("extract: tau must be nonnegative");
    const Grid& g = u.grid;
    const ScalarField ls = lambda_star(p, lam);
    const std::vector<Vec2> grad = cell_gradient(u);
    const ScalarField uc = cell_average(u);
    const double hbar = g.h_max();

    FreeBoundary fb;
    fb.tau = tau;

    auto inside = [&](double v) { return counts_positive(v, tau); };

    if (g.dim == 1) {
        for (int ix = 0; ix < g.cells(0); ++ix) {
            const double a = u.at_node(ix, 0), b = u.at_node(ix + 1, 0);
            if (inside(a) == inside(b)) continue;
            const double t = (tau - a) / (b - a);
            FreeBoundaryPoint pt;
            pt.x = {g.lo[0] + (ix + t) * g.h[0], 0.0};
            pt.nu = inside(a) ? Vec2{1.0, 0.0} : Vec2{-1.0, 0.0};
            fb.points.push_back(pt);
        }
    } else {
        // Marching squares on the node field u - tau; saddles resolved by the
        // cell-average sign. Crossings on shared edges dedupe bitwise.
        std::map<std::pair<std::int64_t, std::int64_t>, int> edge_point;
        auto crossing = [&](int axn0, int ayn0, int axn1, int ayn1) -> int {
            const std::int64_t k0 = g.node_index(axn0, ayn0);
            const std::int64_t k1 = g.node_index(axn1, ayn1);
            const auto key = std::minmax(k0, k1);
            auto it = edge_point.find(key);
            if (it != edge_point.end()) return it->second;
            const std::int64_t ka = key.first, kb = key.second;
            const double a = u[ka], b = u[kb];
            const double t = (tau - a) / (b - a);
            const int ax = int(ka / g.nodes(1)), ay = int(ka % g.nodes(1));
            const int bx = int(kb / g.nodes(1)), by = int(kb % g.nodes(1));
            FreeBoundaryPoint pt;
            pt.x = {g.lo[0] + (ax + t * (bx - ax)) * g.h[0],
                    g.lo[1] + (ay + t * (by - ay)) * g.h[1]};
            const int idx = int(fb.points.size());
            fb.points.push_back(pt);
            edge_point.emplace(key, idx);
            return idx;
        };

        for (int ix = 0; ix < g.cells(0); ++ix)
            for (int iy = 0; iy < g.cells(1); ++iy) {
                const bool c0 = inside(u.at_node(ix, iy));
                const bool c1 = inside(u.at_node(ix + 1, iy));
                const bool c2 = inside(u.at_node(ix + 1, iy + 1));
                const bool c3 = inside(u.at_node(ix, iy + 1));
                const int code = int(c0) | int(c1) << 1 | int(c2) << 2 | int(c3) << 3;
                if (code == 0 || code == 15) continue;
                // Edge endpoints: e0 bottom, e1 right, e2 top, e3 left.
                auto e0 = [&] { return crossing(ix, iy, ix + 1, iy); };
                auto e1 = [&] { return crossing(ix + 1, iy, ix + 1, iy + 1); };
                auto e2 = [&] { return crossing(ix, iy + 1, ix + 1, iy + 1); };
                auto e3 = [&] { return crossing(ix, iy, ix, iy + 1); };
                auto add = [&](int a, int b) { fb.segments.push_back({a, b}); };
                switch (code) {
                    case 1: add(e3(), e0()); break;
                    case 2: add(e0(), e1()); break;
                    case 3: add(e3(), e1()); break;
                    case 4: add(e1(), e2()); break;
                    case 5:
                        if (inside(uc.at_cell(ix, iy))) {
                            add(e3(), e2());
                            add(e1(), e0());
                        } else {
                            add(e3(), e0());
                            add(e1(), e2());
                        }
                        break;
                    case 6: add(e0(), e2()); break;
                    case 7: add(e3(), e2()); break;
                    case 8: add(e2(), e3()); break;
                    case 9: add(e0(), e2()); break;
                    case 10:
                        if (inside(uc.at_cell(ix, iy))) {
                            add(e0(), e3());
                            add(e2(), e1());
                        } else {
                            add(e0(), e1());
                            add(e2(), e3());
                        }
                        break;
                    case 11: add(e1(), e2()); break;
                    case 12: add(e3(), e1()); break;
                    case 13: add(e0(), e1()); break;
                    case 14: add(e3(), e0()); break;
                    default: break;
                }
            }
    }

    if (fb.points.empty()) {
        fb.none = true;
        return fb;
    }

    // Normals: -grad u averaged over nearby positive cells.
    auto positive_cell_normal = [&](const Vec2& x, double radius) -> Vec2 {
        Vec2 acc{0.0, 0.0};
        int found = 0;
        const int rx = int(std::ceil(radius / g.h[0])) + 1;
        const int ry = g.dim == 2 ? int(std::ceil(radius / g.h[1])) + 1 : 0;
        const int cx0 = std::clamp(int((x[0] - g.lo[0]) / g.h[0]), 0, g.cells(0) - 1);
        const int cy0 = g.dim == 2 ? std::clamp(int((x[1] - g.lo[1]) / g.h[1]), 0, g.cells(1) - 1) : 0;
        for (int ix = std::max(0, cx0 - rx); ix <= std::min(g.cells(0) - 1, cx0 + rx); ++ix)
            for (int iy = std::max(0, cy0 - ry); iy <= std::min(g.cells(1) - 1, cy0 + ry); ++iy) {
                const Vec2 c = g.cell_center(ix, iy);
                const Vec2 d{c[0] - x[0], c[1] - x[1]};
                if (norm(d) > radius) continue;
                if (!counts_positive(uc.at_cell(ix, iy), tau)) continue;
                const Vec2& gv = grad[size_t(g.cell_index(ix, iy))];
                acc[0] += gv[0];
                acc[1] += gv[1];
                ++found;
            }
        if (found == 0) return {0.0, 0.0};
        return acc;
    };

    std::vector<FreeBoundaryPoint> kept;
    std::vector<int> remap(fb.points.size(), -1);
    for (size_t i = 0; i < fb.points.size(); ++i) {
        FreeBoundaryPoint pt = fb.points[i];
        if (g.dim == 2) {
            Vec2 acc = positive_cell_normal(pt.x, 2.0 * hbar);
            if (norm(acc) < 1e-14) acc = positive_cell_normal(pt.x, 4.0 * hbar);
            const double na = norm(acc);
            if (na < 1e-14) continue;  // cannot orient; drop the point
            pt.nu = {-acc[0] / na, -acc[1] / na};
        }
        const Vec2 probe{pt.x[0] - 3.0 * hbar * pt.nu[0], pt.x[1] - 3.0 * hbar * pt.nu[1]};
        pt.grad_trace = norm(interp_cell_vec(g, grad, probe));
        pt.lambda_star = interp_cell(ls, pt.x);
        remap[i] = int(kept.size());
        kept.push_back(pt);
    }
    fb.points = std::move(kept);
    std::vector<std::array<int, 2>> segs;
    for (const auto& s : fb.segments)
        if (remap[size_t(s[0])] >= 0 && remap[size_t(s[1])] >= 0)
            segs.push_back({remap[size_t(s[0])], remap[size_t(s[1])]});
    fb.segments = std::move(segs);
    fb.none = fb.points.empty();
    return fb;
}

LambdaStarCondition lambda_star_condition(const FreeBoundary& fb, const Grid& g) {
    if (fb.none || fb.points.empty())
        throw std::invalid_argument("lambda_star_condition: no free boundary");
    LambdaStarCondition out;
    const double margin = 5.0 * g.h_max();
    for (const auto& pt : fb.points) {
        const double err = std::abs(pt.grad_trace - pt.lambda_star) / pt.lambda_star;
        out.relative_errors.push_back(err);
        if (g.boundary_distance(pt.x) >= margin) {
            out.summary_max = std::max(out.summary_max, err);
            ++out.points_used;
        }
    }
    return out;
}

DensityResult density_ratios(const ScalarField& u, const FreeBoundary& fb, double tau,
                             const std::vector<double>& radii) {
    const Grid& g = u.grid;
    const ScalarField uc = cell_average(u);
    DensityResult out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = -std::numeric_limits<double>::infinity();
    for (size_t pi = 0; pi < fb.points.size(); ++pi) {
        const Vec2& x0 = fb.points[pi].x;
        for (double r : radii) {
            BallSample s{int(pi), r, 0.0, false};
            if (g.boundary_distance(x0) < r) {
                s.skipped = true;
                ++out.skipped;
                out.samples.push_back(s);
                continue;
            }
            std::int64_t in_ball = 0, positive = 0;
            for (int ix = 0; ix < g.cells(0); ++ix)
                for (int iy = 0; iy < g.cells(1); ++iy) {
                    const Vec2 c = g.cell_center(ix, iy);
                    const Vec2 d{c[0] - x0[0], c[1] - x0[1]};
                    if (norm(d) > r) continue;
                    ++in_ball;
                    if (counts_positive(uc.at_cell(ix, iy), tau)) ++positive;
                }
            if (in_ball == 0) {
                s.skipped = true;
                ++out.skipped;
                out.samples.push_back(s);
                continue;
            }
            s.value = double(positive) / double(in_ball);
            out.min_ratio = std::min(out.min_ratio, s.value);
            out.max_ratio = std::max(out.max_ratio, s.value);
            out.samples.push_back(s);
        }
    }
    return out;
}

NondegeneracyResult nondegeneracy(const ScalarField& u, const FreeBoundary& fb,
                                  const std::vector<double>& radii) {
    const Grid& g = u.grid;
    NondegeneracyResult out;
    out.min_growth = std::numeric_limits<double>::infinity();
    out.max_linear = 0.0;
    auto sup_ball = [&](const Vec2& x0, double r) {
        double sup = 0.0;
        for (int ix = 0; ix < g.nodes(0); ++ix)
            for (int iy = 0; iy < g.nodes(1); ++iy) {
                const Vec2 x = g.node_coord(ix, iy);
                const Vec2 d{x[0] - x0[0], x[1] - x0[1]};
                if (norm(d) <= r) sup = std::max(sup, u.at_node(ix, iy));
            }
        return sup;
    };
    for (size_t pi = 0; pi < fb.points.size(); ++pi) {
        const Vec2& x0 = fb.points[pi].x;
        for (double r : radii) {
            if (g.boundary_distance(x0) < r) {
                out.growth.push_back({int(pi), r, 0.0, true});
                out.linear_bound.push_back({int(pi), r, 0.0, true});
                ++out.skipped;
                continue;
            }
            const double sg = sup_ball(x0, r) / r;
            const double sl = sup_ball(x0, 0.75 * r) / r;
            out.growth.push_back({int(pi), r, sg, false});
            out.linear_bound.push_back({int(pi), r, sl, false});
            out.min_growth = std::min(out.min_growth, sg);
            out.max_linear = std::max(out.max_linear, sl);
        }
    }
    return out;
}

ScalarField blowup(const ScalarField& u, const Vec2& x0, double rho, int n_ref) {
    const Grid& g = u.grid;
    const double refwidth = std::sqrt(double(g.dim));
    if (g.boundary_distance(x0) < rho * refwidth)
        throw std::invalid_argument("blowup: B_{rho sqrt(N)} around x0 leaves the domain");
    const Grid ref = Grid::make(g.dim, {-1.0, -1.0}, {1.0, 1.0}, {n_ref, n_ref});
    ScalarField out(ref, Location::Node);
    for (int ix = 0; ix < ref.nodes(0); ++ix)
        for (int iy = 0; iy < ref.nodes(1); ++iy) {
            const Vec2 xi = ref.node_coord(ix, iy);
            const Vec2 phys{x0[0] + rho * xi[0], x0[1] + rho * xi[1]};
            out.at_node(ix, iy) = interp_node(u, phys) / rho;
        }
    return out;
}

ScalarField blowup_halfplane_model(const Grid& reference, double lambda_star_x0, const Vec2& nu) {
    ScalarField out(reference, Location::Node);
    for (int ix = 0; ix < reference.nodes(0); ++ix)
        for (int iy = 0; iy < reference.nodes(1); ++iy) {
            const Vec2 x = reference.node_coord(ix, iy);
            out.at_node(ix, iy) = lambda_star_x0 * std::max(-dot(x, nu), 0.0);
        }
    return out;
}

double measure_pairing(const ScalarField& u, const ExponentField& p, const ScalarField& phi) {
    if (!(u.grid == phi.grid) || phi.location != Location::Node)
        throw std::invalid_argument("measure_pairing: phi must be a node field on the same grid");
    const Grid& g = u.grid;
    const double vol = g.cell_volume();
    const std::vector<Vec2> gu = cell_gradient(u);
    const std::vector<Vec2> gphi = cell_gradient(phi);
    double acc = 0.0;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        const Vec2 q = pflux(gu[size_t(i)], p.p[i]);
        acc -= dot(q, gphi[size_t(i)]) * vol;
    }
    return acc;
}

WeakIdentity weak_identity_residual(const ScalarField& u, const ExponentField& p,
                                    const CoefficientField& lam, const FreeBoundary& fb,
                                    const ScalarField& phi) {
    const Grid& g = u.grid;
    if (!(phi.grid == g) || phi.location != Location::Node)
        throw std::invalid_argument("weak_identity_residual: phi must be a node field on the grid");
    const double clear = 2.0 * g.h_max();
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy)
            if (g.boundary_distance(g.node_coord(ix, iy)) < clear && phi.at_node(ix, iy) != 0.0)
                throw std::invalid_argument("weak_identity_residual: phi must vanish near the boundary");

    const double vol = g.cell_volume();
    const std::vector<Vec2> gu = cell_gradient(u);
    const std::vector<Vec2> gphi = cell_gradient(phi);
    const ScalarField uc = cell_average(u);
    const ScalarField ls = lambda_star(p, lam);

    WeakIdentity out;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        if (!counts_positive(uc[i], fb.tau)) continue;
        const Vec2 q = pflux(gu[size_t(i)], p.p[i]);
        out.lhs -= dot(q, gphi[size_t(i)]) * vol;
    }

    if (g.dim == 1) {
        for (const auto& pt : fb.points) {
            const double pv = interp_cell(p.p, pt.x);
            out.rhs += std::pow(pt.lambda_star, pv - 1.0) * interp_node(phi, pt.x);
        }
    } else {
        for (const auto& s : fb.segments) {
            const Vec2& a = fb.points[size_t(s[0])].x;
            const Vec2& b = fb.points[size_t(s[1])].x;
            const Vec2 m{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
            const Vec2 d{b[0] - a[0], b[1] - a[1]};
            const double len = norm(d);
            const double pv = interp_cell(p.p, m);
            const double lsv = interp_cell(ls, m);
            out.rhs += std::pow(lsv, pv - 1.0) * interp_node(phi, m) * len;
        }
    }
    out.relerr = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-12);
    return out;
}

std::vector<PerimeterSample> perimeter_scaling(const ScalarField& u, const ExponentField& p,
                                               const FreeBoundary& fb,
                                               const std::vector<double>& radii) {
    const Grid& g = u.grid;
    const double w = 2.0 * g.h_max();
    std::vector<PerimeterSample> out;
    for (size_t pi = 0; pi < fb.points.size(); ++pi) {
        const Vec2& x0 = fb.points[pi].x;
        for (double r : radii) {
            PerimeterSample s;
            s.point = int(pi);
            s.r = r;
            if (g.boundary_distance(x0) < r + w + 2.0 * g.h_max()) {
                s.skipped = true;
                out.push_back(s);
                continue;
            }
            ScalarField psi(g, Location::Node);
            for (int ix = 0; ix < g.nodes(0); ++ix)
                for (int iy = 0; iy < g.nodes(1); ++iy) {
                    const Vec2 x = g.node_coord(ix, iy);
                    const Vec2 d{x[0] - x0[0], x[1] - x0[1]};
                    psi.at_node(ix, iy) = std::clamp((r - norm(d)) / w, 0.0, 1.0);
                }
            const double rpow = (g.dim == 2) ? r : 1.0;
            s.lambda_ratio = measure_pairing(u, p, psi) / rpow;
            if (g.dim == 1) {
                int count = 0;
                for (const auto& pt : fb.points)
                    if (std::abs(pt.x[0] - x0[0]) <= r) ++count;
                s.hausdorff_ratio = double(count);
            } else {
                double len = 0.0;
                for (const auto& seg : fb.segments) {
                    const Vec2& a = fb.points[size_t(seg[0])].x;
                    const Vec2& b = fb.points[size_t(seg[1])].x;
                    const Vec2 m{0.5 * (a[0] + b[0]) - x0[0], 0.5 * (a[1] + b[1]) - x0[1]};
                    if (norm(m) > r) continue;
                    const Vec2 d{b[0] - a[0], b[1] - a[1]};
                    len += norm(d);
                }
                s.hausdorff_ratio = len / r;
            }
            out.push_back(s);
        }
    }
    return out;
}

NormalHoelderFit normal_hoelder_fit(const FreeBoundary& fb, const Grid& g) {
    if (g.dim != 2)
        throw std::invalid_argument("normal_hoelder_fit: 2D free boundaries only");
    if (fb.points.size() < 8)
        throw std::invalid_argument("normal_hoelder_fit: needs at least 8 points");
    const double dmax = 0.25 * g.diameter();
    std::vector<double> lx, ly;
    for (size_t i = 0; i < fb.points.size(); ++i)
        for (size_t j = i + 1; j < fb.points.size(); ++j) {
            const Vec2 dx{fb.points[i].x[0] - fb.points[j].x[0],
                          fb.points[i].x[1] - fb.points[j].x[1]};
            const double d = norm(dx);
            if (d <= 0.0 || d > dmax) continue;
            const Vec2 dn{fb.points[i].nu[0] - fb.points[j].nu[0],
                          fb.points[i].nu[1] - fb.points[j].nu[1]};
            const double nd = norm(dn);
            if (nd < 1e-12) continue;
            lx.push_back(std::log(d));
            ly.push_back(std::log(nd));
        }
    NormalHoelderFit out;
    out.pairs = int(lx.size());
    if (lx.size() < 8) {
        out.flat = true;
        out.gamma = std::numeric_limits<double>::infinity();
        return out;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(lx.size());
    for (size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14) {
        out.flat = true;
        out.gamma = std::numeric_limits<double>::infinity();
        return out;
    }
    out.gamma = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - out.gamma * sx) / n;
    out.constant = std::exp(intercept);
    double rss = 0.0;
    for (size_t k = 0; k < lx.size(); ++k) {
        const double e = ly[k] - (intercept + out.gamma * lx[k]);
        rss += e * e;
    }
    out.residual = std::sqrt(rss / n);
    return out;
}

}  // namespace pxfb
