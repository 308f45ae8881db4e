#include "pxfb/optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "pxfb/pxharmonic.hpp"

namespace pxfb {

namespace {

CoefficientField zero_coefficient(const Grid& g) {
    return CoefficientField(ScalarField(g, Location::Cell, 0.0));
}

// Dirichlet-only gradient (lambda = 0, delta = 0, unit eps placeholder).
ScalarField dirichlet_gradient(const ScalarField& u, const ExponentField& p) {
    return energy_gradient(u, p, zero_coefficient(u.grid), 1.0, 0.0);
}

}  // namespace

ContinuationSchedule ContinuationSchedule::defaults(const Grid& g, const ExponentField& p,
                                                    const CoefficientField& lam,
                                                    const BoundaryData& phi0) {
    ContinuationSchedule s;
    const double scale = std::max(phi0.sup_phi0, 1e-12);
    double lstar_max = 0.0;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        const double pv = p.p[i];
        lstar_max = std::max(lstar_max, std::pow(pv * lam.lambda[i] / (pv - 1.0), 1.0 / pv));
    }
    // Spec floor is 0.5 h; the default final stage stays at 2 h so the ramp
    // layer is resolved by a few cells and the interface slope is pinned. The
    // endgame shrinks eps by less than a cell of interface motion per stage,
    // which keeps the iterate in the basin of the discrete optimum.
    const double eps_scale = g.h_max() * std::max(lstar_max, scale * 0.1);
    const double eps_final = 2.0 * eps_scale;
    for (double f : {0.5, 0.25, 0.1, 0.05}) {
        const double e = f * scale;
        if (e > 8.0 * eps_scale * (1.0 + 1e-12)) s.eps_list.push_back(e);
    }
    for (double f : {8.0, 6.5, 5.0, 3.5}) {
        const double e = f * eps_scale;
        if (e > eps_final * (1.0 + 1e-12) &&
            (s.eps_list.empty() || e < s.eps_list.back() * (1.0 - 1e-12)))
            s.eps_list.push_back(e);
    }
    s.eps_list.push_back(eps_final);
    if (p.p_min >= 2.0)
        s.delta_list = {1e-1, 1e-2, 1e-3, 0.0};
    else
        s.delta_list = {1e-1, 1e-2, 1e-3};
    return s;
}

void ContinuationSchedule::validate(const Grid& g) const {
    if (eps_list.empty()) throw std::invalid_argument("schedule: eps_list must be nonempty");
    for (size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0)) throw std::invalid_argument("schedule: eps must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("schedule: eps_list must be strictly decreasing");
    }
    for (size_t i = 0; i < delta_list.size(); ++i) {
        if (delta_list[i] < 0.0) throw std::invalid_argument("schedule: delta must be nonnegative");
        if (i > 0 && delta_list[i] > delta_list[i - 1])
            throw std::invalid_argument("schedule: delta_list must be non-increasing");
    }
    if (!(inner_tol > 0.0)) throw std::invalid_argument("schedule: inner_tol must be positive");
    if (max_inner_iters < 1) throw std::invalid_argument("schedule: max_inner_iters must be >= 1");
    (void)g;
}

namespace {

// Exact minimization of the stage energy over a single node value. The
// restriction to one node is piecewise smooth and convex on each piece; the
// pieces are delimited by the ramp kinks of the incident cell averages.
struct NodeProblem {
    int ncells = 0;
    std::array<std::int64_t, 4> ci{};
    std::array<Vec2, 4> coef{};    // d(cell gradient)/d(node value)
    std::array<Vec2, 4> gbase{};   // cell gradient at node value 0
    std::array<double, 4> abase{};  // cell average at node value 0
    double cw = 0.5;
    double vol = 0.0;

    double deriv(const ExponentField& p, const CoefficientField& lam, double eps, double delta,
                 double v) const {
        double d = 0.0;
        for (int c = 0; c < ncells; ++c) {
            const double pv = p.p[ci[size_t(c)]];
            const Vec2 g{gbase[size_t(c)][0] + v * coef[size_t(c)][0],
                         gbase[size_t(c)][1] + v * coef[size_t(c)][1]};
            const double S = dot(g, g) + delta * delta;
            if (S > 0.0) d += std::pow(S, 0.5 * pv - 1.0) * dot(g, coef[size_t(c)]) * vol;
            d += lam.lambda[ci[size_t(c)]] * ramp_deriv(abase[size_t(c)] + cw * v, eps) * cw * vol;
        }
        return d;
    }


    double value(const ExponentField& p, const CoefficientField& lam, double eps, double delta,
                 double v) const {
        double e = 0.0;
        for (int c = 0; c < ncells; ++c) {
            const double pv = p.p[ci[size_t(c)]];
            const Vec2 g{gbase[size_t(c)][0] + v * coef[size_t(c)][0],
                         gbase[size_t(c)][1] + v * coef[size_t(c)][1]};
            const double S = dot(g, g) + delta * delta;
            e += (std::pow(S, 0.5 * pv) - std::pow(delta * delta, 0.5 * pv)) / pv * vol;
            e += lam.lambda[ci[size_t(c)]] * ramp(abase[size_t(c)] + cw * v, eps) * vol;
        }
        return e;
    }

    double second_deriv(const ExponentField& p, const CoefficientField& lam, double eps,
                        double delta, double v) const {
        double d2 = 0.0;
        for (int c = 0; c < ncells; ++c) {
            const double pv = p.p[ci[size_t(c)]];
            const Vec2 g{gbase[size_t(c)][0] + v * coef[size_t(c)][0],
                         gbase[size_t(c)][1] + v * coef[size_t(c)][1]};
            const double S = dot(g, g) + delta * delta;
            const double ge = dot(g, coef[size_t(c)]);
            const double ee = dot(coef[size_t(c)], coef[size_t(c)]);
            if (S > 0.0)
                d2 += ((pv - 2.0) * std::pow(S, 0.5 * pv - 2.0) * ge * ge +
                       std::pow(S, 0.5 * pv - 1.0) * ee) * vol;
            const double lamv = lam.lambda[ci[size_t(c)]];
            if (lamv == 0.0) continue;
            const double t = (abase[size_t(c)] + cw * v) / eps;
            if (t > 0.0 && t < 1.0)
                d2 += lamv * (6.0 - 12.0 * t) / (eps * eps) * cw * cw * vol;
        }
        return d2;
    }

    // Stationary point on a piece: safeguarded Newton on the derivative, with
    // bisection as the fallback bracket update.
    double piece_min(const ExponentField& p, const CoefficientField& lam, double eps, double delta,
                     double a, double b) const {
        double da = deriv(p, lam, eps, delta, a);
        if (da >= 0.0) return a;
        double db = deriv(p, lam, eps, delta, b);
        if (db <= 0.0) return b;
        double v = 0.5 * (a + b);
        for (int it = 0; it < 60 && b - a > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
            const double d = deriv(p, lam, eps, delta, v);
            if (d == 0.0) return v;
            (d < 0.0 ? a : b) = v;
            const double d2 = second_deriv(p, lam, eps, delta, v);
            double next = (d2 > 0.0) ? v - d / d2 : 0.5 * (a + b);
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            v = next;
        }
        return v;
    }

    // Improve on v0 over [lo, hi]: candidate stationary points are collected on
    // pieces between the ramp's curvature breakpoints (cell averages crossing
    // 0, eps/2, eps) and the best energy wins. Never returns a worse point.
    double minimize_on(const ExponentField& p, const CoefficientField& lam, double eps,
                       double delta, double lo, double hi, double v0) const {
        std::array<double, 16> pts{};
        int npts = 0;
        pts[size_t(npts++)] = lo;
        for (int c = 0; c < ncells; ++c) {
            if (lam.lambda[ci[size_t(c)]] == 0.0) continue;
            for (double level : {0.0, 0.5 * eps, eps}) {
                const double v = (level - abase[size_t(c)]) / cw;
                if (v > lo && v < hi) pts[size_t(npts++)] = v;
            }
        }
        pts[size_t(npts++)] = hi;
        std::sort(pts.begin(), pts.begin() + npts);
        double best_v = std::clamp(v0, lo, hi);
        double best_f = value(p, lam, eps, delta, best_v);
        for (int i = 0; i + 1 < npts; ++i) {
            if (!(pts[size_t(i + 1)] > pts[size_t(i)])) continue;
            const double v = piece_min(p, lam, eps, delta, pts[size_t(i)], pts[size_t(i + 1)]);
            const double f = value(p, lam, eps, delta, v);
            if (f < best_f) {
                best_f = f;
                best_v = v;
            }
        }
        return best_v;
    }
};

NodeProblem make_node_problem(const ScalarField& u, int ix, int iy) {
    const Grid& g = u.grid;
    NodeProblem np;
    np.vol = g.cell_volume();
    np.cw = g.dim == 2 ? 0.25 : 0.5;
    if (g.dim == 1) {
        np.ncells = 2;
        np.ci = {g.cell_index(ix - 1, 0), g.cell_index(ix, 0), 0, 0};
        np.coef[0] = {1.0 / g.h[0], 0.0};
        np.coef[1] = {-1.0 / g.h[0], 0.0};
        np.gbase[0] = {-u.at_node(ix - 1, 0) / g.h[0], 0.0};
        np.gbase[1] = {u.at_node(ix + 1, 0) / g.h[0], 0.0};
        np.abase[0] = 0.5 * u.at_node(ix - 1, 0);
        np.abase[1] = 0.5 * u.at_node(ix + 1, 0);
        return np;
    }
    np.ncells = 4;
    int c = 0;
    for (int cx = ix - 1; cx <= ix; ++cx)
        for (int cy = iy - 1; cy <= iy; ++cy) {
            np.ci[size_t(c)] = g.cell_index(cx, cy);
            const double sx = (ix == cx) ? -1.0 : 1.0;  // node on the low edge: -d/dx
            const double sy = (iy == cy) ? -1.0 : 1.0;
            np.coef[size_t(c)] = {sx * 0.5 / g.h[0], sy * 0.5 / g.h[1]};
            double gx = 0.0, gy = 0.0, av = 0.0;
            for (int dx = 0; dx <= 1; ++dx)
                for (int dy = 0; dy <= 1; ++dy) {
                    const int nx = cx + dx, ny = cy + dy;
                    const double val = (nx == ix && ny == iy) ? 0.0 : u.at_node(nx, ny);
                    gx += (dx == 1 ? 1.0 : -1.0) * 0.5 / g.h[0] * val;
                    gy += (dy == 1 ? 1.0 : -1.0) * 0.5 / g.h[1] * val;
                    av += 0.25 * val;
                }
            np.gbase[size_t(c)] = {gx, gy};
            np.abase[size_t(c)] = av;
            ++c;
        }
    return np;
}

// One deterministic forward sweep of nodewise relaxation with over-relaxation
// factor omega (nonlinear SOR). Plain exact minimization (omega = 1) relaxes
// the smooth modes at 1 - O(h^2) per sweep, too slow on fine grids.
void relaxation_sweep(ScalarField& u, const ExponentField& p, const CoefficientField& lam,
                      double eps, double delta, bool clamp, double lo, double hi, double omega) {
    const Grid& g = u.grid;
    const double big = 10.0 * (1.0 + u.max_abs());
    for (int ix = 1; ix < g.nodes(0) - 1; ++ix) {
        const int ylim = g.dim == 2 ? g.nodes(1) - 1 : 1;
        for (int iy = (g.dim == 2 ? 1 : 0); iy < ylim; ++iy) {
            const NodeProblem np = make_node_problem(u, ix, iy);
            const double v0 = u.at_node(ix, iy);
            const double lo_k = clamp ? lo : v0 - big;
            const double hi_k = clamp ? hi : v0 + big;
            const double vstar = np.minimize_on(p, lam, eps, delta, lo_k, hi_k, v0);
            u.at_node(ix, iy) = std::clamp(v0 + omega * (vstar - v0), lo_k, hi_k);
        }
    }
}

// KKT violation of the (C^1) stage energy, normalized by cell volume.
double subdiff_residual(const ScalarField& u, const ExponentField& p, const CoefficientField& lam,
                        double eps, double delta, bool clamp, double lo, double hi) {
    const Grid& g = u.grid;
    const ScalarField grad = energy_gradient(u, p, lam, eps, delta);
    double r = 0.0;
    for (int ix = 1; ix < g.nodes(0) - 1; ++ix) {
        const int ylim = g.dim == 2 ? g.nodes(1) - 1 : 1;
        for (int iy = (g.dim == 2 ? 1 : 0); iy < ylim; ++iy) {
            double gk = grad.at_node(ix, iy);
            const double v = u.at_node(ix, iy);
            if (clamp && v <= lo && gk > 0.0) gk = 0.0;
            if (clamp && v >= hi && gk < 0.0) gk = 0.0;
            r = std::max(r, std::abs(gk));
        }
    }
    return r / g.cell_volume();
}

}  // namespace

void clamp_projection(ScalarField& u, const BoundaryData& phi0) {
    if (!(u.grid == phi0.phi0.grid))
        throw std::invalid_argument("clamp_projection: mismatched grids");
    const Grid& g = u.grid;
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy) {
            double& v = u.at_node(ix, iy);
            if (g.is_boundary_node(ix, iy))
                v = phi0.phi0.at_node(ix, iy);
            else
                v = std::clamp(v, 0.0, phi0.sup_phi0);
        }
}

DescentResult run_descent(ScalarField& u, const ExponentField& p, const CoefficientField& lam,
                          double eps, double delta, const DescentControl& ctl) {
    const Grid& g = u.grid;
    const std::int64_t nn = g.node_count();

    std::vector<char> interior(size_t(nn), 0);
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy)
            interior[size_t(g.node_index(ix, iy))] = !g.is_boundary_node(ix, iy);

    auto project = [&](ScalarField& v) {
        if (!ctl.clamp) return;
        for (std::int64_t k = 0; k < nn; ++k)
            if (interior[size_t(k)]) v[k] = std::clamp(v[k], ctl.clamp_lo, ctl.clamp_hi);
    };

    // KKT residual from the nodewise subdifferential; the assembled gradient
    // alone misreports stationary points sitting on the ramp kinks.
    auto residual_norm = [&](const ScalarField& v, const ScalarField& grad) {
        (void)grad;
        return subdiff_residual(v, p, lam, eps, delta, ctl.clamp, ctl.clamp_lo, ctl.clamp_hi);
    };

    project(u);
    double energy = energy_smoothed(u, p, lam, eps, delta);
    if (!std::isfinite(energy)) throw std::runtime_error(std::string(ctl.tag) + ": NaN energy");
    ScalarField grad = energy_gradient(u, p, lam, eps, delta);
    double res = residual_norm(u, grad);

    // Nonmonotone sufficient-decrease reference (window of recent energies).
    // A strictly monotone Armijo rule drags Barzilai-Borwein steps down to
    // steepest-descent rates on these stiff stages.
    constexpr int kWindow = 10;
    std::vector<double> recent(kWindow, energy);
    int recent_pos = 0;
    auto energy_ref = [&recent]() {
        double m = recent[0];
        for (double e : recent) m = std::max(m, e);
        return m;
    };

    double step = 0.0;
    double bb_sy = 0.0, bb_yy = 0.0;  // secant across the last gradient step only
    ScalarField u_prev, grad_prev;
    DescentResult out{0, res, energy};

    // SOR factor tuned to the grid; drop back to plain relaxation if the
    // residual stops improving (the overshoot can cycle near the rim).
    double omega = 2.0 / (1.0 + std::sin(std::numbers::pi * g.h_max() / g.min_extent()));
    double res_mark = res;
    int mark_it = 0;

    for (int it = 0; it < ctl.max_iters && res > ctl.tol; ++it) {
        // Nodewise relaxation drains the active set and the free-boundary rim,
        // which plain gradient steps traverse one grid layer at a time.
        relaxation_sweep(u, p, lam, eps, delta, ctl.clamp, ctl.clamp_lo, ctl.clamp_hi, omega);
        if (it - mark_it >= 200) {
            if (res > 0.5 * res_mark && omega > 1.0) omega = 0.5 * (1.0 + omega);
            res_mark = res;
            mark_it = it;
        }
        energy = energy_smoothed(u, p, lam, eps, delta);
        if (!std::isfinite(energy))
            throw std::runtime_error(std::string(ctl.tag) + ": NaN energy after relaxation");
        recent[size_t(recent_pos)] = energy;
        recent_pos = (recent_pos + 1) % kWindow;
        grad = energy_gradient(u, p, lam, eps, delta);
        res = residual_norm(u, grad);
        out.iterations = it + 1;
        out.grad_norm = res;
        out.energy = energy;
        if (res <= ctl.tol) break;

        const double gmax = grad.max_abs();
        const double t_ref = (gmax > 0.0) ? 0.1 * std::max(u.max_abs(), 1.0) / gmax : 1.0;
        if (bb_sy > 0.0 && bb_yy > 0.0 && std::isfinite(bb_sy / bb_yy))
            step = bb_sy / bb_yy;
        else if (step <= 0.0)
            step = t_ref;
        else
            step *= 2.0;
        // An unusable secant can collapse or blow up the step; restart from the
        // gradient scale when that happens.
        if (!(step > 1e-14 * t_ref) || !(step < 1e14 * t_ref)) step = t_ref;

        u_prev = u;
        grad_prev = grad;

        ScalarField trial = u;
        double e_trial = 0.0, decrease = 0.0;
        bool accepted = false;
        const double e_ref = energy_ref();
        const double e_floor = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(energy) + 1.0);
        while (step >= 1e-16) {
            trial = u;
            for (std::int64_t k = 0; k < nn; ++k)
                if (interior[size_t(k)]) trial[k] = u[k] - step * grad[k];
            project(trial);
            decrease = 0.0;
            double move = 0.0;
            for (std::int64_t k = 0; k < nn; ++k) {
                decrease += grad[k] * (u[k] - trial[k]);
                move = std::max(move, std::abs(u[k] - trial[k]));
            }
            // Below this scale energy comparisons are float noise; accept the
            // (bounded) step so the active set can still settle.
            if (decrease <= e_floor) {
                if (move <= 0.1 * (1.0 + u.max_abs())) {
                    e_trial = energy_smoothed(trial, p, lam, eps, delta);
                    if (!std::isfinite(e_trial))
                        throw std::runtime_error(std::string(ctl.tag) + ": NaN energy in line search");
                    accepted = true;
                    break;
                }
                step *= 0.5;
                continue;
            }
            e_trial = energy_smoothed(trial, p, lam, eps, delta);
            if (!std::isfinite(e_trial))
                throw std::runtime_error(std::string(ctl.tag) + ": NaN energy in line search");
            if (e_trial <= e_ref - 1e-4 * decrease + e_floor) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (res <= 100.0 * ctl.tol) break;  // stagnated at numerical noise near optimum
            throw std::runtime_error(std::string(ctl.tag) + ": line search failure (step < 1e-16, eps=" +
                                     std::to_string(eps) + ", delta=" + std::to_string(delta) +
                                     ", residual=" + std::to_string(res) + ")");
        }

        u = std::move(trial);
        energy = e_trial;
        recent[size_t(recent_pos)] = energy;
        recent_pos = (recent_pos + 1) % kWindow;
        grad = energy_gradient(u, p, lam, eps, delta);
        bb_sy = bb_yy = 0.0;
        for (std::int64_t k = 0; k < nn; ++k) {
            const double sk = u[k] - u_prev[k];
            const double yk = grad[k] - grad_prev[k];
            bb_sy += sk * yk;
            bb_yy += yk * yk;
        }
        res = residual_norm(u, grad);
        out.iterations = it + 1;
        if (ctl.verbose && (it % 200 == 0 || res <= ctl.tol))
            std::fprintf(stderr, "[%s] iter %d energy %.12g grad %.3e\n", ctl.tag, it + 1, energy, res);
    }

    out.grad_norm = res;
    out.energy = energy;
    if (ctl.error_on_max_iters && res > ctl.tol)
        throw std::runtime_error(std::string(ctl.tag) + ": no convergence after " +
                                 std::to_string(ctl.max_iters) +
                                 " iterations, residual=" + std::to_string(res));
    return out;
}

MinimizerResult minimize(const BoundaryData& phi0, const ExponentField& p,
                         const CoefficientField& lam, const ContinuationSchedule& schedule,
                         const std::optional<ScalarField>& init, bool verbose) {
    const Grid& g = phi0.phi0.grid;
    if (!(g == p.p.grid) || !(g == lam.lambda.grid))
        throw std::invalid_argument("minimize: fields live on different grids");
    schedule.validate(g);

    MinimizerResult result;
    if (init.has_value()) {
        if (!(init->grid == g)) throw std::invalid_argument("minimize: init on wrong grid");
        result.u = *init;
    } else {
        // The lambda = 0 solution is feasible and over-estimates the positivity set.
        result.u = solve_dirichlet(phi0.phi0, p, schedule.inner_tol).v;
    }
    clamp_projection(result.u, phi0);

    const size_t nstages = std::max(schedule.eps_list.size(),
                                    std::max<size_t>(schedule.delta_list.size(), 1));
    for (size_t s = 0; s < nstages; ++s) {
        const double eps = schedule.eps_list[std::min(s, schedule.eps_list.size() - 1)];
        const double delta = schedule.delta_list.empty()
                                 ? 0.0
                                 : schedule.delta_list[std::min(s, schedule.delta_list.size() - 1)];
        DescentControl ctl;
        ctl.tol = schedule.inner_tol;
        ctl.max_iters = schedule.max_inner_iters;
        ctl.clamp = true;
        ctl.clamp_lo = 0.0;
        ctl.clamp_hi = phi0.sup_phi0;
        ctl.verbose = verbose;
        ctl.tag = "minimize";
        ctl.error_on_max_iters = false;
        const DescentResult dr = run_descent(result.u, p, lam, eps, delta, ctl);
        result.stage_info.push_back({eps, delta, dr.iterations, dr.energy, dr.grad_norm});
        result.energy_trace.push_back(energy_exact(result.u, p, lam, 0.0));
        result.grad_norm_final = dr.grad_norm;
        if (verbose)
            std::fprintf(stderr, "[minimize] stage %zu eps %.4g delta %.4g iters %d grad %.3e\n",
                         s + 1, eps, delta, dr.iterations, dr.grad_norm);
    }
    result.stages = int(nstages);
    if (result.grad_norm_final > schedule.inner_tol)
        throw std::runtime_error("minimize: final stage residual " +
                                 std::to_string(result.grad_norm_final) + " above inner_tol");
    result.u.check_finite("minimize");
    return result;
}

double subharmonicity_residual(const ScalarField& u, const ExponentField& p, double* scale_out) {
    // Tent pairing at node k is minus the Dirichlet-energy gradient entry.
    const ScalarField grad = dirichlet_gradient(u, p);
    const Grid& g = u.grid;
    double worst = 0.0, scale = 0.0;
    for (int ix = 0; ix < g.nodes(0); ++ix)
        for (int iy = 0; iy < g.nodes(1); ++iy) {
            if (g.is_boundary_node(ix, iy)) continue;
            const double pairing = -grad.at_node(ix, iy);
            worst = std::min(worst, pairing);
            scale = std::max(scale, std::abs(pairing));
        }
    if (scale_out) *scale_out = scale;
    return worst;
}

double pxharmonic_residual_on_positive_set(const ScalarField& u, const ExponentField& p,
                                           double tau) {
    const Grid& g = u.grid;
    const ScalarField grad = dirichlet_gradient(u, p);
    const double vol = g.cell_volume();
    auto cell_strictly_positive = [&](int cx, int cy) {
        if (g.dim == 1) return u.at_node(cx, 0) > tau && u.at_node(cx + 1, 0) > tau;
        return u.at_node(cx, cy) > tau && u.at_node(cx + 1, cy) > tau &&
               u.at_node(cx, cy + 1) > tau && u.at_node(cx + 1, cy + 1) > tau;
    };
    double res = 0.0;
    for (int ix = 1; ix < g.nodes(0) - 1; ++ix) {
        if (g.dim == 1) {
            if (cell_strictly_positive(ix - 1, 0) && cell_strictly_positive(ix, 0))
                res = std::max(res, std::abs(grad.at_node(ix, 0)) / vol);
            continue;
        }
        for (int iy = 1; iy < g.nodes(1) - 1; ++iy) {
            if (cell_strictly_positive(ix - 1, iy - 1) && cell_strictly_positive(ix, iy - 1) &&
                cell_strictly_positive(ix - 1, iy) && cell_strictly_positive(ix, iy))
                res = std::max(res, std::abs(grad.at_node(ix, iy)) / vol);
        }
    }
    return res;
}

}  // namespace pxfb
