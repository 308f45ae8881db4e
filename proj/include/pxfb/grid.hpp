// Uniform rectangular grids in 1D/2D with node- and cell-centered fields.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pxfb {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

// Uniform grid on a box [lo0,hi0] x [lo1,hi1] (second axis unused when dim==1).
// Nodes sit at lo + k*h, cells are the h-boxes between them. Node/cell arrays
// are row-major with the x index slowest: idx = ix*(count_y) + iy.
struct Grid {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 0.0};
    std::array<int, 2> n{1, 1};  // cells per axis; n[1]==1 placeholder in 1D
    std::array<double, 2> h{0.0, 0.0};

    static Grid make(int dim, const std::array<double, 2>& lo, const std::array<double, 2>& hi,
                     const std::array<int, 2>& ncells);

    int nodes(int axis) const { return (axis < dim) ? n[axis] + 1 : 1; }
    int cells(int axis) const { return (axis < dim) ? n[axis] : 1; }
    std::int64_t node_count() const { return std::int64_t(nodes(0)) * nodes(1); }
    std::int64_t cell_count() const { return std::int64_t(cells(0)) * cells(1); }

    std::int64_t node_index(int ix, int iy) const { return std::int64_t(ix) * nodes(1) + iy; }
    std::int64_t cell_index(int ix, int iy) const { return std::int64_t(ix) * cells(1) + iy; }

    Vec2 node_coord(int ix, int iy) const {
        return {lo[0] + ix * h[0], dim == 2 ? lo[1] + iy * h[1] : 0.0};
    }
    Vec2 cell_center(int ix, int iy) const {
        return {lo[0] + (ix + 0.5) * h[0], dim == 2 ? lo[1] + (iy + 0.5) * h[1] : 0.0};
    }

    bool is_boundary_node(int ix, int iy) const {
        if (ix == 0 || ix == n[0]) return true;
        if (dim == 2 && (iy == 0 || iy == n[1])) return true;
        return false;
    }

    double cell_volume() const { return dim == 2 ? h[0] * h[1] : h[0]; }
    double h_max() const { return dim == 2 ? std::max(h[0], h[1]) : h[0]; }
    double min_extent() const {
        double e = hi[0] - lo[0];
        if (dim == 2) e = std::min(e, hi[1] - lo[1]);
        return e;
    }
    double diameter() const {
        double dx = hi[0] - lo[0];
        double dy = dim == 2 ? hi[1] - lo[1] : 0.0;
        return std::sqrt(dx * dx + dy * dy);
    }

    // Euclidean distance from a point to the domain boundary.
    double boundary_distance(const Vec2& x) const {
        double d = std::min(x[0] - lo[0], hi[0] - x[0]);
        if (dim == 2) d = std::min(d, std::min(x[1] - lo[1], hi[1] - x[1]));
        return d;
    }

    bool contains(const Vec2& x) const {
        if (x[0] < lo[0] || x[0] > hi[0]) return false;
        if (dim == 2 && (x[1] < lo[1] || x[1] > hi[1])) return false;
        return true;
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && lo == o.lo && hi == o.hi && n == o.n;
    }
};

}  // namespace pxfb
