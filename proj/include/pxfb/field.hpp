// Scalar fields on grid nodes or cells, the exponent/coefficient fields of the
// variable-exponent problem, and the discrete gradient operator.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "pxfb/grid.hpp"

namespace pxfb {

enum class Location { Node, Cell };

struct ScalarField {
    Grid grid;
    Location location = Location::Node;
    std::vector<double> values;  // row-major, x index slowest

    ScalarField() = default;
    ScalarField(const Grid& g, Location loc, double fill = 0.0);

    std::int64_t size() const { return std::int64_t(values.size()); }
    double& operator[](std::int64_t i) { return values[size_t(i)]; }
    double operator[](std::int64_t i) const { return values[size_t(i)]; }

    double& at_node(int ix, int iy) { return values[size_t(grid.node_index(ix, iy))]; }
    double at_node(int ix, int iy) const { return values[size_t(grid.node_index(ix, iy))]; }
    double& at_cell(int ix, int iy) { return values[size_t(grid.cell_index(ix, iy))]; }
    double at_cell(int ix, int iy) const { return values[size_t(grid.cell_index(ix, iy))]; }

    double max_abs() const;
    double max() const;
    double min() const;
    void check_finite(const std::string& what) const;
};

// Evaluates f at node coordinates or cell centers. Non-finite samples are an error.
ScalarField sample_field(const Grid& g, Location loc, const std::function<double(Vec2)>& f);

// Per-cell gradient of a node field. 1D: forward difference. 2D: mean of the two
// edge differences along each axis. Exact on affine fields.
std::vector<Vec2> cell_gradient(const ScalarField& u);

// Per-cell mean of the corner node values.
ScalarField cell_average(const ScalarField& u);

// Multilinear interpolation of a node field at a point inside the domain.
double interp_node(const ScalarField& u, const Vec2& x);

// Multilinear interpolation on the cell-center lattice, clamped at its hull.
double interp_cell(const ScalarField& c, const Vec2& x);
Vec2 interp_cell_vec(const Grid& g, const std::vector<Vec2>& cellvals, const Vec2& x);

// Variable exponent p(x), cell-centered. Bounds and the Lipschitz estimate are
// recomputed from the values; inputs violating 1 < p < inf are rejected.
struct ExponentField {
    ScalarField p;
    double p_min = 0.0;
    double p_max = 0.0;
    double lipschitz = 0.0;  // max finite-difference slope between adjacent cells

    explicit ExponentField(ScalarField cellfield);
};

// Volume-penalty coefficient lambda(x), cell-centered, nonnegative and finite.
// The Bernoulli problem wants lambda bounded away from zero; lambda == 0 is
// accepted and simply produces no free boundary (pure Dirichlet energy).
struct CoefficientField {
    ScalarField lambda;
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    explicit CoefficientField(ScalarField cellfield);
};

// Dirichlet data phi0 >= 0 on the boundary nodes. Interior entries are zeroed.
struct BoundaryData {
    ScalarField phi0;
    double sup_phi0 = 0.0;

    explicit BoundaryData(ScalarField nodefield);
};

// lambda*(x) = (p(x) lambda(x) / (p(x)-1))^(1/p(x)), cell-centered.
ScalarField lambda_star(const ExponentField& p, const CoefficientField& lam);

}  // namespace pxfb
