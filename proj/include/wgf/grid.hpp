// 1D cell-centered uniform grid with second-order discrete calculus.
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace wgf {

struct Grid1D {
    double a = 0.0;   // left endpoint
    double b = 1.0;   // right endpoint
    int n = 0;        // cell count
    double h = 0.0;   // cell width

    double x(int i) const { return a + (i + 0.5) * h; }
    bool same_as(const Grid1D& o) const {
        return a == o.a && b == o.b && n == o.n;
    }
};

// Rejects degenerate domains (b <= a) and grids too coarse for the
// one-sided boundary stencils (n < 8).
Grid1D build_grid(double a, double b, int n);

struct NodeField {
    Grid1D grid;
    std::vector<double> values;

    NodeField() = default;
    explicit NodeField(const Grid1D& g) : grid(g), values(g.n, 0.0) {}
    NodeField(const Grid1D& g, std::vector<double> v);

    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
    int size() const { return grid.n; }
};

NodeField field_from(const Grid1D& g, const std::function<double(double)>& f);

// First derivative: central differences on interior cells, one-sided
// second-order stencils at the two boundary cells.
NodeField derivative(const NodeField& f);

// Second derivative: three-point stencil interior, second-order
// one-sided four-point stencils at the boundary cells.
NodeField second_derivative(const NodeField& f);

// Midpoint rule, exact for cellwise-linear integrands.
double integrate(const NodeField& f);

double field_min(const NodeField& f);
double field_max(const NodeField& f);
double field_sup_abs(const NodeField& f);

// Lp(Omega) norm of the field by midpoint quadrature.
double lp_norm(const NodeField& f, double p);

// Second-order extrapolation of a cell-centered field to the domain
// endpoints (quadratic through the three nearest centers).
double boundary_value_left(const NodeField& f);
double boundary_value_right(const NodeField& f);

// Linear interpolation at x, constant beyond the outermost centers.
double interp_linear(const NodeField& f, double x);

}  // namespace wgf
