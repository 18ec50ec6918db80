#include "wgf/poisson.hpp"

#include <cmath>
#include <stdexcept>

namespace wgf {

std::vector<double> thomas_solve(const std::vector<double>& lower,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& upper,
                                 const std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> c(n), d(n), x(n);
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i] * c[i - 1];
        c[i] = (i < n - 1) ? upper[i] / m : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

Potential solve_dirichlet(const NodeField& f) {
    const int n = f.grid.n;
    const double h2 = f.grid.h * f.grid.h;
    for (double v : f.values)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_dirichlet: non-finite input");

    std::vector<double> lower(n, -1.0 / h2), diag(n, 2.0 / h2), upper(n, -1.0 / h2), rhs(n);
    diag[0] = 3.0 / h2;
    diag[n - 1] = 3.0 / h2;
    for (int i = 0; i < n; ++i) rhs[i] = f[i];

    Potential p;
    p.u = NodeField(f.grid, thomas_solve(lower, diag, upper, rhs));
    return p;
}

NodeField green_function(const Grid1D& grid, double y) {
    if (!(y > grid.a && y < grid.b))
        throw std::invalid_argument("green_function: y must lie inside (a,b)");
    NodeField g(grid);
    const double len = grid.b - grid.a;
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        g[i] = (x <= y) ? (x - grid.a) * (grid.b - y) / len
                        : (y - grid.a) * (grid.b - x) / len;
    }
    return g;
}

NodeField inverse_laplacian_gradient(const NodeField& f) {
    return derivative(solve_dirichlet(f).u);
}

}  // namespace wgf
