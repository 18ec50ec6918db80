// Dirichlet solver for -u'' = f on (a,b) and derived gradient fields.
#pragma once

#include "wgf/grid.hpp"

namespace wgf {

// Solution of -u'' = f with u(a) = u(b) = 0, stored at cell centers.
// The homogeneous boundary values are folded into the first and last
// stencil rows (ghost value u_{-1} = -u_0), which keeps the discrete
// operator symmetric.
struct Potential {
    NodeField u;
    double boundary_left = 0.0;
    double boundary_right = 0.0;
};

// Tridiagonal solve (Thomas elimination). diag/lower/upper are the matrix
// bands; lower[0] and upper[n-1] are ignored. Overwrites nothing.
std::vector<double> thomas_solve(const std::vector<double>& lower,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& upper,
                                 const std::vector<double>& rhs);

// f may change sign (diagnostics solve with density differences).
Potential solve_dirichlet(const NodeField& f);

// Exact Dirichlet Green's function G(x,y) sampled at cell centers.
NodeField green_function(const Grid1D& grid, double y);

// derivative(solve_dirichlet(f)).
NodeField inverse_laplacian_gradient(const NodeField& f);

}  // namespace wgf
