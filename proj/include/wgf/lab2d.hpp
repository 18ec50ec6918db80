// 2D rectangle laboratory for the elliptic inequality experiments:
// Dirichlet Poisson solves, Hessians, the xy log(x+y) family, and the
// interpolation / Calderon-Zygmund / Hoelder ratio sweeps.
//
// Matrix norms follow the summed-component convention: pointwise
// |D2u| = sum_ij |d_ij u|, and Lp norms stack the four entries.
// Sup norms are restricted to cells at least 3 cells from the boundary
// (discrete corner effects stay out of the measured quantities).
#pragma once

#include <random>
#include <vector>

#include "wgf/kernels.hpp"

namespace wgf {

struct Grid2D {
    double a1 = 0.0, b1 = 1.0, a2 = 0.0, b2 = 1.0;
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;

    double x(int i) const { return a1 + (i + 0.5) * hx; }
    double y(int j) const { return a2 + (j + 0.5) * hy; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
};

Grid2D build_grid2d(double a1, double b1, double a2, double b2, int nx, int ny);

struct ScalarField2D {
    Grid2D grid;
    std::vector<double> values;

    ScalarField2D() = default;
    explicit ScalarField2D(const Grid2D& g) : grid(g), values(g.cells(), 0.0) {}
    double& at(int i, int j) { return values[grid.idx(i, j)]; }
    double at(int i, int j) const { return values[grid.idx(i, j)]; }
};

// Conjugate gradients on the 5-point Dirichlet Laplacian (-Lap u = f),
// relative residual 1e-10. Throws on non-convergence.
ScalarField2D poisson2d_solve(const ScalarField2D& f,
                              kernels::Exec exec = kernels::default_exec());

struct Hessian2D {
    ScalarField2D uxx, uxy, uyx, uyy;
};

Hessian2D hessian2d(const ScalarField2D& u);

// u = xy log(x+y) with its closed-form Laplacian and mixed derivative.
struct CounterexampleFields {
    ScalarField2D u, lap, uxy;
};

CounterexampleFields counterexample_field(const Grid2D& grid);
// Point evaluations of the closed forms (u, Laplacian, mixed derivative).
void counterexample_point(double x, double y, double& u, double& lap, double& uxy);

// Interior sup of the summed-component Hessian (margin 3 cells).
double hessian_sup_l1(const ScalarField2D& u, kernels::Exec exec = kernels::default_exec());

// Entry-stacked interior L^p norm of the Hessian.
double hessian_lp(const Hessian2D& H, double p, int margin = 3);

double field_sup_interior(const ScalarField2D& f, int margin = 3);
double field_lp_interior(const ScalarField2D& f, double p, int margin = 3);

// Pairwise Hoelder seminorm on a subsampled lattice of at most 64x64 points.
double holder_seminorm_2d(const ScalarField2D& f, double alpha,
                          kernels::Exec exec = kernels::default_exec());

// |D2u|_sup / (|Lap u|_sup (1 + log+ of the Hoelder-to-sup quotient)).
double main_inequality_ratio(const ScalarField2D& u, double alpha);

// |f|_sup^(p + d/alpha) / (|f|_p^p |f|_C0alpha^(d/alpha)), d = 2.
double interpolation_ratio(const ScalarField2D& f, double p, double alpha);

struct CzRow {
    int sample = 0;
    double p = 0.0;
    double ratio = 0.0;  // |D2u|_p / |Lap u|_p on the interior
};

struct CzSweep {
    std::vector<CzRow> rows;
    double C = 0.0;          // max over rows of ratio / p
    double c_min = 0.0;      // per-sample C spread
    double c_max = 0.0;
    bool pass = false;       // spread within +-25% of the median
};

CzSweep cz_ratio_sweep(int sample_count, const std::vector<double>& p_list,
                       const Grid2D& grid, unsigned long seed);

struct HolderRegularityRow {
    int sample = 0;
    double lhs = 0.0;  // |D2u|_C0alpha (entry-summed)
    double rhs = 0.0;  // |rho|_C0alpha
    double C = 0.0;
};

struct HolderRegularityReport {
    std::vector<HolderRegularityRow> rows;
    double c_min = 0.0, c_max = 0.0;
    bool pass = false;  // max/min <= 4 over the family
};

HolderRegularityReport holder_regularity_check(int sample_count, double alpha,
                                               const Grid2D& grid, unsigned long seed);

struct CounterexampleRow {
    double delta = 0.0;
    double naive_ratio = 0.0;
    double thm_ratio = 0.0;
    double sup_d2 = 0.0;
    double sup_lap = 0.0;
    double holder_lap = 0.0;
};

// Family sweep over domains (delta,1)^2 at fixed resolution n x n.
std::vector<CounterexampleRow> counterexample_sweep(const std::vector<double>& deltas,
                                                    int n, double alpha);

// Band-limited random sample sum a_kl sin(k pi x) sin(l pi y), k,l <= 6.
ScalarField2D random_band_limited(const Grid2D& g, std::mt19937_64& rng);

}  // namespace wgf
