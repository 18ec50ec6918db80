// Data-parallel inner loops, each with an OpenMP path and a serial
// reference path. The serial path is the oracle the tests compare
// against; the benchmark tool times the two side by side.
//
// Reductions over sums use a fixed block partition accumulated in block
// order, so results do not depend on the thread count.
#pragma once

#include <cstddef>
#include <vector>

namespace wgf::kernels {

enum class Exec { Serial, Parallel };

// Worker count: WGF_THREADS env var when set, otherwise the OpenMP
// default (1 without OpenMP).
int thread_count();

Exec default_exec();

// out = (-Laplacian) u on an nx*ny cell-centered grid with homogeneous
// Dirichlet data folded into the boundary rows (ghost = -interior).
void apply_dirichlet_laplacian_2d(int nx, int ny, double hx, double hy,
                                  const std::vector<double>& u,
                                  std::vector<double>& out, Exec exec);

double dot_blocked(const std::vector<double>& x, const std::vector<double>& y, Exec exec);

double sum_blocked(const std::vector<double>& x, Exec exec);

// max over unordered pairs of |v_i - v_j| / dist((x_i,y_i),(x_j,y_j))^alpha.
double pairwise_holder_max(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& vals, double alpha, Exec exec);

// sup over cells with indices in [margin, n-margin) of
// |uxx| + |uxy| + |uyx| + |uyy|, stencils evaluated on the fly.
double hessian_l1_sup(int nx, int ny, double hx, double hy,
                      const std::vector<double>& u, int margin, Exec exec);

// Log-domain Sinkhorn sweeps for the plan exp((f_i + g_j - c_ij)/eps).
void sinkhorn_row_update(const std::vector<double>& cost, const std::vector<double>& logb,
                         const std::vector<double>& g, double eps, int na, int nb,
                         std::vector<double>& f, Exec exec);
void sinkhorn_col_update(const std::vector<double>& cost, const std::vector<double>& loga,
                         const std::vector<double>& f, double eps, int na, int nb,
                         std::vector<double>& g, Exec exec);
double sinkhorn_marginal_error(const std::vector<double>& cost, const std::vector<double>& loga,
                               const std::vector<double>& logb, const std::vector<double>& f,
                               const std::vector<double>& g, double eps, int na, int nb,
                               Exec exec = default_exec());
double sinkhorn_cost(const std::vector<double>& cost, const std::vector<double>& loga,
                     const std::vector<double>& logb, const std::vector<double>& f,
                     const std::vector<double>& g, double eps, int na, int nb,
                     Exec exec = default_exec());

// Convenience overloads running on the default executor.
void sinkhorn_row_update(const std::vector<double>& cost, const std::vector<double>& logb,
                         const std::vector<double>& g, double eps, int na, int nb,
                         std::vector<double>& f);
void sinkhorn_col_update(const std::vector<double>& cost, const std::vector<double>& loga,
                         const std::vector<double>& f, double eps, int na, int nb,
                         std::vector<double>& g);

}  // namespace wgf::kernels
