#include "wgf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wgf::kernels {

int thread_count() {
    static const int n = [] {
        if (const char* env = std::getenv("WGF_THREADS")) {
            const int k = std::atoi(env);
            if (k > 0) return k;
        }
#ifdef _OPENMP
        return omp_get_max_threads();
#else
        return 1;
#endif
    }();
    return n;
}

Exec default_exec() {
#ifdef _OPENMP
    return Exec::Parallel;
#else
    return Exec::Serial;
#endif
}

namespace {
constexpr int kBlocks = 1024;

inline int block_begin(int b, std::size_t n) {
    return static_cast<int>(b * n / kBlocks);
}
}  // namespace

void apply_dirichlet_laplacian_2d(int nx, int ny, double hx, double hy,
                                  const std::vector<double>& u,
                                  std::vector<double>& out, Exec exec) {
    const double ix2 = 1.0 / (hx * hx);
    const double iy2 = 1.0 / (hy * hy);
    auto row = [&](int j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t c = static_cast<std::size_t>(j) * nx + i;
            const double uc = u[c];
            // ghost value = -uc across each wall
            const double ul = (i > 0) ? u[c - 1] : -uc;
            const double ur = (i < nx - 1) ? u[c + 1] : -uc;
            const double ud = (j > 0) ? u[c - nx] : -uc;
            const double uu = (j < ny - 1) ? u[c + nx] : -uc;
            out[c] = (2.0 * uc - ul - ur) * ix2 + (2.0 * uc - ud - uu) * iy2;
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (int j = 0; j < ny; ++j) row(j);
    } else {
        for (int j = 0; j < ny; ++j) row(j);
    }
}

double dot_blocked(const std::vector<double>& x, const std::vector<double>& y, Exec exec) {
    const std::size_t n = x.size();
    double partial[kBlocks];
    auto block = [&](int b) {
        double s = 0.0;
        const int lo = block_begin(b, n), hi = block_begin(b + 1, n);
        for (int i = lo; i < hi; ++i) s += x[i] * y[i];
        partial[b] = s;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (int b = 0; b < kBlocks; ++b) block(b);
    } else {
        for (int b = 0; b < kBlocks; ++b) block(b);
    }
    double s = 0.0;
    for (int b = 0; b < kBlocks; ++b) s += partial[b];
    return s;
}

double sum_blocked(const std::vector<double>& x, Exec exec) {
    const std::size_t n = x.size();
    double partial[kBlocks];
    auto block = [&](int b) {
        double s = 0.0;
        const int lo = block_begin(b, n), hi = block_begin(b + 1, n);
        for (int i = lo; i < hi; ++i) s += x[i];
        partial[b] = s;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (int b = 0; b < kBlocks; ++b) block(b);
    } else {
        for (int b = 0; b < kBlocks; ++b) block(b);
    }
    double s = 0.0;
    for (int b = 0; b < kBlocks; ++b) s += partial[b];
    return s;
}

double pairwise_holder_max(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& vals, double alpha, Exec exec) {
    const int n = static_cast<int>(vals.size());
    double best = 0.0;
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8) reduction(max : best) num_threads(thread_count())
        for (int i = 0; i < n; ++i) {
            double local = 0.0;
            for (int j = i + 1; j < n; ++j) {
                const double dx = xs[i] - xs[j];
                const double dy = ys[i] - ys[j];
                const double d = std::sqrt(dx * dx + dy * dy);
                if (d <= 0.0) continue;
                local = std::max(local, std::fabs(vals[i] - vals[j]) / std::pow(d, alpha));
            }
            best = std::max(best, local);
        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double dx = xs[i] - xs[j];
                const double dy = ys[i] - ys[j];
                const double d = std::sqrt(dx * dx + dy * dy);
                if (d <= 0.0) continue;
                best = std::max(best, std::fabs(vals[i] - vals[j]) / std::pow(d, alpha));
            }
    }
    return best;
}

namespace {
inline double hess_l1_at(int nx, double hx, double hy, const std::vector<double>& u,
                         int i, int j) {
    const std::size_t c = static_cast<std::size_t>(j) * nx + i;
    const double ix2 = 1.0 / (hx * hx);
    const double iy2 = 1.0 / (hy * hy);
    const double uxx = (u[c - 1] - 2.0 * u[c] + u[c + 1]) * ix2;
    const double uyy = (u[c - nx] - 2.0 * u[c] + u[c + nx]) * iy2;
    const double uxy = (u[c + nx + 1] - u[c + nx - 1] - u[c - nx + 1] + u[c - nx - 1]) /
                       (4.0 * hx * hy);
    return std::fabs(uxx) + std::fabs(uyy) + 2.0 * std::fabs(uxy);
}
}  // namespace

double hessian_l1_sup(int nx, int ny, double hx, double hy,
                      const std::vector<double>& u, int margin, Exec exec) {
    const int m = std::max(margin, 1);
    double best = 0.0;
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(max : best) num_threads(thread_count())
        for (int j = m; j < ny - m; ++j) {
            double local = 0.0;
            for (int i = m; i < nx - m; ++i)
                local = std::max(local, hess_l1_at(nx, hx, hy, u, i, j));
            best = std::max(best, local);
        }
    } else {
        for (int j = m; j < ny - m; ++j)
            for (int i = m; i < nx - m; ++i)
                best = std::max(best, hess_l1_at(nx, hx, hy, u, i, j));
    }
    return best;
}

namespace {
// log sum_j exp((g_j - c_ij)/eps + logw_j) over one row of the cost matrix
inline double lse_row(const std::vector<double>& cost, const std::vector<double>& g,
                      const std::vector<double>& logw, double eps, int nb,
                      std::size_t row_off) {
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < nb; ++j)
        m = std::max(m, (g[j] - cost[row_off + j]) / eps + logw[j]);
    double s = 0.0;
    for (int j = 0; j < nb; ++j)
        s += std::exp((g[j] - cost[row_off + j]) / eps + logw[j] - m);
    return m + std::log(s);
}

inline double lse_col(const std::vector<double>& cost, const std::vector<double>& f,
                      const std::vector<double>& logw, double eps, int na, int nb, int j) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < na; ++i)
        m = std::max(m, (f[i] - cost[static_cast<std::size_t>(i) * nb + j]) / eps + logw[i]);
    double s = 0.0;
    for (int i = 0; i < na; ++i)
        s += std::exp((f[i] - cost[static_cast<std::size_t>(i) * nb + j]) / eps + logw[i] - m);
    return m + std::log(s);
}
}  // namespace

void sinkhorn_row_update(const std::vector<double>& cost, const std::vector<double>& logb,
                         const std::vector<double>& g, double eps, int na, int nb,
                         std::vector<double>& f, Exec exec) {
    auto upd = [&](int i) {
        const std::size_t off = static_cast<std::size_t>(i) * nb;
        f[i] = -eps * lse_row(cost, g, logb, eps, nb, off);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (int i = 0; i < na; ++i) upd(i);
    } else {
        for (int i = 0; i < na; ++i) upd(i);
    }
}

void sinkhorn_col_update(const std::vector<double>& cost, const std::vector<double>& loga,
                         const std::vector<double>& f, double eps, int na, int nb,
                         std::vector<double>& g, Exec exec) {
    auto upd = [&](int j) { g[j] = -eps * lse_col(cost, f, loga, eps, na, nb, j); };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (int j = 0; j < nb; ++j) upd(j);
    } else {
        for (int j = 0; j < nb; ++j) upd(j);
    }
}

double sinkhorn_marginal_error(const std::vector<double>& cost, const std::vector<double>& loga,
                               const std::vector<double>& logb, const std::vector<double>& f,
                               const std::vector<double>& g, double eps, int na, int nb,
                               Exec exec) {
    // plan pi_ij = exp((loga_i + f_i + logb_j + g_j - c_ij)/eps scaled); see below
    double worst = 0.0;
    auto row_err = [&](int i) {
        const std::size_t off = static_cast<std::size_t>(i) * nb;
        double s = 0.0;
        for (int j = 0; j < nb; ++j)
            s += std::exp((f[i] + g[j] - cost[off + j]) / eps + logb[j]);
        return std::fabs(s * std::exp(loga[i]) - std::exp(loga[i]));
    };
    auto col_err = [&](int j) {
        double s = 0.0;
        for (int i = 0; i < na; ++i)
            s += std::exp((f[i] + g[j] - cost[static_cast<std::size_t>(i) * nb + j]) / eps +
                          loga[i]);
        return std::fabs(s * std::exp(logb[j]) - std::exp(logb[j]));
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(max : worst) num_threads(thread_count())
        for (int i = 0; i < na; ++i) worst = std::max(worst, row_err(i));
#pragma omp parallel for schedule(static) reduction(max : worst) num_threads(thread_count())
        for (int j = 0; j < nb; ++j) worst = std::max(worst, col_err(j));
    } else {
        for (int i = 0; i < na; ++i) worst = std::max(worst, row_err(i));
        for (int j = 0; j < nb; ++j) worst = std::max(worst, col_err(j));
    }
    return worst;
}

double sinkhorn_cost(const std::vector<double>& cost, const std::vector<double>& loga,
                     const std::vector<double>& logb, const std::vector<double>& f,
                     const std::vector<double>& g, double eps, int na, int nb, Exec exec) {
    std::vector<double> rows(na);
    auto row_cost = [&](int i) {
        const std::size_t off = static_cast<std::size_t>(i) * nb;
        double s = 0.0;
        for (int j = 0; j < nb; ++j)
            s += cost[off + j] *
                 std::exp((f[i] + g[j] - cost[off + j]) / eps + loga[i] + logb[j]);
        rows[i] = s;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (int i = 0; i < na; ++i) row_cost(i);
    } else {
        for (int i = 0; i < na; ++i) row_cost(i);
    }
    return sum_blocked(rows, Exec::Serial);
}

void sinkhorn_row_update(const std::vector<double>& cost, const std::vector<double>& logb,
                         const std::vector<double>& g, double eps, int na, int nb,
                         std::vector<double>& f) {
    sinkhorn_row_update(cost, logb, g, eps, na, nb, f, default_exec());
}

void sinkhorn_col_update(const std::vector<double>& cost, const std::vector<double>& loga,
                         const std::vector<double>& f, double eps, int na, int nb,
                         std::vector<double>& g) {
    sinkhorn_col_update(cost, loga, f, eps, na, nb, g, default_exec());
}

}  // namespace wgf::kernels
