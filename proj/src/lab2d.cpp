#include "wgf/lab2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wgf {

using kernels::Exec;

Grid2D build_grid2d(double a1, double b1, double a2, double b2, int nx, int ny) {
    if (!(b1 > a1 && b2 > a2)) throw std::invalid_argument("build_grid2d: degenerate rectangle");
    if (nx < 16 || ny < 16) throw std::invalid_argument("build_grid2d: need nx, ny >= 16");
    Grid2D g;
    g.a1 = a1;
    g.b1 = b1;
    g.a2 = a2;
    g.b2 = b2;
    g.nx = nx;
    g.ny = ny;
    g.hx = (b1 - a1) / nx;
    g.hy = (b2 - a2) / ny;
    return g;
}

ScalarField2D poisson2d_solve(const ScalarField2D& f, Exec exec) {
    const Grid2D& g = f.grid;
    const std::size_t n = g.cells();
    for (double v : f.values)
        if (!std::isfinite(v)) throw std::invalid_argument("poisson2d_solve: non-finite input");

    ScalarField2D u(g);
    std::vector<double> r = f.values;
    std::vector<double> p = r;
    std::vector<double> Ap(n);

    const double bnorm = std::sqrt(kernels::dot_blocked(r, r, exec));
    if (bnorm == 0.0) return u;
    const double tol = 1e-10 * bnorm;

    double rr = bnorm * bnorm;
    const int max_iter = 40 * (g.nx + g.ny);
    for (int it = 0; it < max_iter; ++it) {
        kernels::apply_dirichlet_laplacian_2d(g.nx, g.ny, g.hx, g.hy, p, Ap, exec);
        const double pAp = kernels::dot_blocked(p, Ap, exec);
        const double alpha = rr / pAp;
        for (std::size_t i = 0; i < n; ++i) {
            u.values[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rr_new = kernels::dot_blocked(r, r, exec);
        if (std::sqrt(rr_new) <= tol) return u;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    throw std::runtime_error("poisson2d_solve: conjugate gradients did not converge");
}

Hessian2D hessian2d(const ScalarField2D& u) {
    const Grid2D& g = u.grid;
    Hessian2D H{ScalarField2D(g), ScalarField2D(g), ScalarField2D(g), ScalarField2D(g)};

    auto dxx = [&](int i, int j) {
        if (i == 0)
            return (2.0 * u.at(0, j) - 5.0 * u.at(1, j) + 4.0 * u.at(2, j) - u.at(3, j)) /
                   (g.hx * g.hx);
        if (i == g.nx - 1)
            return (2.0 * u.at(i, j) - 5.0 * u.at(i - 1, j) + 4.0 * u.at(i - 2, j) -
                    u.at(i - 3, j)) /
                   (g.hx * g.hx);
        return (u.at(i - 1, j) - 2.0 * u.at(i, j) + u.at(i + 1, j)) / (g.hx * g.hx);
    };
    auto dyy = [&](int i, int j) {
        if (j == 0)
            return (2.0 * u.at(i, 0) - 5.0 * u.at(i, 1) + 4.0 * u.at(i, 2) - u.at(i, 3)) /
                   (g.hy * g.hy);
        if (j == g.ny - 1)
            return (2.0 * u.at(i, j) - 5.0 * u.at(i, j - 1) + 4.0 * u.at(i, j - 2) -
                    u.at(i, j - 3)) /
                   (g.hy * g.hy);
        return (u.at(i, j - 1) - 2.0 * u.at(i, j) + u.at(i, j + 1)) / (g.hy * g.hy);
    };

    // first derivative in x with one-sided boundary stencils
    ScalarField2D ux(g), uy(g);
    auto dx_at = [&](int i, int j) {
        if (i == 0) return (-3.0 * u.at(0, j) + 4.0 * u.at(1, j) - u.at(2, j)) / (2.0 * g.hx);
        if (i == g.nx - 1)
            return (3.0 * u.at(i, j) - 4.0 * u.at(i - 1, j) + u.at(i - 2, j)) / (2.0 * g.hx);
        return (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * g.hx);
    };
    auto dy_at = [&](int i, int j) {
        if (j == 0) return (-3.0 * u.at(i, 0) + 4.0 * u.at(i, 1) - u.at(i, 2)) / (2.0 * g.hy);
        if (j == g.ny - 1)
            return (3.0 * u.at(i, j) - 4.0 * u.at(i, j - 1) + u.at(i, j - 2)) / (2.0 * g.hy);
        return (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * g.hy);
    };

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            ux.at(i, j) = dx_at(i, j);
            uy.at(i, j) = dy_at(i, j);
            H.uxx.at(i, j) = dxx(i, j);
            H.uyy.at(i, j) = dyy(i, j);
        }

    auto dy_of = [&](const ScalarField2D& w, int i, int j) {
        if (j == 0) return (-3.0 * w.at(i, 0) + 4.0 * w.at(i, 1) - w.at(i, 2)) / (2.0 * g.hy);
        if (j == g.ny - 1)
            return (3.0 * w.at(i, j) - 4.0 * w.at(i, j - 1) + w.at(i, j - 2)) / (2.0 * g.hy);
        return (w.at(i, j + 1) - w.at(i, j - 1)) / (2.0 * g.hy);
    };
    auto dx_of = [&](const ScalarField2D& w, int i, int j) {
        if (i == 0) return (-3.0 * w.at(0, j) + 4.0 * w.at(1, j) - w.at(2, j)) / (2.0 * g.hx);
        if (i == g.nx - 1)
            return (3.0 * w.at(i, j) - 4.0 * w.at(i - 1, j) + w.at(i - 2, j)) / (2.0 * g.hx);
        return (w.at(i + 1, j) - w.at(i - 1, j)) / (2.0 * g.hx);
    };

    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            H.uxy.at(i, j) = dy_of(ux, i, j);
            H.uyx.at(i, j) = dx_of(uy, i, j);
        }
    return H;
}

void counterexample_point(double x, double y, double& u, double& lap, double& uxy) {
    const double s = x + y;
    u = x * y * std::log(s);
    lap = 2.0 - 2.0 * x * y / (s * s);
    uxy = std::log(s) + 1.0 - x * y / (s * s);
}

CounterexampleFields counterexample_field(const Grid2D& grid) {
    if (!(grid.a1 > 0.0 && grid.a2 > 0.0))
        throw std::invalid_argument("counterexample_field: needs delta > 0 (corner excluded)");
    CounterexampleFields out{ScalarField2D(grid), ScalarField2D(grid), ScalarField2D(grid)};
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            double u, lap, uxy;
            counterexample_point(grid.x(i), grid.y(j), u, lap, uxy);
            out.u.at(i, j) = u;
            out.lap.at(i, j) = lap;
            out.uxy.at(i, j) = uxy;
        }
    return out;
}

double hessian_sup_l1(const ScalarField2D& u, Exec exec) {
    return kernels::hessian_l1_sup(u.grid.nx, u.grid.ny, u.grid.hx, u.grid.hy, u.values, 3,
                                   exec);
}

double hessian_lp(const Hessian2D& H, double p, int margin) {
    const Grid2D& g = H.uxx.grid;
    double s = 0.0;
    for (int j = margin; j < g.ny - margin; ++j)
        for (int i = margin; i < g.nx - margin; ++i)
            s += std::pow(std::fabs(H.uxx.at(i, j)), p) + std::pow(std::fabs(H.uxy.at(i, j)), p) +
                 std::pow(std::fabs(H.uyx.at(i, j)), p) + std::pow(std::fabs(H.uyy.at(i, j)), p);
    return std::pow(s * g.hx * g.hy, 1.0 / p);
}

double field_sup_interior(const ScalarField2D& f, int margin) {
    const Grid2D& g = f.grid;
    double m = 0.0;
    for (int j = margin; j < g.ny - margin; ++j)
        for (int i = margin; i < g.nx - margin; ++i)
            m = std::max(m, std::fabs(f.at(i, j)));
    return m;
}

double field_lp_interior(const ScalarField2D& f, double p, int margin) {
    const Grid2D& g = f.grid;
    double s = 0.0;
    for (int j = margin; j < g.ny - margin; ++j)
        for (int i = margin; i < g.nx - margin; ++i)
            s += std::pow(std::fabs(f.at(i, j)), p);
    return std::pow(s * g.hx * g.hy, 1.0 / p);
}

double holder_seminorm_2d(const ScalarField2D& f, double alpha, Exec exec) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("holder_seminorm_2d: need 0 < alpha < 1");
    const Grid2D& g = f.grid;
    const int sx = std::max(1, g.nx / 64);
    const int sy = std::max(1, g.ny / 64);
    std::vector<double> xs, ys, vals;
    for (int j = 0; j < g.ny; j += sy)
        for (int i = 0; i < g.nx; i += sx) {
            xs.push_back(g.x(i));
            ys.push_back(g.y(j));
            vals.push_back(f.at(i, j));
        }
    return kernels::pairwise_holder_max(xs, ys, vals, alpha, exec);
}

double main_inequality_ratio(const ScalarField2D& u, double alpha) {
    const Grid2D& g = u.grid;
    const Hessian2D H = hessian2d(u);
    ScalarField2D lap(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            lap.at(i, j) = H.uxx.at(i, j) + H.uyy.at(i, j);

    const double sup_lap = field_sup_interior(lap);
    if (sup_lap <= 0.0)
        throw std::invalid_argument("main_inequality_ratio: Laplacian vanishes");

    ScalarField2D d2(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            d2.at(i, j) = std::fabs(H.uxx.at(i, j)) + std::fabs(H.uxy.at(i, j)) +
                          std::fabs(H.uyx.at(i, j)) + std::fabs(H.uyy.at(i, j));
    const double sup_d2 = field_sup_interior(d2);

    const double holder = holder_seminorm_2d(lap, alpha) + sup_lap;  // full C^{0,alpha} norm
    const double quotient = std::max(1.0, holder / sup_lap);
    return sup_d2 / (sup_lap * (1.0 + std::log(quotient)));
}

double interpolation_ratio(const ScalarField2D& f, double p, double alpha) {
    const Grid2D& g = f.grid;
    double sup = 0.0, slp = 0.0;
    for (double v : f.values) {
        sup = std::max(sup, std::fabs(v));
        slp += std::pow(std::fabs(v), p);
    }
    if (sup <= 0.0) throw std::invalid_argument("interpolation_ratio: zero field");
    slp *= g.hx * g.hy;  // |f|_p^p
    const double c0a = holder_seminorm_2d(f, alpha) + sup;
    const double da = 2.0 / alpha;
    return std::pow(sup, p + da) / (slp * std::pow(c0a, da));
}

ScalarField2D random_band_limited(const Grid2D& g, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double pi = std::acos(-1.0);
    double a[6][6];
    for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l)
            a[k][l] = gauss(rng) / ((k + 1) + (l + 1));
    ScalarField2D f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double xh = (g.x(i) - g.a1) / (g.b1 - g.a1);
            const double yh = (g.y(j) - g.a2) / (g.b2 - g.a2);
            double s = 0.0;
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l)
                    s += a[k][l] * std::sin((k + 1) * pi * xh) * std::sin((l + 1) * pi * yh);
            f.at(i, j) = s;
        }
    return f;
}

CzSweep cz_ratio_sweep(int sample_count, const std::vector<double>& p_list,
                       const Grid2D& grid, unsigned long seed) {
    for (double p : p_list)
        if (!(p >= 2.0 && p <= 32.0))
            throw std::invalid_argument("cz_ratio_sweep: p_list must lie in [2, 32]");
    CzSweep sweep;
    std::mt19937_64 rng(seed);
    std::vector<double> per_sample_c;
    for (int s = 0; s < sample_count; ++s) {
        const ScalarField2D f = random_band_limited(grid, rng);
        const ScalarField2D u = poisson2d_solve(f);
        const Hessian2D H = hessian2d(u);
        // lap u = -f for the solved problem; use the numerical trace for
        // a fair two-sided comparison
        ScalarField2D lap(grid);
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                lap.at(i, j) = H.uxx.at(i, j) + H.uyy.at(i, j);

        double cs = 0.0;
        for (double p : p_list) {
            CzRow row;
            row.sample = s;
            row.p = p;
            row.ratio = hessian_lp(H, p) / field_lp_interior(lap, p);
            sweep.rows.push_back(row);
            cs = std::max(cs, row.ratio / p);
        }
        per_sample_c.push_back(cs);
    }
    sweep.C = *std::max_element(per_sample_c.begin(), per_sample_c.end());
    sweep.c_min = *std::min_element(per_sample_c.begin(), per_sample_c.end());
    sweep.c_max = sweep.C;
    std::vector<double> sorted = per_sample_c;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[sorted.size() / 2];
    sweep.pass = sweep.c_max <= 1.25 * med && sweep.c_min >= 0.75 * med;
    return sweep;
}

HolderRegularityReport holder_regularity_check(int sample_count, double alpha,
                                               const Grid2D& grid, unsigned long seed) {
    HolderRegularityReport rep;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < sample_count; ++s) {
        const ScalarField2D rho = random_band_limited(grid, rng);
        const ScalarField2D u = poisson2d_solve(rho);
        const Hessian2D H = hessian2d(u);
        double lhs = 0.0;
        for (const ScalarField2D* comp : {&H.uxx, &H.uxy, &H.uyx, &H.uyy})
            lhs += holder_seminorm_2d(*comp, alpha) + field_sup_interior(*comp);
        const double rhs = holder_seminorm_2d(rho, alpha) + field_sup_interior(rho);
        HolderRegularityRow row;
        row.sample = s;
        row.lhs = lhs;
        row.rhs = rhs;
        row.C = lhs / rhs;
        rep.rows.push_back(row);
    }
    rep.c_min = std::numeric_limits<double>::infinity();
    rep.c_max = 0.0;
    for (const auto& r : rep.rows) {
        rep.c_min = std::min(rep.c_min, r.C);
        rep.c_max = std::max(rep.c_max, r.C);
    }
    rep.pass = rep.c_max <= 4.0 * rep.c_min;
    return rep;
}

std::vector<CounterexampleRow> counterexample_sweep(const std::vector<double>& deltas,
                                                    int n, double alpha) {
    std::vector<CounterexampleRow> rows;
    for (double delta : deltas) {
        const Grid2D g = build_grid2d(delta, 1.0, delta, 1.0, n, n);
        const CounterexampleFields fields = counterexample_field(g);

        CounterexampleRow row;
        row.delta = delta;
        row.sup_d2 = hessian_sup_l1(fields.u);
        row.sup_lap = field_sup_interior(fields.lap);
        row.holder_lap = holder_seminorm_2d(fields.lap, alpha) + row.sup_lap;
        row.naive_ratio = row.sup_d2 / row.sup_lap;
        const double quotient = std::max(1.0, row.holder_lap / row.sup_lap);
        row.thm_ratio = row.sup_d2 / (row.sup_lap * (1.0 + std::log(quotient)));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace wgf
