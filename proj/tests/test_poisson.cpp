#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wgf/poisson.hpp"

using namespace wgf;

namespace {
const double kPi = std::acos(-1.0);

double sup_err(const NodeField& got, const std::function<double(double)>& exact) {
    double m = 0.0;
    for (int i = 0; i < got.grid.n; ++i)
        m = std::max(m, std::fabs(got[i] - exact(got.grid.x(i))));
    return m;
}
}  // namespace

TEST_CASE("solve_dirichlet: f = 1 gives u = x(1-x)/2") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const Potential p = solve_dirichlet(field_from(g, [](double) { return 1.0; }));
    CHECK(sup_err(p.u, [](double x) { return x * (1.0 - x) / 2.0; }) <= 2e-5);
    CHECK(interp_linear(p.u, 0.5) == doctest::Approx(0.125).epsilon(1e-3));
}

TEST_CASE("solve_dirichlet: sine benchmark with second-order convergence") {
    auto err_at = [](int n) {
        const Grid1D g = build_grid(0.0, 1.0, n);
        const Potential p =
            solve_dirichlet(field_from(g, [](double x) { return kPi * kPi * std::sin(kPi * x); }));
        return sup_err(p.u, [](double x) { return std::sin(kPi * x); });
    };
    CHECK(err_at(256) <= 1e-4);
    const double r1 = err_at(64) / err_at(128);
    const double r2 = err_at(128) / err_at(256);
    const double r3 = err_at(256) / err_at(512);
    for (double r : {r1, r2, r3}) {
        const double order = std::log2(r);
        CHECK(order >= 1.8);
        CHECK(order <= 2.2);
    }
}

TEST_CASE("solve_dirichlet rejects non-finite input") {
    const Grid1D g = build_grid(0.0, 1.0, 16);
    NodeField f(g);
    f[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_dirichlet(f), std::invalid_argument);
}

TEST_CASE("green_function: closed-form values and boundary vanishing") {
    const Grid1D g = build_grid(0.0, 1.0, 129);  // odd, so x = 1/2 is a center
    const NodeField G = green_function(g, 0.5);
    // G(x,1/2) = x/2 for x <= 1/2
    CHECK(G[64] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sup_err(G, [](double x) { return x <= 0.5 ? 0.5 * x : 0.5 * (1.0 - x); }) <= 1e-12);

    const NodeField Gnear = green_function(g, 1e-6);
    CHECK(field_sup_abs(Gnear) <= 2e-6);

    CHECK_THROWS_AS(green_function(g, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(green_function(g, 1.5), std::invalid_argument);
}

TEST_CASE("solve_dirichlet of a narrowing bump approaches the Green's function") {
    const Grid1D g = build_grid(0.0, 1.0, 512);
    const NodeField G = green_function(g, 0.5);
    double prev = std::numeric_limits<double>::infinity();
    for (double w : {0.1, 0.05, 0.025}) {
        // triangle bump of unit mass centered at 1/2
        const NodeField bump = field_from(g, [w](double x) {
            const double t = 1.0 - std::fabs(x - 0.5) / w;
            return t > 0.0 ? t / w : 0.0;
        });
        const Potential p = solve_dirichlet(bump);
        double sup = 0.0;
        for (int i = 0; i < g.n; ++i) sup = std::max(sup, std::fabs(p.u[i] - G[i]));
        CHECK(sup <= 3.0 * w);
        CHECK(sup < prev);
        prev = sup;
    }
}

TEST_CASE("inverse_laplacian_gradient: f = 1 gives (1-2x)/2") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const NodeField s = inverse_laplacian_gradient(field_from(g, [](double) { return 1.0; }));
    CHECK(sup_err(s, [](double x) { return (1.0 - 2.0 * x) / 2.0; }) <= 2e-4);

    const NodeField zero = inverse_laplacian_gradient(NodeField(g));
    CHECK(field_sup_abs(zero) <= 1e-15);
}

TEST_CASE("inverse_laplacian_gradient of a density difference matches a dense-grid solve") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    // difference of the two half-interval uniforms
    auto diff = [](double x) { return x < 0.5 ? 2.0 : -2.0; };
    const NodeField grad = inverse_laplacian_gradient(field_from(g, diff));
    const double l2 = lp_norm(grad, 2.0);

    const Grid1D gd = build_grid(0.0, 1.0, 4096);
    const double l2_dense = lp_norm(inverse_laplacian_gradient(field_from(gd, diff)), 2.0);
    CHECK(std::fabs(l2 - l2_dense) <= 1e-3);
}

TEST_CASE("solver linearity") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    NodeField f(g), q(g);
    for (int i = 0; i < g.n; ++i) {
        f[i] = uni(rng);
        q[i] = uni(rng);
    }
    const Potential uf = solve_dirichlet(f);
    const Potential uq = solve_dirichlet(q);
    NodeField comb(g);
    for (int i = 0; i < g.n; ++i) comb[i] = 2.5 * f[i] - 0.7 * q[i];
    const Potential uc = solve_dirichlet(comb);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        worst = std::max(worst, std::fabs(uc.u[i] - 2.5 * uf.u[i] + 0.7 * uq.u[i]));
    CHECK(worst <= 1e-11);
}

TEST_CASE("discrete maximum principle: nonnegative source, nonnegative potential") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    NodeField f(g);
    for (int i = 0; i < g.n; ++i) f[i] = uni(rng);
    const Potential p = solve_dirichlet(f);
    for (int i = 0; i < g.n; ++i) CHECK(p.u[i] >= 0.0);
}

TEST_CASE("discrete self-adjointness") {
    const Grid1D g = build_grid(0.0, 1.0, 96);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    NodeField f(g), q(g);
    for (int i = 0; i < g.n; ++i) {
        f[i] = uni(rng);
        q[i] = uni(rng);
    }
    const Potential uf = solve_dirichlet(f);
    const Potential uq = solve_dirichlet(q);
    double a = 0.0, b = 0.0;
    for (int i = 0; i < g.n; ++i) {
        a += q[i] * uf.u[i];
        b += f[i] * uq.u[i];
    }
    CHECK(std::fabs(a - b) * g.h <= 1e-10);
}

TEST_CASE("discrete residual of the tridiagonal solve") {
    const Grid1D g = build_grid(0.0, 1.0, 200);
    const NodeField f = field_from(g, [](double x) { return std::cos(3.0 * x) + 0.5; });
    const Potential p = solve_dirichlet(f);
    const double h2 = g.h * g.h;
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double left = i > 0 ? p.u[i - 1] : -p.u[0];
        const double right = i < g.n - 1 ? p.u[i + 1] : -p.u[g.n - 1];
        const double res = (2.0 * p.u[i] - left - right) / h2 - f[i];
        worst = std::max(worst, std::fabs(res));
    }
    CHECK(worst <= 1e-12 * field_sup_abs(f) / h2);
}
