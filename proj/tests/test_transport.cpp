#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wgf/diagnostics.hpp"
#include "wgf/transport.hpp"

using namespace wgf;

namespace {

Density half_left(const Grid1D& g) {
    std::vector<double> v(g.n, 0.0);
    for (int i = 0; i < g.n; ++i)
        if (g.x(i) < 0.5) v[i] = 2.0;
    return make_density(g, std::move(v), 1.0);
}

Density half_right(const Grid1D& g) {
    std::vector<double> v(g.n, 0.0);
    for (int i = 0; i < g.n; ++i)
        if (g.x(i) > 0.5) v[i] = 2.0;
    return make_density(g, std::move(v), 1.0);
}

Density truncated_gaussian(const Grid1D& g, double c, double s) {
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = std::exp(-std::pow((g.x(i) - c) / s, 2) / 2.0);
    return normalize_to_mass(g, v, 1.0);
}

}  // namespace

TEST_CASE("cdf: uniform density gives F(x) = x") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const CdfCurve F = cdf(preset_uniform(g));
    double worst = 0.0;
    for (int k = 0; k <= g.n; ++k) worst = std::max(worst, std::fabs(F.F[k] - F.edges[k]));
    CHECK(worst <= 1e-12);
    CHECK(F.at(0.3) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("cdf: half-interval exhausts mass at 1/2") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const CdfCurve F = cdf(half_left(g));
    CHECK(F.at(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(F.at(1.0) == 1.0);
}

TEST_CASE("cdf of a random normalized field is monotone with exact endpoint") {
    const Grid1D g = build_grid(0.0, 1.0, 200);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> v(g.n);
    for (double& q : v) q = uni(rng);
    const Density rho = normalize_to_mass(g, v, 1.0);
    const CdfCurve F = cdf(rho);
    for (int k = 0; k < g.n; ++k) CHECK(F.F[k + 1] >= F.F[k]);
    CHECK(F.F[g.n] == 1.0);
}

TEST_CASE("quantile: uniform gives Q(s) = s") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const QuantileCurve q = quantile(preset_uniform(g), 512);
    double worst = 0.0;
    for (int j = 0; j < q.m; ++j) worst = std::max(worst, std::fabs(q.Q[j] - q.s[j]));
    CHECK(worst <= 1e-12);
    CHECK_FALSE(q.plateau_flagged);
}

TEST_CASE("quantile: half-interval gives Q(s) = s/2") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const QuantileCurve q = quantile(half_left(g), 256);
    double worst = 0.0;
    for (int j = 0; j < q.m; ++j) worst = std::max(worst, std::fabs(q.Q[j] - 0.5 * q.s[j]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("quantile matches a bisection oracle on a truncated Gaussian") {
    const Grid1D g = build_grid(0.0, 1.0, 2048);
    const Density rho = truncated_gaussian(g, 0.4, 0.15);
    const CdfCurve F = cdf(rho);
    const QuantileCurve q = quantile(rho, 256);
    // oracle: bisection on the same monotone CDF evaluator
    double worst = 0.0;
    for (int j = 0; j < q.m; ++j) {
        double lo = g.a, hi = g.b;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (F.at(mid) < q.s[j] ? lo : hi) = mid;
        }
        worst = std::max(worst, std::fabs(q.Q[j] - 0.5 * (lo + hi)));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("quantile flags wide interior plateaus") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    std::vector<double> v(g.n, 0.0);
    for (int i = 0; i < g.n; ++i)
        if (g.x(i) < 0.25 || g.x(i) > 0.75) v[i] = 2.0;
    const Density rho = normalize_to_mass(g, v, 1.0);
    const QuantileCurve q = quantile(rho, 256);
    CHECK(q.plateau_flagged);
    for (int j = 0; j + 1 < q.m; ++j) CHECK(q.Q[j + 1] >= q.Q[j]);
}

TEST_CASE("wasserstein: identical densities give zero") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const Density rho = truncated_gaussian(g, 0.5, 0.2);
    CHECK(wasserstein(rho, rho, 2.0, 512) <= 1e-12);
}

TEST_CASE("wasserstein: half-interval pair gives 1/2 for every p") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const Density a = half_left(g);
    const Density b = half_right(g);
    for (double p : {1.0, 2.0, 4.0, 6.0})
        CHECK(std::fabs(wasserstein(a, b, p, 1024) - 0.5) <= 1e-10);
}

TEST_CASE("wasserstein agrees with a 10x denser quantile quadrature") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const Density a = preset_uniform(g);
    const Density b = truncated_gaussian(g, 0.45, 0.18);
    const double w = wasserstein(a, b, 2.0, 1024);
    const double w_dense = wasserstein(a, b, 2.0, 10240);
    CHECK(std::fabs(w - w_dense) <= 1e-5);
}

TEST_CASE("wasserstein rejects mass mismatch") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const Density a = preset_uniform(g, 1.0);
    const Density b = preset_uniform(g, 2.0);
    CHECK_THROWS_AS(wasserstein(a, b, 2.0, 256), std::invalid_argument);
}

TEST_CASE("optimal_map: identity on equal densities") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const Density rho = truncated_gaussian(g, 0.5, 0.25);
    const NodeField T = optimal_map(rho, rho);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        if (rho[i] > 1e-8) worst = std::max(worst, std::fabs(T[i] - g.x(i)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("optimal_map: half-intervals translate by 1/2") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const NodeField T = optimal_map(half_left(g), half_right(g));
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        if (g.x(i) < 0.5) worst = std::max(worst, std::fabs(T[i] - (g.x(i) + 0.5)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("optimal_map: monotone with small pushforward residual") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    std::mt19937_64 rng(23);
    const Density a = random_smooth_density(g, rng);
    const Density b = random_smooth_density(g, rng);
    const NodeField T = optimal_map(a, b);
    for (int i = 0; i + 1 < g.n; ++i) CHECK(T[i + 1] >= T[i] - 1e-12);

    const CdfCurve Fa = cdf(a);
    const CdfCurve Fb = cdf(b);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        worst = std::max(worst, std::fabs(Fa.at(g.x(i)) - Fb.at(T[i])));
    CHECK(worst <= 2.0 * g.h);
}

TEST_CASE("kantorovich_potential: identical densities give phi = 0") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const Density rho = truncated_gaussian(g, 0.5, 0.2);
    const PotentialPair pp = kantorovich_potential(rho, rho);
    CHECK(field_sup_abs(pp.phi) <= 1e-12);
}

TEST_CASE("kantorovich_potential: half-intervals give slope -1/2 on the support") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const PotentialPair pp = kantorovich_potential(half_left(g), half_right(g));
    const NodeField dphi = derivative(pp.phi);
    double worst = 0.0;
    for (int i = 2; i < g.n; ++i)
        if (g.x(i) < 0.5 - 2.0 * g.h) worst = std::max(worst, std::fabs(dphi[i] + 0.5));
    CHECK(worst <= 1e-9);
}

TEST_CASE("link identity: W_p^p / tau^p equals the phi-gradient integral") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const Density a = random_smooth_density(g, rng);
        const Density b = random_smooth_density(g, rng);
        const PotentialPair pp = kantorovich_potential(a, b);
        const NodeField dphi = derivative(pp.phi);
        for (double p : {1.0, 2.0, 4.0, 6.0}) {
            const double w = std::pow(wasserstein(a, b, p, 4 * g.n), p);
            double s = 0.0;
            for (int i = 0; i < g.n; ++i)
                s += std::pow(std::fabs(dphi[i]), p) * a.values[i];
            s *= g.h;
            CHECK(std::fabs(w - s) <= 1e-4 * std::max(w, 1e-30));
        }
    }
}

TEST_CASE("dual feasibility spot check") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    std::mt19937_64 rng(37);
    const Density a = random_smooth_density(g, rng);
    const Density b = random_smooth_density(g, rng);
    const PotentialPair pp = kantorovich_potential(a, b);
    std::uniform_int_distribution<int> pick(0, g.n - 1);
    for (int t = 0; t < 500; ++t) {
        const int i = pick(rng), j = pick(rng);
        const double d = g.x(i) - g.x(j);
        CHECK(pp.phi[i] + pp.psi[j] <= 0.5 * d * d + 1e-6);
    }
}

TEST_CASE("c-concavity proxy: 1 - phi'' stays nonnegative on the support") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    std::mt19937_64 rng(41);
    const Density a = random_smooth_density(g, rng);
    const Density b = random_smooth_density(g, rng);
    const PotentialPair pp = kantorovich_potential(a, b);
    const NodeField ddphi = second_derivative(pp.phi);
    for (int i = 1; i + 1 < g.n; ++i)
        if (a[i] > 1e-12) CHECK(1.0 - ddphi[i] >= -1e-8);
}

TEST_CASE("wasserstein symmetry, triangle inequality, translation covariance") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    std::mt19937_64 rng(43);
    const Density a = random_smooth_density(g, rng);
    const Density b = random_smooth_density(g, rng);
    const Density c = random_smooth_density(g, rng);
    for (double p : {1.0, 2.0, 3.0}) {
        CHECK(std::fabs(wasserstein(a, b, p, 512) - wasserstein(b, a, p, 512)) <= 1e-12);
        CHECK(wasserstein(a, c, p, 512) <=
              wasserstein(a, b, p, 512) + wasserstein(b, c, p, 512) + 1e-10);
    }

    // translation by an integer number of cells, supports kept interior
    const int shift = 8;
    std::vector<double> va(g.n, 0.0), vb(g.n, 0.0), vas(g.n, 0.0), vbs(g.n, 0.0);
    for (int i = g.n / 4; i < g.n / 2; ++i) {
        va[i] = 1.0;
        vb[i + 10] = 1.0;
        vas[i + shift] = 1.0;
        vbs[i + 10 + shift] = 1.0;
    }
    const Density A = normalize_to_mass(g, va), B = normalize_to_mass(g, vb);
    const Density As = normalize_to_mass(g, vas), Bs = normalize_to_mass(g, vbs);
    CHECK(std::fabs(wasserstein(A, B, 2.0, 512) - wasserstein(As, Bs, 2.0, 512)) <= 1e-10);
}

TEST_CASE("sinkhorn: identical densities, cost vanishes with eps") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    const Density rho = truncated_gaussian(g, 0.5, 0.2);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {4e-2, 2e-2, 1e-2}) {
        const SinkhornResult res = sinkhorn(rho, rho, eps, 20000);
        CHECK(res.converged);
        CHECK(res.cost < prev);
        prev = res.cost;
    }
    CHECK(prev <= 1e-2);
}

TEST_CASE("sinkhorn: half-interval pair approaches W2^2/2 = 0.125") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    const Density a = half_left(g);
    const Density b = half_right(g);
    double prev_err = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 5e-3, 2.5e-3}) {
        const SinkhornResult res = sinkhorn(a, b, eps, 40000);
        CHECK(res.converged);
        const double err = std::fabs(res.cost - 0.125);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err <= 6e-3);
}

TEST_CASE("sinkhorn: marginal violation small at convergence on random pairs") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    std::mt19937_64 rng(53);
    for (int t = 0; t < 3; ++t) {
        const Density a = random_smooth_density(g, rng);
        const Density b = random_smooth_density(g, rng);
        const SinkhornResult res = sinkhorn(a, b, 1e-2, 20000);
        CHECK(res.converged);
        CHECK(res.marginal_error <= 1e-8);
    }
}
