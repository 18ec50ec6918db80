#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wgf/grid.hpp"

using namespace wgf;

namespace {
const double kPi = std::acos(-1.0);

double max_err(const NodeField& got, const std::function<double(double)>& exact) {
    double m = 0.0;
    for (int i = 0; i < got.grid.n; ++i)
        m = std::max(m, std::fabs(got[i] - exact(got.grid.x(i))));
    return m;
}
}  // namespace

TEST_CASE("build_grid produces the advertised spacings and centers") {
    const Grid1D g = build_grid(0.0, 1.0, 8);
    CHECK(g.h == 0.125);
    CHECK(g.x(0) == 0.0625);

    const Grid1D g2 = build_grid(0.0, 1.0, 256);
    CHECK(g2.h == 1.0 / 256);

    const Grid1D g3 = build_grid(-1.0, 1.0, 100);
    CHECK(g3.h == doctest::Approx(0.02));
    CHECK(g3.x(50) == doctest::Approx(0.01));

    // centers strictly increasing and interior
    for (int i = 0; i + 1 < g3.n; ++i) CHECK(g3.x(i) < g3.x(i + 1));
    CHECK(g3.x(0) > g3.a);
    CHECK(g3.x(g3.n - 1) < g3.b);
}

TEST_CASE("build_grid rejects degenerate input") {
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1.0, 1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(2.0, 1.0, 64), std::invalid_argument);
}

TEST_CASE("derivative is exact on linear and quadratic fields") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    const NodeField fx = field_from(g, [](double x) { return x; });
    CHECK(max_err(derivative(fx), [](double) { return 1.0; }) <= 1e-12);

    const NodeField fx2 = field_from(g, [](double x) { return x * x; });
    CHECK(max_err(derivative(fx2), [](double x) { return 2.0 * x; }) <= 1e-10);
}

TEST_CASE("derivative of sin converges at second order") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const NodeField f = field_from(g, [](double x) { return std::sin(kPi * x); });
    const double e256 = max_err(derivative(f), [](double x) { return kPi * std::cos(kPi * x); });
    CHECK(e256 <= 5e-4);

    const Grid1D g2 = build_grid(0.0, 1.0, 512);
    const NodeField f2 = field_from(g2, [](double x) { return std::sin(kPi * x); });
    const double e512 = max_err(derivative(f2), [](double x) { return kPi * std::cos(kPi * x); });
    const double ratio = e256 / e512;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("second_derivative is exact on quadratics and constants") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    const NodeField fx2 = field_from(g, [](double x) { return x * x; });
    CHECK(max_err(second_derivative(fx2), [](double) { return 2.0; }) <= 1e-10);

    const NodeField c = field_from(g, [](double) { return 3.7; });
    CHECK(max_err(second_derivative(c), [](double) { return 0.0; }) <= 1e-10);
}

TEST_CASE("second_derivative of sin converges at second order") {
    auto err_at = [](int n) {
        const Grid1D g = build_grid(0.0, 1.0, n);
        const NodeField f = field_from(g, [](double x) { return std::sin(kPi * x); });
        return max_err(second_derivative(f),
                       [](double x) { return -kPi * kPi * std::sin(kPi * x); });
    };
    const double e256 = err_at(256);
    CHECK(e256 <= 5e-3);
    const double ratio = e256 / err_at(512);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("integrate: midpoint rule values") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    CHECK(integrate(field_from(g, [](double) { return 1.0; })) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(integrate(field_from(g, [](double x) { return x; })) - 0.5) <= 1e-14);
    const double got = integrate(field_from(g, [](double x) { return x * (1.0 - x) / 2.0; }));
    CHECK(std::fabs(got - 1.0 / 12.0) <= 1e-6);
}

TEST_CASE("derivative operators are linear") {
    const Grid1D g = build_grid(0.0, 2.0, 128);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    NodeField f(g), q(g);
    for (int i = 0; i < g.n; ++i) {
        f[i] = uni(rng);
        q[i] = uni(rng);
    }
    const double alpha = 1.7, beta = -0.3;
    NodeField comb(g);
    for (int i = 0; i < g.n; ++i) comb[i] = alpha * f[i] + beta * q[i];

    for (auto op : {derivative, second_derivative}) {
        const NodeField lhs = op(comb);
        const NodeField df = op(f), dq = op(q);
        double worst = 0.0;
        for (int i = 0; i < g.n; ++i)
            worst = std::max(worst, std::fabs(lhs[i] - alpha * df[i] - beta * dq[i]));
        CHECK(worst <= 1e-12 * (1.0 / (g.h * g.h)));
    }
}

TEST_CASE("fundamental theorem: integrate(derivative(f)) = f(b) - f(a) + O(h^2)") {
    auto ftc_err = [](int n) {
        const Grid1D g = build_grid(0.0, 1.0, n);
        const NodeField f = field_from(g, [](double x) { return std::exp(x); });
        const double exact = std::exp(1.0) - 1.0;
        return std::fabs(integrate(derivative(f)) - exact);
    };
    const double e128 = ftc_err(128);
    const double e256 = ftc_err(256);
    CHECK(e128 <= 1e-3);
    const double ratio = e128 / e256;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("NodeField validates length") {
    const Grid1D g = build_grid(0.0, 1.0, 16);
    CHECK_THROWS_AS(NodeField(g, std::vector<double>(15, 0.0)), std::invalid_argument);
}
