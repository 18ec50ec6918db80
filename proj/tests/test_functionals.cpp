#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wgf/diagnostics.hpp"
#include "wgf/functionals.hpp"
#include "wgf/poisson.hpp"

using namespace wgf;

namespace {
const double kPi = std::acos(-1.0);

NodeField quadratic_well(const Grid1D& g, double strength = 8.0, double center = 0.5) {
    return field_from(g, [&](double x) { return strength * (x - center) * (x - center); });
}

// composite Simpson oracle on [0,1]
double simpson(const std::function<double(double)>& f, int n) {
    double s = f(0.0) + f(1.0);
    for (int i = 1; i < n; ++i) s += f(i / static_cast<double>(n)) * (i % 2 ? 4.0 : 2.0);
    return s / (3.0 * n);
}
}  // namespace

TEST_CASE("entropy: uniform is zero, half-interval is log 2, Jensen bound") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    CHECK(std::fabs(entropy(preset_uniform(g))) <= 1e-13);

    std::vector<double> v(g.n, 0.0);
    for (int i = 0; i < g.n; ++i)
        if (g.x(i) < 0.5) v[i] = 2.0;
    CHECK(std::fabs(entropy(make_density(g, std::move(v))) - std::log(2.0)) <= 1e-10);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t)
        CHECK(entropy(random_smooth_density(g, rng)) >= -1e-12);
}

TEST_CASE("driving_energy: Keller-Segel uniform gives -1/24") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const ModelSpec ks = ModelSpec::keller_segel(g);
    CHECK(std::fabs(driving_energy(preset_uniform(g), ks) + 1.0 / 24.0) <= 1e-5);
}

TEST_CASE("driving_energy: Fokker-Planck cases") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const ModelSpec free_fp = ModelSpec::fokker_planck(NodeField(g));
    CHECK(std::fabs(driving_energy(preset_uniform(g), free_fp)) <= 1e-13);

    const NodeField V = quadratic_well(g);
    const ModelSpec fp = ModelSpec::fokker_planck(V);
    const Density gibbs = preset_gibbs(g, V);
    const double logZ =
        std::log(simpson([](double x) { return std::exp(-8.0 * (x - 0.5) * (x - 0.5)); }, 200000));
    CHECK(std::fabs(driving_energy(gibbs, fp) + logZ) <= 1e-5);
}

TEST_CASE("fisher_p: Keller-Segel uniform closed forms") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const ModelSpec ks = ModelSpec::keller_segel(g);
    const Density uni = preset_uniform(g);
    // Z' = -u' = -(1-2x)/2, so F_2 = 1/12 and F_p = 2^{-p}/(p+1)
    CHECK(std::fabs(fisher_p(uni, ks, 2.0) - 1.0 / 12.0) <= 1e-4);
    CHECK(std::fabs(fisher_p(uni, ks, 4.0) - 0.0125) <= 1e-4);
}

TEST_CASE("fisher_p vanishes at the Gibbs state") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const NodeField V = quadratic_well(g);
    const ModelSpec fp = ModelSpec::fokker_planck(V);
    const Density gibbs = preset_gibbs(g, V);
    CHECK(fisher_p(gibbs, fp, 2.0) <= 1e-6);

    const FisherResult fr = fisher_p_ex(gibbs, fp, 2.0);
    CHECK_FALSE(fr.flagged);
}

TEST_CASE("fisher_p is zero iff Z is constant on the support") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const ModelSpec free_fp = ModelSpec::fokker_planck(NodeField(g));
    // uniform with V = 0: Z = log 1 = const -> zero
    CHECK(fisher_p(preset_uniform(g), free_fp, 2.0) <= 1e-12);
    // non-constant Z -> strictly positive
    const Density cosd = preset_cos_perturbed(g, 0.5);
    CHECK(fisher_p(cosd, free_fp, 2.0) >= 1e-3);
}

TEST_CASE("w1p_norm: uniform is 1 for every p, cosine matches closed form") {
    const Grid1D g = build_grid(0.0, 1.0, 512);
    const Density uni = preset_uniform(g);
    for (double p : {1.5, 2.0, 4.0, 6.0})
        CHECK(std::fabs(w1p_norm(uni, p) - 1.0) <= 1e-12);

    // rho = 1 + cos(pi x)/2: |rho|_2 = sqrt(9/8), |rho'|_2 = pi/(2 sqrt 2)
    const Density cosd = preset_cos_perturbed(g, 0.5);
    const double expect = std::sqrt(9.0 / 8.0) + kPi / (2.0 * std::sqrt(2.0));
    CHECK(std::fabs(w1p_norm(cosd, 2.0) - expect) <= 1e-3);
}

TEST_CASE("holder_seminorm: constants, linear field, square-root cusp") {
    const Grid1D g = build_grid(0.0, 1.0, 1024);
    CHECK(holder_seminorm(field_from(g, [](double) { return 2.0; }), 0.5) == 0.0);

    // f = x at alpha = 1/2: sup |x-y|^{1/2} approaches 1 at the diameter
    const double lin = holder_seminorm(field_from(g, [](double x) { return x; }), 0.5);
    CHECK(std::fabs(lin - 1.0) <= 1e-3);

    // odd cell count puts a center at exactly 1/2
    const Grid1D go = build_grid(0.0, 1.0, 1023);
    const double cusp =
        holder_seminorm(field_from(go, [](double x) { return std::sqrt(std::fabs(x - 0.5)); }), 0.5);
    CHECK(std::fabs(cusp - 1.0) <= 2e-2);

    CHECK_THROWS_AS(holder_seminorm(NodeField(g), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(holder_seminorm(NodeField(g), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(holder_seminorm(NodeField(build_grid(0, 1, 2048)), 0.5),
                    std::invalid_argument);
}

TEST_CASE("holder_seminorm is nonincreasing in alpha for bounded fields on a unit domain") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 5; ++t) {
        const Density rho = random_smooth_density(g, rng);
        NodeField f = rho.as_field();
        const double sup = field_sup_abs(f);
        for (double& v : f.values) v /= sup;  // |f|_inf <= 1
        const double s25 = holder_seminorm(f, 0.25);
        const double s50 = holder_seminorm(f, 0.5);
        const double s75 = holder_seminorm(f, 0.75);
        CHECK(s25 <= s50 + 1e-12);
        CHECK(s50 <= s75 + 1e-12);
    }
}

TEST_CASE("h2_seminorm closed forms") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    CHECK(h2_seminorm(field_from(g, [](double x) { return 3.0 * x - 1.0; })) <= 1e-9);
    CHECK(std::fabs(h2_seminorm(field_from(g, [](double x) { return x * x; })) - 2.0) <= 1e-8);
    const double expect = kPi * kPi / std::sqrt(2.0);  // 6.9790
    CHECK(std::fabs(h2_seminorm(field_from(g, [](double x) { return std::sin(kPi * x); })) -
                    expect) <= 1e-2);
}

TEST_CASE("gronwall_envelope: endpoint values and monotonicity") {
    CHECK(gronwall_envelope(0.7, 2.0, 0.0) == doctest::Approx(0.7).epsilon(1e-14));
    const double expect = std::exp(std::exp(1.0) - 1.0) - 1.0;  // 4.5749
    CHECK(gronwall_envelope(0.0, 1.0, 1.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::isinf(gronwall_envelope(1.0, 10.0, 100.0)));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        const double f0 = uni(rng), c2 = uni(rng), tt = uni(rng);
        const double base = gronwall_envelope(f0, c2, tt);
        CHECK(gronwall_envelope(f0 + 0.1, c2, tt) >= base);
        CHECK(gronwall_envelope(f0, c2 + 0.1, tt) >= base);
        CHECK(gronwall_envelope(f0, c2, tt + 0.1) >= base);
    }
}

TEST_CASE("functional_sample satisfies the J decomposition identity") {
    const Grid1D g = build_grid(0.0, 1.0, 128);
    const ModelSpec ks = ModelSpec::keller_segel(g);
    std::mt19937_64 rng(13);
    const Density rho = random_smooth_density(g, rng);
    const FunctionalSample s = functional_sample(rho, ks, {2.0, 4.0}, 0.3);
    CHECK(std::fabs(s.J - s.entropy - s.interaction) <= 1e-12);
    CHECK(s.fisher.size() == 2);
    CHECK(s.w1p.size() == 2);
    CHECK(s.min_rho > 0.0);
}
