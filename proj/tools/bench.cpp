// Times the OpenMP kernels against their serial reference paths.
#include <chrono>
#include <cstdio>
#include <random>

#include "wgf/kernels.hpp"
#include "wgf/lab2d.hpp"

using namespace wgf;
using kernels::Exec;

namespace {

template <class F>
double time_ms(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %10.3f ms   parallel %10.3f ms   speedup %5.2fx\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("wgf kernel benchmark, %d worker threads\n\n", kernels::thread_count());

    std::mt19937_64 rng(7);

    {
        const Grid2D g = build_grid2d(0.0, 1.0, 0.0, 1.0, 512, 512);
        const ScalarField2D u = random_band_limited(g, rng);
        std::vector<double> out(g.cells());
        const double ts = time_ms(
            [&] { kernels::apply_dirichlet_laplacian_2d(g.nx, g.ny, g.hx, g.hy, u.values, out,
                                                        Exec::Serial); },
            50);
        const double tp = time_ms(
            [&] { kernels::apply_dirichlet_laplacian_2d(g.nx, g.ny, g.hx, g.hy, u.values, out,
                                                        Exec::Parallel); },
            50);
        report("laplacian apply 512^2", ts, tp);
    }

    {
        const Grid2D g = build_grid2d(0.0, 1.0, 0.0, 1.0, 128, 128);
        const ScalarField2D f = random_band_limited(g, rng);
        const double ts = time_ms([&] { poisson2d_solve(f, Exec::Serial); }, 3);
        const double tp = time_ms([&] { poisson2d_solve(f, Exec::Parallel); }, 3);
        report("poisson solve 128^2", ts, tp);
    }

    {
        const Grid2D g = build_grid2d(0.0, 1.0, 0.0, 1.0, 256, 256);
        const ScalarField2D f = random_band_limited(g, rng);
        const double ts = time_ms([&] { holder_seminorm_2d(f, 0.5, Exec::Serial); }, 3);
        const double tp = time_ms([&] { holder_seminorm_2d(f, 0.5, Exec::Parallel); }, 3);
        report("holder pairwise 64^2 pts", ts, tp);
    }

    {
        const Grid2D g = build_grid2d(0.0, 1.0, 0.0, 1.0, 1024, 1024);
        const ScalarField2D u = random_band_limited(g, rng);
        const double ts = time_ms([&] { hessian_sup_l1(u, Exec::Serial); }, 10);
        const double tp = time_ms([&] { hessian_sup_l1(u, Exec::Parallel); }, 10);
        report("hessian sup 1024^2", ts, tp);
    }

    return 0;
}
