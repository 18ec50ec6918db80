// JKO proximal steps in quantile coordinates and trajectory assembly.
//
// One prox step minimizes  F(rho) + W_2^2(rho, rho_n) / (2 tau)  over the
// inverse CDF sampled at the m+1 levels j/m.  In these coordinates W_2^2 is
// a weighted diagonal quadratic, the entropy is a convex log barrier on the
// gaps, and the drift potential is frozen while a damped Newton iteration
// with monotonicity and wall safeguards solves the inner problem.  For the
// Keller-Segel model the frozen u[rho] is refreshed from the new density
// until the lag loop converges.
#pragma once

#include <optional>
#include <string>

#include "wgf/density.hpp"
#include "wgf/functionals.hpp"
#include "wgf/transport.hpp"

namespace wgf {

struct SolverError : std::runtime_error {
    enum class Kind { inner_newton, lag_loop, concentration, map_folding, cfl, negative_density };
    Kind kind;
    double residual = 0.0;
    SolverError(Kind k, const std::string& what, double res = 0.0)
        : std::runtime_error(what), kind(k), residual(res) {}
};

struct JkoConfig {
    double tau = 1e-3;
    double t_final = 0.1;
    ModelSpec model;
    double inner_tol = 1e-7;     // optimality residual target
    int inner_max_iter = 500;
    int outer_lag_iters = 30;    // frozen-u fixed point
    double outer_tol = 1e-9;     // sup-norm tolerance on u
    int quantile_m = 0;          // 0 -> 4n
    std::vector<double> p_list{2.0, 4.0, 6.0};

    void validate() const;
    int resolve_m(int n) const { return quantile_m > 0 ? quantile_m : 4 * n; }
};

struct StepResult {
    Density rho_next;
    NodeField phi;  // Kantorovich potential rho_next -> rho_n
    NodeField psi;  // reverse potential
    double w2 = 0.0;
    int inner_iterations = 0;
    int outer_iterations = 0;
    double optimality_residual = 0.0;
    double ma_residual = 0.0;
    NodeField Z;        // log rho_next - u_drift
    NodeField u_drift;  // final drift potential
    double tau = 0.0;
    double renorm_factor = 1.0;      // mass fix-up applied after resampling
    double min_gap_fraction = 0.0;   // fraction of quantile gaps at the floor
};

struct Trajectory {
    JkoConfig config;
    Grid1D grid;
    std::vector<Density> densities;        // rho^0 .. rho^N
    std::vector<FunctionalSample> samples; // one per density
    std::vector<StepResult> steps;         // one per transition
    bool completed = true;
    int error_step = -1;
    std::string error;

    // piecewise-constant interpolation: value on (n tau, (n+1) tau] is rho^{n+1}
    const Density& rho_at(double t) const;
    int step_count() const { return static_cast<int>(steps.size()); }
};

StepResult prox_step(const Density& rho_n, const JkoConfig& cfg);

Trajectory run_trajectory(const Density& rho0, const JkoConfig& cfg);

// sup over {rho > 10 eps_rho} of |phi/tau + Z - c| with c the rho-average.
double optimality_residual(const StepResult& step, const JkoConfig& cfg);

// sup over {rho > 10 eps_rho} of |rho_next(x) - rho_n(x - phi') (1 - phi'')|.
// Throws map_folding if 1 - phi'' < -1e-8 on the support.
double monge_ampere_residual(const StepResult& step, const Density& rho_n);

// C1 evaluation of a drift potential given at cell centers: the derivative
// is the linear interpolant of the discrete derivative and the value its
// exact antiderivative.
struct DriftPotential {
    Grid1D grid;
    std::vector<double> vp;    // derivative samples at centers
    std::vector<double> anti;  // antiderivative of the interpolant at centers

    explicit DriftPotential(const NodeField& V);
    double value(double x) const;
    double deriv(double x) const;
    double second(double x) const;
};

}  // namespace wgf
