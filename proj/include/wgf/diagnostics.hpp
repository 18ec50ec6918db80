// Trajectory-level checks: per-step energy decrease, maximum principle,
// L-infinity growth, the discrete Fisher recursion with its Gronwall
// envelope, the five-gradients identity and remainder, the integrated
// H2 dissipation balance, tau-convergence studies against the FV
// reference, and the dual-norm comparison.
#pragma once

#include <map>
#include <random>
#include <string>

#include "wgf/jko.hpp"
#include "wgf/reference_fv.hpp"

namespace wgf {

struct CheckReport {
    std::string name;
    bool pass = false;
    std::map<std::string, double> fitted_constants;
    std::map<std::string, std::vector<double>> series;
    double worst_violation = 0.0;
    std::string notes;
};

// Omega = {h < 0} with h(x) = (x-a)(x-b); in 1D the boundary geometry
// reduces to two endpoint evaluations.
struct BoundaryGeometry {
    double a = 0.0;
    double b = 1.0;
    double h(double x) const { return (x - a) * (x - b); }
    static constexpr double hpp = 2.0;
    double grad_norm() const { return b - a; }
};

struct ErrorTable {
    std::vector<double> taus;
    std::vector<double> l2h1, l2h2, lpw1p, linfl2;
    std::vector<double> ratio_l2h1, ratio_l2h2, ratio_lpw1p, ratio_linfl2;
    double p_used = 2.0;
    bool completed = true;
    std::string error;
};

CheckReport energy_decrease_report(const Trajectory& traj);
CheckReport max_principle_report(const Trajectory& traj);
CheckReport linf_growth_report(const Trajectory& traj);
CheckReport fisher_recursion_report(const Trajectory& traj, double p);

// H(z) = |z|^p. lhs is the two-density gradient pairing, R the interior
// trace term plus the endpoint boundary terms; their match and the sign
// of R are the two pass conditions.
CheckReport five_gradients_report(const StepResult& step, const Density& rho_n,
                                  const ModelSpec& model, double p);

CheckReport h2_dissipation_report(const Trajectory& traj);

ErrorTable tau_convergence_study(const Density& rho0, const std::vector<double>& tau_list,
                                 const JkoConfig& base);

CheckReport dual_norm_check(const Density& rho, const Density& eta, double p,
                            unsigned long seed = 42);

// Strictly positive smooth density with a seeded random log-Fourier profile.
Density random_smooth_density(const Grid1D& g, std::mt19937_64& rng, double mass = 1.0);

// Assembles the transport quantities of a synthetic step between two
// densities at a chosen tau (used to exercise the five-gradients identity
// on pairs that are not JKO iterates).
StepResult make_step_from_pair(const Density& rho, const Density& eta, double tau);

// Restriction of a fine-grid density to the coarse grid obtained by
// merging adjacent cell pairs (exact cell averaging).
Density coarsen_pairs(const Density& fine);

}  // namespace wgf
