// Semi-implicit finite-volume reference solver: implicit diffusion,
// explicit upwinded drift, exact flux-form mass conservation.
#pragma once

#include "wgf/density.hpp"
#include "wgf/functionals.hpp"
#include "wgf/jko.hpp"

namespace wgf {

struct FvConfig {
    double tau_fv = 0.0;  // 0 -> tau_jko / 10 when driven from a JkoConfig
    ModelSpec model;

    void validate() const;
};

// One step. Throws SolverError(cfl) when tau_fv > h / (2 max |u_drift'|)
// and SolverError(negative_density) if the update dips below zero.
Density fv_step(const Density& rho_n, const FvConfig& cfg);

struct FvTrajectory {
    FvConfig config;
    double tau_fv = 0.0;
    Grid1D grid;
    std::vector<Density> densities;
    std::vector<FunctionalSample> samples;
    bool completed = true;
    int error_step = -1;
    std::string error;

    const Density& rho_at(double t) const;
};

FvTrajectory run_reference(const Density& rho0, double t_final, const FvConfig& cfg,
                           const std::vector<double>& p_list = {2.0});

}  // namespace wgf
