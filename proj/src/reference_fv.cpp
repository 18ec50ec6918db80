#include "wgf/reference_fv.hpp"

#include <algorithm>
#include <cmath>

#include "wgf/poisson.hpp"

namespace wgf {

void FvConfig::validate() const {
    if (!(tau_fv > 0.0)) throw std::invalid_argument("FvConfig: tau_fv must be positive");
}

Density fv_step(const Density& rho_n, const FvConfig& cfg) {
    cfg.validate();
    const Grid1D& g = rho_n.grid;
    const int n = g.n;
    const double h = g.h;
    const double tau = cfg.tau_fv;

    const NodeField ud = drift_potential(rho_n, cfg.model);

    // face velocities v_{i+1/2} = (u_{i+1} - u_i)/h; boundary faces carry no flux
    std::vector<double> v(n + 1, 0.0);
    double vmax = 0.0;
    for (int i = 1; i < n; ++i) {
        v[i] = (ud[i] - ud[i - 1]) / h;
        vmax = std::max(vmax, std::fabs(v[i]));
    }
    if (vmax > 0.0 && tau > h / (2.0 * vmax))
        throw SolverError(SolverError::Kind::cfl,
                          "fv_step: explicit drift violates the CFL guard", tau * 2.0 * vmax / h);

    // explicit upwind drift flux
    std::vector<double> flux(n + 1, 0.0);
    for (int i = 1; i < n; ++i)
        flux[i] = v[i] >= 0.0 ? v[i] * rho_n[i - 1] : v[i] * rho_n[i];

    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i)
        rhs[i] = rho_n[i] - tau / h * (flux[i + 1] - flux[i]);

    // implicit diffusion with no-flux boundary rows
    const double r = tau / (h * h);
    std::vector<double> lower(n, -r), diag(n, 1.0 + 2.0 * r), upper(n, -r);
    diag[0] = 1.0 + r;
    diag[n - 1] = 1.0 + r;
    std::vector<double> next = thomas_solve(lower, diag, upper, rhs);

    for (double q : next)
        if (q < 0.0)
            throw SolverError(SolverError::Kind::negative_density,
                              "fv_step: negative density after update", q);
    return make_density(g, std::move(next), rho_n.mass);
}

const Density& FvTrajectory::rho_at(double t) const {
    if (t <= 0.0 || densities.size() == 1) return densities.front();
    int k = static_cast<int>(std::ceil(t / tau_fv - 1e-12));
    k = std::clamp(k, 0, static_cast<int>(densities.size()) - 1);
    return densities[k];
}

FvTrajectory run_reference(const Density& rho0, double t_final, const FvConfig& cfg,
                           const std::vector<double>& p_list) {
    cfg.validate();
    FvTrajectory traj;
    traj.config = cfg;
    traj.tau_fv = cfg.tau_fv;
    traj.grid = rho0.grid;
    traj.densities.push_back(rho0);
    traj.samples.push_back(functional_sample(rho0, cfg.model, p_list, 0.0));

    const int nsteps = static_cast<int>(std::ceil(t_final / cfg.tau_fv - 1e-12));
    for (int k = 1; k <= nsteps; ++k) {
        try {
            Density next = fv_step(traj.densities.back(), cfg);
            traj.samples.push_back(functional_sample(next, cfg.model, p_list, k * cfg.tau_fv));
            traj.densities.push_back(std::move(next));
        } catch (const SolverError& err) {
            traj.completed = false;
            traj.error_step = k;
            traj.error = err.what();
            break;
        }
    }
    return traj;
}

}  // namespace wgf
