#include "wgf/jko.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgf/poisson.hpp"

namespace wgf {

namespace {
constexpr double kGapFloor = 1e-9;      // delta_Q monotonicity safeguard
constexpr double kSupportFloor = 10.0 * kLogFloor;
}  // namespace

void JkoConfig::validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("JkoConfig: tau must be positive");
    if (!(t_final >= tau)) throw std::invalid_argument("JkoConfig: t_final must be >= tau");
    if (!(inner_tol > 0.0 && outer_tol > 0.0))
        throw std::invalid_argument("JkoConfig: tolerances must be positive");
    if (inner_max_iter <= 0 || outer_lag_iters <= 0)
        throw std::invalid_argument("JkoConfig: iteration limits must be positive");
    if (p_list.empty()) throw std::invalid_argument("JkoConfig: p_list must not be empty");
}

DriftPotential::DriftPotential(const NodeField& V) : grid(V.grid) {
    const NodeField d = derivative(V);
    vp = d.values;
    anti.resize(grid.n);
    anti[0] = 0.0;
    for (int i = 1; i < grid.n; ++i)
        anti[i] = anti[i - 1] + 0.5 * (vp[i - 1] + vp[i]) * grid.h;
}

double DriftPotential::deriv(double x) const {
    const int n = grid.n;
    const double x0 = grid.x(0);
    const double t = (x - x0) / grid.h;
    if (t <= 0.0) {
        const double s = (vp[1] - vp[0]) / grid.h;
        return vp[0] + s * (x - x0);
    }
    if (t >= n - 1) {
        const double s = (vp[n - 1] - vp[n - 2]) / grid.h;
        return vp[n - 1] + s * (x - grid.x(n - 1));
    }
    const int i = std::min(static_cast<int>(t), n - 2);
    const double w = t - i;
    return (1.0 - w) * vp[i] + w * vp[i + 1];
}

double DriftPotential::second(double x) const {
    const int n = grid.n;
    const double t = (x - grid.x(0)) / grid.h;
    int i;
    if (t <= 0.0) i = 0;
    else if (t >= n - 1) i = n - 2;
    else i = std::min(static_cast<int>(t), n - 2);
    return (vp[i + 1] - vp[i]) / grid.h;
}

double DriftPotential::value(double x) const {
    const int n = grid.n;
    const double x0 = grid.x(0);
    const double t = (x - x0) / grid.h;
    if (t <= 0.0) {
        const double dx = x - x0;
        const double s = (vp[1] - vp[0]) / grid.h;
        return anti[0] + vp[0] * dx + 0.5 * s * dx * dx;
    }
    if (t >= n - 1) {
        const double dx = x - grid.x(n - 1);
        const double s = (vp[n - 1] - vp[n - 2]) / grid.h;
        return anti[n - 1] + vp[n - 1] * dx + 0.5 * s * dx * dx;
    }
    const int i = std::min(static_cast<int>(t), n - 2);
    const double dx = x - grid.x(i);
    const double s = (vp[i + 1] - vp[i]) / grid.h;
    return anti[i] + vp[i] * dx + 0.5 * s * dx * dx;
}

namespace {

// Inner problem state: minimize over Q in R^{m+1}
//   gm * sum_k log(gm / dQ_k) + sum_j w_j Veff(Q_j)
//   + (1/2tau) sum_j w_j (Q_j - Qn_j)^2
// subject to Q_0 >= a, Q_m <= b, dQ_k >= kGapFloor.
struct Inner {
    const Grid1D& g;
    const DriftPotential& vef;
    const std::vector<double>& Qn;
    double tau;
    double mass;
    int m;
    double gm;              // mass per gap
    std::vector<double> w;  // trapezoid weights on levels

    Inner(const Grid1D& g_, const DriftPotential& v, const std::vector<double>& Qn_,
          double tau_, double mass_)
        : g(g_), vef(v), Qn(Qn_), tau(tau_), mass(mass_) {
        m = static_cast<int>(Qn.size()) - 1;
        gm = mass / m;
        w.assign(m + 1, mass / m);
        w[0] = w[m] = 0.5 * mass / m;
    }

    bool feasible(const std::vector<double>& Q) const {
        if (Q[0] < g.a || Q[m] > g.b) return false;
        for (int k = 0; k < m; ++k)
            if (Q[k + 1] - Q[k] < kGapFloor) return false;
        return true;
    }

    double objective(const std::vector<double>& Q) const {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += std::log(gm / (Q[k + 1] - Q[k]));
        s *= gm;
        for (int j = 0; j <= m; ++j) {
            const double d = Q[j] - Qn[j];
            s += w[j] * (vef.value(Q[j]) + 0.5 * d * d / tau);
        }
        return s;
    }

    void gradient(const std::vector<double>& Q, std::vector<double>& grad) const {
        grad.assign(m + 1, 0.0);
        for (int k = 0; k < m; ++k) {
            const double inv = gm / (Q[k + 1] - Q[k]);
            grad[k] += inv;
            grad[k + 1] -= inv;
        }
        for (int j = 0; j <= m; ++j)
            grad[j] += w[j] * (vef.deriv(Q[j]) + (Q[j] - Qn[j]) / tau);
    }

    // Hessian bands; diag boost added by the caller on factorization failure.
    void hessian(const std::vector<double>& Q, std::vector<double>& lower,
                 std::vector<double>& diag, std::vector<double>& upper) const {
        lower.assign(m + 1, 0.0);
        diag.assign(m + 1, 0.0);
        upper.assign(m + 1, 0.0);
        for (int k = 0; k < m; ++k) {
            const double dq = Q[k + 1] - Q[k];
            const double c = gm / (dq * dq);
            diag[k] += c;
            diag[k + 1] += c;
            upper[k] -= c;
            lower[k + 1] -= c;
        }
        for (int j = 0; j <= m; ++j)
            diag[j] += w[j] * (vef.second(Q[j]) + 1.0 / tau);
    }
};

// Thomas elimination with pivot check; returns false on a nonpositive pivot.
bool tridiag_spd_solve(const std::vector<double>& lower, const std::vector<double>& diag,
                       const std::vector<double>& upper, const std::vector<double>& rhs,
                       int lo, int hi, std::vector<double>& x) {
    const int n = hi - lo + 1;
    if (n <= 0) return true;
    std::vector<double> c(n), d(n);
    if (diag[lo] <= 0.0) return false;
    c[0] = upper[lo] / diag[lo];
    d[0] = rhs[lo] / diag[lo];
    for (int i = 1; i < n; ++i) {
        const double piv = diag[lo + i] - lower[lo + i] * c[i - 1];
        if (piv <= 0.0) return false;
        c[i] = (i < n - 1) ? upper[lo + i] / piv : 0.0;
        d[i] = (rhs[lo + i] - lower[lo + i] * d[i - 1]) / piv;
    }
    x[lo + n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) x[lo + i] = d[i] - c[i] * x[lo + i + 1];
    return true;
}

struct InnerSolution {
    std::vector<double> Q;
    int iterations = 0;
    double residual = 0.0;
};

InnerSolution newton_solve(const Inner& prob, std::vector<double> Q, const JkoConfig& cfg) {
    const int m = prob.m;
    const double stop_tol = cfg.inner_tol / (prob.g.b - prob.g.a);
    std::vector<double> grad, lower, diag, upper, d(m + 1), trial(m + 1);
    InnerSolution sol;

    for (int iter = 1; iter <= cfg.inner_max_iter; ++iter) {
        prob.gradient(Q, grad);

        const bool pin_left = (Q[0] <= prob.g.a + 1e-14 * (prob.g.b - prob.g.a)) && grad[0] >= 0.0;
        const bool pin_right = (Q[m] >= prob.g.b - 1e-14 * (prob.g.b - prob.g.a)) && grad[m] <= 0.0;

        double res = 0.0;
        for (int j = 0; j <= m; ++j) {
            if ((j == 0 && pin_left) || (j == m && pin_right)) continue;
            res = std::max(res, std::fabs(grad[j]) / prob.w[j]);
        }
        if (pin_left) res = std::max(res, std::max(0.0, -grad[0]) / prob.w[0]);
        if (pin_right) res = std::max(res, std::max(0.0, grad[m]) / prob.w[m]);

        sol.iterations = iter - 1;
        sol.residual = res;
        if (res <= stop_tol) {
            sol.Q = std::move(Q);
            return sol;
        }

        prob.hessian(Q, lower, diag, upper);
        const int lo = pin_left ? 1 : 0;
        const int hi = pin_right ? m - 1 : m;
        std::vector<double> rhs(m + 1, 0.0);
        for (int j = lo; j <= hi; ++j) rhs[j] = -grad[j];
        std::fill(d.begin(), d.end(), 0.0);

        double boost = 0.0;
        bool ok = false;
        for (int attempt = 0; attempt < 8 && !ok; ++attempt) {
            std::vector<double> dg = diag;
            if (boost > 0.0)
                for (int j = lo; j <= hi; ++j) dg[j] += boost;
            ok = tridiag_spd_solve(lower, dg, upper, rhs, lo, hi, d);
            boost = (boost == 0.0) ? 1e-8 * prob.mass / prob.tau : boost * 10.0;
        }
        if (!ok)
            throw SolverError(SolverError::Kind::inner_newton,
                              "prox_step: Hessian factorization failed", res);

        double gd = 0.0;
        for (int j = lo; j <= hi; ++j) gd += grad[j] * d[j];

        const double G0 = prob.objective(Q);
        double alpha = 1.0;
        bool accepted = false;
        for (int halve = 0; halve < 60; ++halve) {
            for (int j = 0; j <= m; ++j) trial[j] = Q[j] + alpha * d[j];
            trial[0] = std::max(trial[0], prob.g.a);
            trial[m] = std::min(trial[m], prob.g.b);
            if (prob.feasible(trial) && prob.objective(trial) <= G0 + 1e-4 * alpha * gd) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted)
            throw SolverError(SolverError::Kind::inner_newton,
                              "prox_step: line search failed", res);
        Q.swap(trial);
    }
    throw SolverError(SolverError::Kind::inner_newton,
                      "prox_step: inner Newton did not converge", sol.residual);
}

// Cell averages of the piecewise-constant measure carried by the gaps.
Density recover_density(const Grid1D& g, const std::vector<double>& Q, double mass,
                        double* renorm_factor) {
    const int m = static_cast<int>(Q.size()) - 1;
    const double gm = mass / m;
    std::vector<double> cell_mass(g.n, 0.0);
    for (int k = 0; k < m; ++k) {
        const double ql = Q[k], qr = Q[k + 1];
        const double dq = qr - ql;
        const double dens = gm / dq;
        int i0 = std::clamp(static_cast<int>((ql - g.a) / g.h), 0, g.n - 1);
        int i1 = std::clamp(static_cast<int>((qr - g.a) / g.h), 0, g.n - 1);
        for (int i = i0; i <= i1; ++i) {
            const double el = g.a + i * g.h;
            const double er = el + g.h;
            const double ov = std::min(qr, er) - std::max(ql, el);
            if (ov > 0.0) cell_mass[i] += dens * ov;
        }
    }
    double total = 0.0;
    for (double v : cell_mass) total += v;
    const double factor = mass / total;
    if (std::fabs(factor - 1.0) > 1e-6)
        throw SolverError(SolverError::Kind::inner_newton,
                          "prox_step: resampling lost mass beyond tolerance",
                          std::fabs(factor - 1.0));
    std::vector<double> values(g.n);
    for (int i = 0; i < g.n; ++i) values[i] = std::max(cell_mass[i] * factor / g.h, 0.0);
    if (renorm_factor) *renorm_factor = factor;
    return make_density(g, std::move(values), mass);
}

}  // namespace

StepResult prox_step(const Density& rho_n, const JkoConfig& cfg) {
    cfg.validate();
    const Grid1D& g = rho_n.grid;
    const int m = cfg.resolve_m(g.n);

    std::vector<double> Qn = quantile_endpoint_levels(rho_n, m);
    // defensive plateau perturbation so the warm start is strictly feasible
    Qn[0] = std::max(Qn[0], g.a);
    for (int j = 1; j <= m; ++j) Qn[j] = std::max(Qn[j], Qn[j - 1] + kGapFloor);
    Qn[m] = std::min(Qn[m], g.b);
    for (int j = m - 1; j >= 0; --j) Qn[j] = std::min(Qn[j], Qn[j + 1] - kGapFloor);

    NodeField u_drift = drift_potential(rho_n, cfg.model);
    const bool lagged = cfg.model.kind == ModelSpec::Kind::keller_segel;

    StepResult out;
    out.tau = cfg.tau;
    int total_inner = 0;
    int outer = 0;
    Density rho_new;
    std::vector<double> Q = Qn;

    for (outer = 1; outer <= cfg.outer_lag_iters; ++outer) {
        NodeField veff = u_drift;
        for (double& v : veff.values) v = -v;
        DriftPotential dp(veff);
        Inner prob(g, dp, Qn, cfg.tau, rho_n.mass);

        InnerSolution sol = newton_solve(prob, Q, cfg);
        total_inner += sol.iterations;
        Q = std::move(sol.Q);
        rho_new = recover_density(g, Q, rho_n.mass, &out.renorm_factor);

        if (!lagged) break;
        const NodeField u_new = solve_dirichlet(rho_new.as_field()).u;
        double delta = 0.0;
        for (int i = 0; i < g.n; ++i)
            delta = std::max(delta, std::fabs(u_new[i] - u_drift[i]));
        u_drift = u_new;
        if (delta < cfg.outer_tol) break;
        if (outer == cfg.outer_lag_iters)
            throw SolverError(SolverError::Kind::lag_loop,
                              "prox_step: frozen-drift loop did not converge", delta);
    }

    // concentration guard: gaps stuck at the monotonicity floor
    int floored = 0;
    for (int k = 0; k < m; ++k)
        if (Q[k + 1] - Q[k] <= kGapFloor * (1.0 + 1e-6)) ++floored;
    out.min_gap_fraction = static_cast<double>(floored) / m;
    if (out.min_gap_fraction > 0.05)
        throw SolverError(SolverError::Kind::concentration,
                          "prox_step: mass concentration at the gap floor",
                          out.min_gap_fraction);

    out.rho_next = std::move(rho_new);
    out.inner_iterations = total_inner;
    out.outer_iterations = outer;

    PotentialPair pp = kantorovich_potential(out.rho_next, rho_n);
    out.phi = std::move(pp.phi);
    out.psi = std::move(pp.psi);
    out.w2 = wasserstein(out.rho_next, rho_n, 2.0, m);

    out.u_drift = u_drift;
    out.Z = NodeField(g);
    for (int i = 0; i < g.n; ++i)
        out.Z[i] = std::log(std::max(out.rho_next[i], kLogFloor)) - u_drift[i];

    out.optimality_residual = optimality_residual(out, cfg);
    out.ma_residual = monge_ampere_residual(out, rho_n);
    return out;
}

double optimality_residual(const StepResult& step, const JkoConfig& cfg) {
    (void)cfg;
    const Density& rho = step.rho_next;
    const int n = rho.size();
    double num = 0.0, den = 0.0;
    std::vector<double> expr(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (rho[i] <= kSupportFloor) continue;
        expr[i] = step.phi[i] / step.tau + step.Z[i];
        num += expr[i] * rho[i];
        den += rho[i];
    }
    if (den <= 0.0) return 0.0;
    const double c = num / den;
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
        if (rho[i] <= kSupportFloor) continue;
        sup = std::max(sup, std::fabs(expr[i] - c));
    }
    return sup;
}

double monge_ampere_residual(const StepResult& step, const Density& rho_n) {
    const Density& rho = step.rho_next;
    const NodeField dphi = derivative(step.phi);
    const NodeField ddphi = second_derivative(step.phi);
    const NodeField prev = rho_n.as_field();
    double sup = 0.0;
    for (int i = 0; i < rho.size(); ++i) {
        if (rho[i] <= kSupportFloor) continue;
        const double jac = 1.0 - ddphi[i];
        if (jac < -1e-8)
            throw SolverError(SolverError::Kind::map_folding,
                              "monge_ampere_residual: transport map folds", jac);
        const double back = interp_linear(prev, rho.grid.x(i) - dphi[i]);
        sup = std::max(sup, std::fabs(rho[i] - back * jac));
    }
    return sup;
}

const Density& Trajectory::rho_at(double t) const {
    if (t <= 0.0 || densities.size() == 1) return densities.front();
    const double tau = config.tau;
    int k = static_cast<int>(std::ceil(t / tau - 1e-12));
    k = std::clamp(k, 0, static_cast<int>(densities.size()) - 1);
    return densities[k];
}

Trajectory run_trajectory(const Density& rho0, const JkoConfig& cfg) {
    cfg.validate();
    Trajectory traj;
    traj.config = cfg;
    traj.grid = rho0.grid;
    traj.densities.push_back(rho0);
    traj.samples.push_back(functional_sample(rho0, cfg.model, cfg.p_list, 0.0));

    const int nsteps = static_cast<int>(std::ceil(cfg.t_final / cfg.tau - 1e-12));
    for (int k = 1; k <= nsteps; ++k) {
        try {
            StepResult step = prox_step(traj.densities.back(), cfg);
            traj.densities.push_back(step.rho_next);
            traj.samples.push_back(
                functional_sample(step.rho_next, cfg.model, cfg.p_list, k * cfg.tau));
            traj.steps.push_back(std::move(step));
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
