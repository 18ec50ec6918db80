#include "wgf/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wgf/poisson.hpp"

namespace wgf {

ModelSpec ModelSpec::keller_segel(const Grid1D& g) {
    ModelSpec m;
    m.kind = Kind::keller_segel;
    m.V = NodeField(g);
    return m;
}

ModelSpec ModelSpec::fokker_planck(NodeField V) {
    ModelSpec m;
    m.kind = Kind::fokker_planck;
    m.V = std::move(V);
    return m;
}

NodeField drift_potential(const Density& rho, const ModelSpec& model) {
    if (model.kind == ModelSpec::Kind::keller_segel)
        return solve_dirichlet(rho.as_field()).u;
    NodeField out = model.V;
    for (double& v : out.values) v = -v;
    return out;
}

double entropy(const Density& rho) {
    double s = 0.0;
    for (double v : rho.values)
        if (v > 0.0) s += v * std::log(v);
    return s * rho.grid.h;
}

double driving_energy(const Density& rho, const ModelSpec& model) {
    const double ent = entropy(rho);
    if (model.kind == ModelSpec::Kind::keller_segel) {
        const NodeField u = solve_dirichlet(rho.as_field()).u;
        double s = 0.0;
        for (int i = 0; i < rho.size(); ++i) s += rho[i] * u[i];
        return ent - 0.5 * s * rho.grid.h;
    }
    double s = 0.0;
    for (int i = 0; i < rho.size(); ++i) s += rho[i] * model.V[i];
    return ent + s * rho.grid.h;
}

FisherResult fisher_p_ex(const Density& rho, const ModelSpec& model, double p) {
    if (p < 1.0) throw std::invalid_argument("fisher_p: need p >= 1");
    const NodeField ud = drift_potential(rho, model);
    NodeField Z(rho.grid);
    double floored = 0.0;
    for (int i = 0; i < rho.size(); ++i) {
        const double r = rho[i];
        if (r < kLogFloor) floored += r;
        Z[i] = std::log(std::max(r, kLogFloor)) - ud[i];
    }
    const NodeField dZ = derivative(Z);
    double s = 0.0;
    for (int i = 0; i < rho.size(); ++i)
        s += std::pow(std::fabs(dZ[i]), p) * rho[i];
    FisherResult res;
    res.value = s * rho.grid.h;
    res.floored_mass_fraction = floored * rho.grid.h / rho.mass;
    res.flagged = res.floored_mass_fraction > 0.01;
    return res;
}

double fisher_p(const Density& rho, const ModelSpec& model, double p) {
    return fisher_p_ex(rho, model, p).value;
}

double w1p_norm(const Density& rho, double p) {
    const NodeField f = rho.as_field();
    return lp_norm(f, p) + lp_norm(derivative(f), p);
}

double holder_seminorm(const NodeField& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("holder_seminorm: need 0 < alpha < 1");
    if (f.grid.n > 1024)
        throw std::invalid_argument("holder_seminorm: n capped at 1024 for the pairwise scan");
    const int n = f.grid.n;
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = (j - i) * f.grid.h;
            best = std::max(best, std::fabs(f[i] - f[j]) / std::pow(d, alpha));
        }
    return best;
}

double h2_seminorm(const NodeField& f) {
    return lp_norm(second_derivative(f), 2.0);
}

double gronwall_envelope(double F0, double C2, double t) {
    if (!(F0 >= 0.0) || !(t >= 0.0))
        throw std::invalid_argument("gronwall_envelope: need F0 >= 0 and t >= 0");
    const double e = std::exp(C2 * t);
    // log of (F0+1)^e * exp(e-1)
    const double lg = e * std::log1p(F0) + (e - 1.0);
    if (lg > 700.0) return std::numeric_limits<double>::infinity();
    return std::exp(lg) - 1.0;
}

FunctionalSample functional_sample(const Density& rho, const ModelSpec& model,
                                   const std::vector<double>& p_list, double t) {
    FunctionalSample s;
    s.t = t;
    s.entropy = entropy(rho);
    s.J = driving_energy(rho, model);
    s.interaction = s.J - s.entropy;
    for (double p : p_list) {
        s.fisher.push_back(fisher_p(rho, model, p));
        s.w1p.push_back(w1p_norm(rho, p));
    }
    s.min_rho = density_min(rho);
    s.max_rho = density_max(rho);
    return s;
}

}  // namespace wgf
