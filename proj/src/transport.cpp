#include "wgf/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wgf/kernels.hpp"
#include "wgf/poisson.hpp"

namespace wgf {

namespace {
constexpr double kDensityFloor = 1e-12;
constexpr double kMassTol = 1e-10;
}  // namespace

double CdfCurve::at(double x) const {
    if (x <= edges.front()) return 0.0;
    if (x >= edges.back()) return mass;
    const double t = (x - grid.a) / grid.h;
    const int k = std::min(static_cast<int>(t), grid.n - 1);
    const double w = t - k;
    return F[k] + w * (F[k + 1] - F[k]);
}

double CdfCurve::inverse(double s) const {
    const int n = grid.n;
    if (s <= 0.0) {
        // left edge of the support
        for (int k = 0; k < n; ++k)
            if (F[k + 1] > 0.0) return edges[k];
        return edges[0];
    }
    if (s >= mass) {
        for (int k = n; k > 0; --k)
            if (F[k - 1] < mass) return edges[k];
        return edges[n];
    }
    // first k with F[k+1] >= s; left-continuous on plateaus
    const auto it = std::lower_bound(F.begin() + 1, F.end(), s);
    const int k = static_cast<int>(it - F.begin()) - 1;
    const double dF = F[k + 1] - F[k];
    if (dF <= 0.0) return edges[k];
    return edges[k] + (s - F[k]) / dF * grid.h;
}

CdfCurve cdf(const Density& rho) {
    const Grid1D& g = rho.grid;
    CdfCurve c;
    c.grid = g;
    c.mass = rho.mass;
    c.edges.resize(g.n + 1);
    c.F.resize(g.n + 1);
    for (int k = 0; k <= g.n; ++k) c.edges[k] = g.a + k * g.h;

    std::vector<double> v(rho.values);
    double kept = 0.0;
    for (double& q : v) {
        if (q < kDensityFloor) q = 0.0;
        kept += q;
    }
    kept *= g.h;
    if (!(kept > 0.0)) throw std::invalid_argument("cdf: density vanishes after flooring");
    const double scale = rho.mass / kept;

    c.F[0] = 0.0;
    for (int k = 0; k < g.n; ++k) c.F[k + 1] = c.F[k] + v[k] * g.h * scale;
    c.F[g.n] = rho.mass;  // pin the endpoint exactly
    for (int k = 1; k < g.n; ++k) c.F[k] = std::min(c.F[k], rho.mass);
    return c;
}

QuantileCurve quantile(const Density& rho, int m) {
    if (m < 64) throw std::invalid_argument("quantile: need m >= 64");
    const CdfCurve F = cdf(rho);
    QuantileCurve q;
    q.m = m;
    q.s.resize(m);
    q.Q.resize(m);
    for (int j = 0; j < m; ++j) {
        q.s[j] = (j + 0.5) / m * rho.mass;
        q.Q[j] = F.inverse(q.s[j]);
    }
    // widest interior zero run
    double widest = 0.0, run = 0.0;
    for (int i = 1; i < rho.grid.n - 1; ++i) {
        if (rho.values[i] < kDensityFloor) {
            run += rho.grid.h;
            widest = std::max(widest, run);
        } else {
            run = 0.0;
        }
    }
    q.plateau_flagged = widest >= 0.25 * (rho.grid.b - rho.grid.a);
    return q;
}

std::vector<double> quantile_endpoint_levels(const Density& rho, int m) {
    const CdfCurve F = cdf(rho);
    std::vector<double> Q(m + 1);
    for (int j = 0; j <= m; ++j) Q[j] = F.inverse(static_cast<double>(j) / m * rho.mass);
    return Q;
}

double wasserstein(const Density& rho, const Density& eta, double p, int m) {
    if (p < 1.0) throw std::invalid_argument("wasserstein: need p >= 1");
    if (std::fabs(rho.mass - eta.mass) > kMassTol)
        throw std::invalid_argument("wasserstein: mass mismatch");
    const QuantileCurve qr = quantile(rho, m);
    const QuantileCurve qe = quantile(eta, m);
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += std::pow(std::fabs(qr.Q[j] - qe.Q[j]), p);
    return std::pow(s * rho.mass / m, 1.0 / p);
}

NodeField optimal_map(const Density& rho, const Density& eta) {
    if (std::fabs(rho.mass - eta.mass) > kMassTol)
        throw std::invalid_argument("optimal_map: mass mismatch");
    const CdfCurve Fr = cdf(rho);
    const CdfCurve Fe = cdf(eta);
    NodeField T(rho.grid);
    for (int i = 0; i < rho.grid.n; ++i) T[i] = Fe.inverse(Fr.at(rho.grid.x(i)));
    return T;
}

PotentialPair kantorovich_potential(const Density& rho, const Density& eta) {
    const Grid1D& g = rho.grid;
    const NodeField T = optimal_map(rho, eta);
    const NodeField S = optimal_map(eta, rho);

    NodeField dphi(g), dpsi(eta.grid);
    for (int i = 0; i < g.n; ++i) dphi[i] = g.x(i) - T[i];
    for (int i = 0; i < eta.grid.n; ++i) dpsi[i] = eta.grid.x(i) - S[i];

    auto cumulative = [](const NodeField& df) {
        NodeField out(df.grid);
        out[0] = 0.0;
        for (int i = 1; i < df.grid.n; ++i)
            out[i] = out[i - 1] + 0.5 * (df[i - 1] + df[i]) * df.grid.h;
        return out;
    };
    NodeField phi = cumulative(dphi);
    NodeField psi = cumulative(dpsi);

    // gauge: rho-average of phi vanishes
    double avg = 0.0;
    for (int i = 0; i < g.n; ++i) avg += phi[i] * rho.values[i] * g.h;
    avg /= rho.mass;
    for (double& v : phi.values) v -= avg;

    // shift psi so that max over grid pairs of phi(x)+psi(y)-|x-y|^2/2 is 0
    double shift = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < eta.grid.n; ++j) {
            const double d = g.x(i) - eta.grid.x(j);
            shift = std::min(shift, 0.5 * d * d - phi[i] - psi[j]);
        }
    }
    for (double& v : psi.values) v += shift;

    return PotentialPair{std::move(phi), std::move(psi)};
}

SinkhornResult sinkhorn(const Density& rho, const Density& eta, double eps, int max_iter) {
    if (!(eps > 0.0)) throw std::invalid_argument("sinkhorn: need eps > 0");
    if (std::fabs(rho.mass - eta.mass) > kMassTol)
        throw std::invalid_argument("sinkhorn: mass mismatch");
    const Grid1D& ga = rho.grid;
    const Grid1D& gb = eta.grid;
    const int na = ga.n, nb = gb.n;

    // discrete weights
    std::vector<double> wa(na), wb(nb), loga(na), logb(nb);
    for (int i = 0; i < na; ++i) {
        wa[i] = std::max(rho.values[i], kDensityFloor) * ga.h;
        loga[i] = std::log(wa[i]);
    }
    for (int j = 0; j < nb; ++j) {
        wb[j] = std::max(eta.values[j], kDensityFloor) * gb.h;
        logb[j] = std::log(wb[j]);
    }

    std::vector<double> cost(static_cast<size_t>(na) * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const double d = ga.x(i) - gb.x(j);
            cost[static_cast<size_t>(i) * nb + j] = 0.5 * d * d;
        }

    std::vector<double> f(na, 0.0), g(nb, 0.0);
    const double tol = 1e-9;
    SinkhornResult res;
    int it = 0;
    for (; it < max_iter; ++it) {
        kernels::sinkhorn_row_update(cost, logb, g, eps, na, nb, f);
        kernels::sinkhorn_col_update(cost, loga, f, eps, na, nb, g);
        const double err = kernels::sinkhorn_marginal_error(cost, loga, logb, f, g, eps, na, nb);
        if (err <= tol) {
            res.converged = true;
            res.marginal_error = err;
            break;
        }
        res.marginal_error = err;
    }
    res.iterations = std::min(it + 1, max_iter);
    res.cost = kernels::sinkhorn_cost(cost, loga, logb, f, g, eps, na, nb);
    res.f = NodeField(ga, std::move(f));
    res.g = NodeField(gb, std::move(g));
    return res;
}

}  // namespace wgf
