// Exact 1D optimal transport between grid densities: CDFs, quantiles,
// W_p distances, monotone maps, Kantorovich potentials, and an entropic
// (Sinkhorn) backend kept for cross-validation.
#pragma once

#include "wgf/density.hpp"
#include "wgf/grid.hpp"

namespace wgf {

// Piecewise-linear CDF on cell boundaries e_k = a + k h. Values below
// the 1e-12 floor are zeroed before accumulation (the remaining mass is
// rescaled), so plateaus are exact and the inverse stays well posed.
struct CdfCurve {
    Grid1D grid;
    std::vector<double> edges;  // n+1 boundary abscissae
    std::vector<double> F;      // n+1 values, F[0]=0, F[n]=mass
    double mass = 1.0;

    double at(double x) const;          // evaluate F(x)
    double inverse(double s) const;     // left-continuous inverse
};

CdfCurve cdf(const Density& rho);

struct QuantileCurve {
    int m = 0;
    std::vector<double> s;  // levels (j+1/2)/m scaled by mass
    std::vector<double> Q;  // nondecreasing positions in [a,b]
    bool plateau_flagged = false;
};

// Midpoint-level quantiles (left-continuous inversion of the CDF).
// Flags densities whose widest interior zero run spans >= 25% of the
// domain, where the inverse has a jump of that size.
QuantileCurve quantile(const Density& rho, int m);

// Inverse CDF at the m+1 endpoint levels j*mass/m. Level 0 maps to the
// left edge of the support, level mass to the right edge.
std::vector<double> quantile_endpoint_levels(const Density& rho, int m);

// (sum_j |Q_rho - Q_eta|^p * mass/m)^(1/p); exact up to quadrature.
double wasserstein(const Density& rho, const Density& eta, double p, int m);

// Monotone map with T#rho = eta, T = Q_eta o F_rho, sampled at centers.
NodeField optimal_map(const Density& rho, const Density& eta);

struct PotentialPair {
    NodeField phi;  // potential for rho -> eta, normalized so that
                    // the rho-average of phi vanishes
    NodeField psi;  // reverse potential, shifted to make the discrete
                    // dual constraint phi(x)+psi(y) <= |x-y|^2/2 tight
};

PotentialPair kantorovich_potential(const Density& rho, const Density& eta);

struct SinkhornResult {
    double cost = 0.0;             // transport cost of the entropic plan
    NodeField f;                   // dual potential on rho
    NodeField g;                   // dual potential on eta
    int iterations = 0;
    double marginal_error = 0.0;   // sup-norm violation of the marginals
    bool converged = false;
};

// Log-domain scaling iterations for the cost |x-y|^2/2. Cross-validation
// backend only; nothing downstream depends on it.
SinkhornResult sinkhorn(const Density& rho, const Density& eta, double eps, int max_iter);

}  // namespace wgf
