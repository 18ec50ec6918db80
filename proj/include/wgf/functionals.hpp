// Scalar functionals of the flow: entropy, driving energy, the family
// F_p, Sobolev and Hoelder norms, and the Gronwall envelope.
#pragma once

#include "wgf/density.hpp"
#include "wgf/grid.hpp"

namespace wgf {

constexpr double kLogFloor = 1e-10;  // eps_rho inside log

struct ModelSpec {
    enum class Kind { keller_segel, fokker_planck };
    Kind kind = Kind::keller_segel;
    NodeField V;  // confinement, used only by the Fokker-Planck kind

    static ModelSpec keller_segel(const Grid1D& g);
    static ModelSpec fokker_planck(NodeField V);
};

// Drift potential entering Z = log rho - u_drift: u[rho] for Keller-Segel,
// -V for Fokker-Planck.
NodeField drift_potential(const Density& rho, const ModelSpec& model);

struct FunctionalSample {
    double t = 0.0;
    double J = 0.0;
    double entropy = 0.0;
    double interaction = 0.0;
    std::vector<double> fisher;  // F_p per requested p
    std::vector<double> w1p;     // W^{1,p} norm per requested p
    double min_rho = 0.0;
    double max_rho = 0.0;
};

FunctionalSample functional_sample(const Density& rho, const ModelSpec& model,
                                   const std::vector<double>& p_list, double t);

// sum rho_i log rho_i h with 0 log 0 := 0.
double entropy(const Density& rho);

// KS: entropy - (1/2) int rho u[rho]; FP: entropy + int rho V.
double driving_energy(const Density& rho, const ModelSpec& model);

struct FisherResult {
    double value = 0.0;
    double floored_mass_fraction = 0.0;
    bool flagged = false;  // floor active on more than 1% of the mass
};

// F_p[rho] = int |(log rho - u_drift)'|^p rho dx, with the log floored
// at kLogFloor.
FisherResult fisher_p_ex(const Density& rho, const ModelSpec& model, double p);
double fisher_p(const Density& rho, const ModelSpec& model, double p);

// (int |rho|^p)^(1/p) + (int |rho'|^p)^(1/p).
double w1p_norm(const Density& rho, double p);

// Exact pairwise maximization over cell centers; n is capped at 1024.
double holder_seminorm(const NodeField& f, double alpha);

// (int |f''|^2)^(1/2).
double h2_seminorm(const NodeField& f);

// (F0+1)^{exp(C2 t)} exp(exp(C2 t) - 1) - 1, +infinity on overflow.
double gronwall_envelope(double F0, double C2, double t);

}  // namespace wgf
