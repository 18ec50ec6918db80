// Nonnegative cell-centered densities with fixed total mass, plus the
// initial-datum presets used by the experiment runner.
#pragma once

#include <string>

#include "wgf/grid.hpp"

namespace wgf {

struct Density {
    Grid1D grid;
    std::vector<double> values;
    double mass = 1.0;

    Density() = default;
    int size() const { return grid.n; }
    double operator[](int i) const { return values[i]; }
    NodeField as_field() const { return NodeField(grid, values); }
};

// Validates nonnegativity and |sum rho_i h - mass| <= 1e-12.
Density make_density(const Grid1D& g, std::vector<double> values, double mass = 1.0);

// Scales a nonnegative field to the requested mass.
Density normalize_to_mass(const Grid1D& g, const std::vector<double>& values, double mass = 1.0);

double density_min(const Density& rho);
double density_max(const Density& rho);

// Presets. All produce strictly positive densities of the given mass.
Density preset_uniform(const Grid1D& g, double mass = 1.0);
Density preset_cos_perturbed(const Grid1D& g, double amplitude = 0.5, double mass = 1.0);
// Gibbs state e^{-V}/Z sampled at cell centers and renormalized, so that
// log(rho) + V is constant on the lattice to machine precision.
Density preset_gibbs(const Grid1D& g, const NodeField& V, double mass = 1.0);
Density preset_two_bumps(const Grid1D& g, double c1, double c2, double width,
                         double base = 0.1, double mass = 1.0);
// Single column of cell values read from a CSV file (one value per line).
Density preset_from_csv(const Grid1D& g, const std::string& path, double mass = 1.0);

}  // namespace wgf
